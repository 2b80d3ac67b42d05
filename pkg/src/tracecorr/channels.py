"""Phase damping and generalized amplitude damping on two qubits.

Channels act locally, ``E(rho) = sum_ij (E_i⊗E_j) rho (E_i⊗E_j)^†``, with
decoherence probability ``p_s = 1 - exp(-gamma_s t)`` per qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .correlations import quantum_discord_1norm, total_correlation
from .errors import IncompleteKrausSet, ParameterOutOfRange
from .matrixlab import I2, SZ, dagger, kron
from .xstates import BellTriple, CorrelationParams, effective_bell, params_from_matrix, params_matrix

KRAUS_TOL = 1e-12


class ChannelKind(str, Enum):
    PD = "pd"
    GAD = "gad"


class Convention(str, Enum):
    """How dimensionless time maps onto the decay exponents.

    ``KRAUS`` uses ``p_s = 1 - exp(-gamma_s t)`` literally. ``HALFTIME``
    doubles every exponent (a Lindblad-rate reading of the same rates).
    """

    KRAUS = "kraus"
    HALFTIME = "halftime"

    @property
    def rate_multiplier(self):
        return 1.0 if self is Convention.KRAUS else 2.0


@dataclass(frozen=True)
class ChannelSpec:
    kind: ChannelKind = ChannelKind.PD
    gamma_a: float = 0.5
    gamma_b: float = 0.5
    lambda_a: float = 0.5
    lambda_b: float = 0.5
    convention: Convention = Convention.KRAUS

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        object.__setattr__(self, "convention", Convention(self.convention))
        if self.gamma_a < 0 or self.gamma_b < 0:
            raise ParameterOutOfRange("decoherence rates must be nonnegative")
        for lam in (self.lambda_a, self.lambda_b):
            if not 0.0 <= lam <= 1.0:
                raise ParameterOutOfRange(f"GAD bias {lam} outside [0, 1]")

    @property
    def decoherence_time(self):
        total = self.gamma_a + self.gamma_b
        return math.inf if total == 0 else 1.0 / total

    def probabilities(self, tau):
        """Per-qubit ``p_s`` at dimensionless time ``tau = (gamma_a + gamma_b) t``."""
        t = tau * self.decoherence_time if self.gamma_a + self.gamma_b > 0 else 0.0
        return -math.expm1(-self.gamma_a * t), -math.expm1(-self.gamma_b * t)


@dataclass
class TrajectoryRecord:
    tau: float
    c1t: float
    c2t: float
    c3t: float
    cg: float
    qg: Optional[float] = None
    tg: Optional[float] = None
    extra: dict = field(default_factory=dict)

    @property
    def triple(self):
        return BellTriple(self.c1t, self.c2t, self.c3t)


def kraus_set(kind, p, lam=0.5):
    """Single-qubit Kraus operators for PD or GAD."""
    kind = ChannelKind(kind)
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"probability {p} outside [0, 1]")
    if not 0.0 <= lam <= 1.0:
        raise ParameterOutOfRange(f"bias {lam} outside [0, 1]")
    if kind is ChannelKind.PD:
        return [math.sqrt(1 - p / 2) * I2, math.sqrt(p / 2) * SZ]
    q = math.sqrt(1 - p)
    sp = math.sqrt(p)
    return [
        math.sqrt(lam) * np.array([[1, 0], [0, q]], dtype=complex),
        math.sqrt(lam) * np.array([[0, sp], [0, 0]], dtype=complex),
        math.sqrt(1 - lam) * np.array([[q, 0], [0, 1]], dtype=complex),
        math.sqrt(1 - lam) * np.array([[0, 0], [sp, 0]], dtype=complex),
    ]


def completeness_error(kraus):
    total = sum(dagger(k) @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def apply_local_channels(rho, kraus_a, kraus_b):
    """Operator-sum application of independent channels on the two qubits."""
    for name, ks in (("qubit A", kraus_a), ("qubit B", kraus_b)):
        err = completeness_error(ks)
        if err > KRAUS_TOL:
            raise IncompleteKrausSet(f"{name}: sum E^dag E deviates from I by {err:.3e}")
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for ea in kraus_a:
        for eb in kraus_b:
            k = kron(ea, eb)
            out += k @ rho @ dagger(k)
    return out


def evolve_params(c0, spec, tau):
    """Full Pauli coefficients after Kraus evolution to time ``tau``."""
    pa, pb = spec.probabilities(tau)
    ka = kraus_set(spec.kind, pa, spec.lambda_a)
    kb = kraus_set(spec.kind, pb, spec.lambda_b)
    return params_from_matrix(apply_local_channels(params_matrix(c0), ka, kb))


def markov_params(c0, spec, tau):
    """Closed-form effective Bell triple at time ``tau``.

    PD: ``(c1 e^-tau, c2 e^-tau, c3 - c4 c5)``.
    GAD: ``(c1 e^-tau/2, c2 e^-tau/2, (c3 - c4 c5) e^-tau)``.
    Exponents are doubled under the HALFTIME convention. With unequal
    per-qubit rates the Kraus product still depends only on ``gamma_a + gamma_b``.
    """
    if tau < 0:
        raise ParameterOutOfRange("tau must be nonnegative")
    t0 = effective_bell(c0)
    s = spec.convention.rate_multiplier * tau
    if spec.kind is ChannelKind.PD:
        f = math.exp(-s)
        return BellTriple(t0.c1 * f, t0.c2 * f, t0.c3)
    half, full = math.exp(-0.5 * s), math.exp(-s)
    return BellTriple(t0.c1 * half, t0.c2 * half, t0.c3 * full)


def _record(tau, triple, qg=None, tg=None):
    cg = max(abs(triple.c1), abs(triple.c2), abs(triple.c3))
    return TrajectoryRecord(tau, triple.c1, triple.c2, triple.c3, cg, qg, tg)


def tau_grid(tau_max, steps):
    return [tau_max * k / steps for k in range(steps + 1)]


def markov_trajectory(c0, spec, tau_max, steps, all_measures=False):
    """Sample ``steps + 1`` uniformly spaced records on ``[0, tau_max]``.

    With ``all_measures`` the full state is evolved through the Kraus maps to
    get Q_G, which depends on the individual local Bloch components. The
    Kraus route follows ``p_s = 1 - exp(-gamma_s t)``; under HALFTIME it is
    evaluated at ``2 tau``.
    """
    if steps < 2:
        raise ParameterOutOfRange("need at least 2 steps")
    if not isinstance(c0, CorrelationParams):
        c0 = CorrelationParams.from_sequence(c0)
    records = []
    for tau in tau_grid(tau_max, steps):
        triple = markov_params(c0, spec, tau)
        qg = tg = None
        if all_measures:
            full = evolve_params(c0, spec, spec.convention.rate_multiplier * tau)
            qg = quantum_discord_1norm(full)
            tg = total_correlation(full)
        records.append(_record(tau, triple, qg, tg))
    return records

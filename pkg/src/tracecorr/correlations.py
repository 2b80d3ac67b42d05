"""Trace-norm quantum, classical and total correlations of X states.

Closed forms are cheap; the ``oracle_*`` functions evaluate the defining
optimizations over projective measurements on one qubit by brute force and
are used to check the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .matrixlab import I2, PAULI, kron, trace_norm, trace_norm_batch
from .xstates import (
    CorrelationParams,
    XDensityMatrix,
    effective_bell,
    from_correlation_params,
    marginal_product,
    to_correlation_params,
)

DEGENERATE_TOL = 1e-12

GRID_THETA = 64
GRID_PHI = 128
REFINE_STARTS = 8
REFINE_MIN_STEP = 1e-5


class RefinementLevel(str, Enum):
    COARSE = "coarse"
    FINE = "fine"


@dataclass(frozen=True)
class QgAuxiliary:
    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_params(cls, p):
        c = max(p.c1**2, p.c2**2)
        d = min(p.c1**2, p.c2**2)
        a = max(p.c3**2, d + p.c5**2)
        b = min(c, p.c3**2)
        return cls(a, b, c, d)

    @property
    def denominator(self):
        return self.a - self.b + self.c - self.d


@dataclass(frozen=True)
class MeasurementAxis:
    theta: float
    phi: float

    @property
    def vector(self):
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def _as_params(state):
    if isinstance(state, CorrelationParams):
        return state
    if isinstance(state, XDensityMatrix):
        return to_correlation_params(state)
    return CorrelationParams.from_sequence(state)


def _as_x(state):
    if isinstance(state, XDensityMatrix):
        return state
    return from_correlation_params(_as_params(state))


# ---------------------------------------------------------------- closed forms


def quantum_discord_1norm(state):
    """Schatten 1-norm geometric discord for measurements on qubit 1.

    When the closed form is 0/0 the value comes from the fine oracle.
    """
    p = _as_params(state)
    aux = QgAuxiliary.from_params(p)
    den = aux.denominator
    if abs(den) < DEGENERATE_TOL:
        return oracle_quantum(_as_x(p), RefinementLevel.FINE)
    num = aux.a * aux.c - aux.b * aux.d
    return math.sqrt(max(num / den, 0.0))


def classical_correlation(state):
    return effective_bell(_as_params(state)).c_plus


def total_correlation(state):
    t = effective_bell(_as_params(state))
    return 0.5 * (t.c_plus + max(t.c_plus, t.c_zero + t.c_minus))


def correlations(state):
    """``(Q_G, C_G, T_G)`` from the closed forms."""
    return quantum_discord_1norm(state), classical_correlation(state), total_correlation(state)


# -------------------------------------------------------------- measurements


def _axis_operator(n, qubit=1):
    nsig = sum(v * s for v, s in zip(n, PAULI))
    return kron(nsig, I2) if qubit == 1 else kron(I2, nsig)


def measured_state(rho, axis, qubit=1):
    """Non-selective projective measurement along ``axis`` on one qubit.

    ``sum_j (P_j⊗I) rho (P_j⊗I)`` with ``P_± = (I ± n·σ)/2``, which equals
    ``(rho + N rho N)/2`` for ``N = (n·σ)⊗I``.
    """
    rho = np.asarray(rho, dtype=complex)
    n = axis.vector if isinstance(axis, MeasurementAxis) else np.asarray(axis, dtype=float)
    big_n = _axis_operator(n, qubit)
    return 0.5 * (rho + big_n @ rho @ big_n)


def _axis_stack(theta, phi, qubit):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    nsig = np.einsum("...k,kij->...ij", n, np.array(PAULI))
    if qubit == 1:
        big = np.einsum("...ij,kl->...ikjl", nsig, I2)
    else:
        big = np.einsum("ij,...kl->...ikjl", I2, nsig)
    return big.reshape(n.shape[:-1] + (4, 4))


def _objective(kind, rho, qubit):
    """Vectorized objective over arrays of angles.

    ``quantum``: tr|rho - Pi(rho)|, to be minimized.
    ``classical``: tr|Pi(rho)| for the traceless ``rho - pi_rho``, to be maximized
    (returned negated so both are minimized).
    """

    def f(theta, phi):
        big = _axis_stack(theta, phi, qubit)
        conj = big @ rho @ big
        if kind == "quantum":
            return trace_norm_batch(0.5 * (rho - conj))
        return -trace_norm_batch(0.5 * (rho + conj))

    return f


def _refine(f, theta0, phi0, step_theta, step_phi):
    best = float(f(np.array([theta0]), np.array([phi0]))[0])
    theta, phi = theta0, phi0
    while max(step_theta, step_phi) >= REFINE_MIN_STEP:
        cand_t = np.array([theta + step_theta, theta - step_theta, theta, theta])
        cand_p = np.array([phi, phi, phi + step_phi, phi - step_phi])
        vals = f(cand_t, cand_p)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            theta, phi = float(cand_t[k]), float(cand_p[k])
        else:
            step_theta *= 0.5
            step_phi *= 0.5
    return best, theta, phi


def _search(f, level):
    # theta in [0, pi/2] suffices: n and -n define the same measurement
    thetas = np.linspace(0.0, 0.5 * math.pi, GRID_THETA)
    phis = np.arange(GRID_PHI) * (2.0 * math.pi / GRID_PHI)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    vals = f(tt, pp).ravel()
    order = np.argsort(vals, kind="stable")
    best = float(vals[order[0]])
    if RefinementLevel(level) is RefinementLevel.COARSE:
        return best
    dt = thetas[1] - thetas[0]
    dp = phis[1] - phis[0]
    for idx in order[:REFINE_STARTS]:
        i, j = divmod(int(idx), GRID_PHI)
        val, _, _ = _refine(f, thetas[i], phis[j], dt, dp)
        best = min(best, val)
    return best


def oracle_quantum(state, level=RefinementLevel.FINE, qubit=1):
    """min over axes of tr|rho - Pi_n(rho)|."""
    rho = _as_x(state).matrix()
    return _search(_objective("quantum", rho, qubit), level)


def oracle_classical(state, level=RefinementLevel.FINE, qubit=1):
    """max over axes of tr|Pi_n(rho - pi_rho)|."""
    x = _as_x(state)
    diff = x.matrix() - marginal_product(x).matrix()
    return -_search(_objective("classical", diff, qubit), level)


def oracle_total(state):
    x = _as_x(state)
    return trace_norm(x.matrix() - marginal_product(x).matrix())

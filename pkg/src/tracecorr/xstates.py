"""Two-qubit X states: Pauli-coefficient and matrix forms, validity, marginals.

An X state is parametrized by five real coefficients ``c1..c5``::

    rho = (I⊗I + c1 σx⊗σx + c2 σy⊗σy + c3 σz⊗σz + c4 I⊗σz + c5 σz⊗I) / 4

Qubit 1 is the left tensor factor, so ``c5`` is its Bloch z-component.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import InvalidState, ParseError
from .matrixlab import I2, SX, SY, SZ, kron

VALIDITY_TOL = 1e-12

_BASIS = (
    kron(SX, SX),
    kron(SY, SY),
    kron(SZ, SZ),
    kron(I2, SZ),
    kron(SZ, I2),
)


@dataclass(frozen=True)
class CorrelationParams:
    c1: float
    c2: float
    c3: float
    c4: float = 0.0
    c5: float = 0.0

    def as_tuple(self):
        return (self.c1, self.c2, self.c3, self.c4, self.c5)

    def as_array(self):
        return np.array(self.as_tuple(), dtype=float)

    @classmethod
    def from_sequence(cls, values):
        values = [float(v) for v in values]
        if len(values) != 5:
            raise ParseError(f"expected 5 coefficients, got {len(values)}")
        return cls(*values)

    @classmethod
    def parse(cls, text):
        """Parse ``"c1,c2,c3,c4,c5"``."""
        parts = [p.strip() for p in str(text).split(",")]
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"cannot parse coefficients {text!r}: {exc}") from None
        return cls.from_sequence(values)

    def in_range(self):
        return all(abs(v) <= 1.0 + VALIDITY_TOL for v in self.as_tuple())


@dataclass(frozen=True)
class XDensityMatrix:
    """Phase-fixed X state. ``r41`` and ``r32`` are real coherences."""

    r11: float
    r22: float
    r33: float
    r44: float
    r41: float
    r32: float

    def matrix(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.r11, self.r22, self.r33, self.r44
        m[3, 0] = m[0, 3] = self.r41
        m[2, 1] = m[1, 2] = self.r32
        return m

    @classmethod
    def from_matrix(cls, m):
        """Read an X-shaped matrix; complex coherences are phase-fixed first."""
        m = np.asarray(m, dtype=complex)
        return from_complex(m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real, m[3, 0], m[2, 1])


@dataclass(frozen=True)
class BellTriple:
    c1: float
    c2: float
    c3: float

    def as_tuple(self):
        return (self.c1, self.c2, self.c3)

    def _sorted_abs(self):
        return sorted(abs(v) for v in self.as_tuple())

    @property
    def c_minus(self):
        return self._sorted_abs()[0]

    @property
    def c_zero(self):
        return self._sorted_abs()[1]

    @property
    def c_plus(self):
        return self._sorted_abs()[2]

    def matrix(self):
        """Effective Bell-diagonal state built from the triple."""
        return 0.25 * (np.eye(4) + sum(c * b for c, b in zip(self.as_tuple(), _BASIS[:3])))


@dataclass(frozen=True)
class ValidityReport:
    unit_trace: bool
    nonnegative_populations: bool
    outer_block_psd: bool
    inner_block_psd: bool

    @property
    def ok(self):
        return all(getattr(self, f.name) for f in fields(self))

    def failures(self):
        return [f.name for f in fields(self) if not getattr(self, f.name)]

    def __str__(self):
        return ", ".join(f"{f.name}={'pass' if getattr(self, f.name) else 'FAIL'}" for f in fields(self))


def from_correlation_params(c):
    c1, c2, c3, c4, c5 = c.as_tuple() if isinstance(c, CorrelationParams) else c
    return XDensityMatrix(
        r11=(1 + c3 + c4 + c5) / 4,
        r22=(1 - c3 - c4 + c5) / 4,
        r33=(1 - c3 + c4 - c5) / 4,
        r44=(1 + c3 - c4 - c5) / 4,
        r41=(c1 - c2) / 4,
        r32=(c1 + c2) / 4,
    )


def to_correlation_params(rho):
    return CorrelationParams(
        c1=2 * (rho.r32 + rho.r41),
        c2=2 * (rho.r32 - rho.r41),
        c3=1 - 2 * (rho.r22 + rho.r33),
        c4=2 * (rho.r11 + rho.r33) - 1,
        c5=2 * (rho.r11 + rho.r22) - 1,
    )


def params_from_matrix(m):
    """Pauli coefficients of any 4x4 matrix, by ``c_k = tr(B_k m)``.

    Works for unnormalized or traceless matrices; off-X entries are ignored.
    """
    m = np.asarray(m, dtype=complex)
    return CorrelationParams(*(float(np.trace(b @ m).real) for b in _BASIS))


def params_matrix(c):
    """Matrix form straight from the Pauli expansion."""
    coeffs = c.as_tuple() if isinstance(c, CorrelationParams) else tuple(c)
    return 0.25 * (np.eye(4, dtype=complex) + sum(v * b for v, b in zip(coeffs, _BASIS)))


def from_complex(r11, r22, r33, r44, r41, r32):
    """Build a phase-fixed X state from complex coherences.

    A local unitary ``diag(1, e^{ia}) ⊗ diag(1, e^{ib})`` rotates both
    coherences onto the positive real axis. Trace-norm correlations are
    invariant under it. Coherences that are already real are kept as is.
    """
    return XDensityMatrix(float(r11), float(r22), float(r33), float(r44), _dephase(r41), _dephase(r32))


def _dephase(z):
    z = complex(z)
    return z.real if z.imag == 0.0 else abs(z)


def local_phase_unitary(alpha, beta):
    return kron(np.diag([1, np.exp(1j * alpha)]), np.diag([1, np.exp(1j * beta)]))


def validate(rho, tol=VALIDITY_TOL):
    pops = (rho.r11, rho.r22, rho.r33, rho.r44)
    return ValidityReport(
        unit_trace=abs(sum(pops) - 1.0) <= tol,
        nonnegative_populations=min(pops) >= -tol,
        outer_block_psd=rho.r11 * rho.r44 >= rho.r41**2 - tol,
        inner_block_psd=rho.r22 * rho.r33 >= rho.r32**2 - tol,
    )


def is_valid(c):
    return validate(from_correlation_params(c)).ok


def require_valid(c):
    """Return the X state for ``c`` or raise :class:`InvalidState`."""
    if isinstance(c, CorrelationParams) and not c.in_range():
        report = validate(from_correlation_params(c))
        raise InvalidState(f"coefficients outside [-1, 1]: {c.as_tuple()}", report)
    rho = from_correlation_params(c)
    report = validate(rho)
    if not report.ok:
        raise InvalidState(f"not a valid X state: {report}", report)
    return rho


def marginal_product(rho):
    """Product of the single-qubit marginals, itself an X state."""
    c = to_correlation_params(rho)
    return from_correlation_params(CorrelationParams(0.0, 0.0, c.c4 * c.c5, c.c4, c.c5))


def effective_bell(c):
    """Triple (c1, c2, c3 - c4 c5) for which ``rho - pi_rho`` is Bell-diagonal minus I/4."""
    if isinstance(c, XDensityMatrix):
        c = to_correlation_params(c)
    return BellTriple(c.c1, c.c2, c.c3 - c.c4 * c.c5)


def random_valid_params(rng, n=None):
    """Rejection-sample valid X states uniformly over the box [-1, 1]^5.

    Returns one :class:`CorrelationParams` when ``n`` is None, else a list.
    """
    count = 1 if n is None else n
    out = []
    while len(out) < count:
        batch = rng.uniform(-1.0, 1.0, size=(max(64, 4 * (count - len(out))), 5))
        for row in batch:
            c = CorrelationParams(*map(float, row))
            if is_valid(c):
                out.append(c)
                if len(out) == count:
                    break
    return out[0] if n is None else out

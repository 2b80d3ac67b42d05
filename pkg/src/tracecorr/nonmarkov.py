"""Dephasing in a two-configuration self-fluctuating bath.

Each configuration R carries an unnormalized state ``rho_R`` that dephases at
its own rate, while the bath hops between configurations::

    d rho_1 = g_1 D[rho_1] - phi21 rho_1 + phi12 rho_2
    d rho_2 = g_2 D[rho_2] - phi12 rho_2 + phi21 rho_1

with ``D = (kappa/4) (L_A + L_B)`` and ``L_s[x] = Z_s x Z_s - x``, so that the
x/y coherences of configuration R decay at ``kappa * gamma_R``. Time is
measured in units of ``1/(gamma_1 + gamma_2)``; with that normalization
``gamma_1 = eps``, ``gamma_2 = 1 - eps``, ``phi12 = eta v`` and
``phi21 = (1 - eta) v``.

The system state is ``rho_1 + rho_2`` and ``P_R = tr rho_R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .channels import TrajectoryRecord, tau_grid
from .errors import ParameterOutOfRange, StepTooLarge
from .matrixlab import I2, SZ, kron
from .xstates import (
    BellTriple,
    CorrelationParams,
    XDensityMatrix,
    effective_bell,
    params_matrix,
    to_correlation_params,
)

DEFAULT_DT = 1e-3
DEFAULT_HORIZON = 50.0
EMERGENCE_TOL = 1e-12

_ZA = kron(SZ, I2)
_ZB = kron(I2, SZ)


class InitialWeights(str, Enum):
    STATIONARY = "stationary"
    EQUAL = "equal"


@dataclass(frozen=True)
class NonMarkovConfig:
    eps: float
    eta: float
    v: float
    kappa: int = 2
    init: InitialWeights = InitialWeights.STATIONARY

    @property
    def gamma1(self):
        return self.eps

    @property
    def gamma2(self):
        return 1.0 - self.eps

    @property
    def phi12(self):
        return self.eta * self.v

    @property
    def phi21(self):
        return (1.0 - self.eta) * self.v

    @property
    def weights(self):
        if self.init is InitialWeights.EQUAL:
            return 0.5, 0.5
        return self.eta, 1.0 - self.eta

    @property
    def coherence_rates(self):
        """Decay rates of c1, c2 inside configurations 1 and 2."""
        return self.kappa * self.gamma1, self.kappa * self.gamma2

    @property
    def max_step(self):
        return 0.01 / max(1.0, self.v)


def build_config(eps, eta, v, kappa=2, init=InitialWeights.STATIONARY):
    if not 0.0 <= eps <= 1.0:
        raise ParameterOutOfRange(f"eps={eps} outside [0, 1]")
    if not 0.0 <= eta <= 1.0:
        raise ParameterOutOfRange(f"eta={eta} outside [0, 1]")
    if not v >= 0.0 or math.isinf(v):
        raise ParameterOutOfRange(f"v={v} must be finite and nonnegative")
    if kappa not in (2, 4):
        raise ParameterOutOfRange(f"kappa must be 2 or 4, got {kappa}")
    return NonMarkovConfig(float(eps), float(eta), float(v), int(kappa), InitialWeights(init))


@dataclass(frozen=True)
class ConfigurationState:
    """Per-configuration coefficients ``[P_R, c1..c5 (unnormalized)]``, shape (2, 6)."""

    coeffs: np.ndarray

    @property
    def p1(self):
        return float(self.coeffs[0, 0])

    @property
    def p2(self):
        return float(self.coeffs[1, 0])

    def system_params(self):
        total = self.coeffs[0] + self.coeffs[1]
        return CorrelationParams(*map(float, total[1:] / total[0]))

    def matrices(self):
        eye = 0.25 * np.eye(4)
        return [params_matrix(row[1:]) + (row[0] - 1.0) * eye for row in self.coeffs]


def _as_params(rho0):
    if isinstance(rho0, XDensityMatrix):
        return to_correlation_params(rho0)
    if isinstance(rho0, CorrelationParams):
        return rho0
    return CorrelationParams.from_sequence(rho0)


def _initial_coeffs(rho0, cfg):
    c = _as_params(rho0).as_array()
    row = np.concatenate([[1.0], c])
    w1, w2 = cfg.weights
    return np.stack([w1 * row, w2 * row])


def _check_step(cfg, dt):
    if dt <= 0:
        raise StepTooLarge("step must be positive")
    if dt > cfg.max_step * (1 + 1e-12):
        raise StepTooLarge(f"dt={dt} exceeds stability bound {cfg.max_step}")


def _rk4(deriv, y, dt, nsteps, record_every):
    out = [(0, y.copy())]
    for k in range(1, nsteps + 1):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * dt * k1)
        k3 = deriv(y + 0.5 * dt * k2)
        k4 = deriv(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % record_every == 0 or k == nsteps:
            out.append((k, y.copy()))
    return out


def _nsteps(tau_max, dt):
    n = int(round(tau_max / dt))
    if n < 1 or abs(n * dt - tau_max) > 1e-9 * max(1.0, tau_max):
        raise ParameterOutOfRange(f"tau_max={tau_max} is not a whole number of steps dt={dt}")
    return n


def integrate(rho0, cfg, tau_max, dt=DEFAULT_DT, record_every=1):
    """Fixed-step RK4 on the reduced coefficient representation.

    Returns ``[(tau, ConfigurationState), ...]`` including ``tau = 0``.
    """
    _check_step(cfg, dt)
    n = _nsteps(tau_max, dt)
    a1, a2 = cfg.coherence_rates
    decay = np.array([[0.0, a1, a1, 0.0, 0.0, 0.0], [0.0, a2, a2, 0.0, 0.0, 0.0]])
    p12, p21 = cfg.phi12, cfg.phi21

    def deriv(y):
        hop = -p21 * y[0] + p12 * y[1]
        return -decay * y + np.stack([hop, -hop])

    steps = _rk4(deriv, _initial_coeffs(rho0, cfg), dt, n, record_every)
    return [(k * dt, ConfigurationState(y)) for k, y in steps]


def integrate_matrices(rho0, cfg, tau_max, dt=DEFAULT_DT, record_every=1):
    """RK4 on the pair of 4x4 matrices; a cross-check for :func:`integrate`.

    Returns ``[(tau, rho_1, rho_2), ...]``.
    """
    _check_step(cfg, dt)
    n = _nsteps(tau_max, dt)
    w1, w2 = cfg.weights
    rho = params_matrix(_as_params(rho0))
    g = (cfg.kappa / 4.0) * np.array([cfg.gamma1, cfg.gamma2])
    p12, p21 = cfg.phi12, cfg.phi21

    def dephase(x):
        return _ZA @ x @ _ZA + _ZB @ x @ _ZB - 2.0 * x

    def deriv(y):
        hop = -p21 * y[0] + p12 * y[1]
        return np.stack([g[0] * dephase(y[0]) + hop, g[1] * dephase(y[1]) - hop])

    steps = _rk4(deriv, np.stack([w1 * rho, w2 * rho]), dt, n, record_every)
    return [(k * dt, y[0], y[1]) for k, y in steps]


def _propagate(tau, a1, a2, phi12, phi21, w1, w2):
    """Components ``(x1, x2)`` of ``exp(M tau) (w1, w2)``.

    ``M = [[-a1 - phi21, phi12], [phi21, -a2 - phi12]]``. Written as
    ``exp(mu tau) [cosh(s tau) I + sinh(s tau)/s (M - mu I)]`` with the
    exponentials regrouped so nothing overflows for fast baths.
    """
    tau = np.asarray(tau, dtype=float)
    m11, m12, m21, m22 = -a1 - phi21, phi12, phi21, -a2 - phi12
    mu = 0.5 * (m11 + m22)
    half = 0.5 * (m11 - m22)
    s = math.sqrt(half * half + m12 * m21)
    slow = np.exp((mu + s) * tau)
    cosh_part = 0.5 * slow * (1.0 + np.exp(-2.0 * s * tau))
    if s > 0.0:
        sinh_part = slow * (-np.expm1(-2.0 * s * tau)) / (2.0 * s)
    else:
        sinh_part = slow * tau
    x1 = cosh_part * w1 + sinh_part * (half * w1 + m12 * w2)
    x2 = cosh_part * w2 + sinh_part * (m21 * w1 - half * w2)
    return x1, x2


def analytic_coefficient(x0, a1, a2, phi12, phi21, w1, w2):
    """Exact bi-exponential ``tau -> x_1(tau) + x_2(tau)``.

    Solves ``d/dtau (x1, x2) = M (x1, x2)`` with ``x_R(0) = w_R x0``.
    """
    for r in (a1, a2, phi12, phi21):
        if r < 0:
            raise ParameterOutOfRange("rates must be nonnegative")

    def f(tau):
        x1, x2 = _propagate(tau, a1, a2, phi12, phi21, w1, w2)
        out = x0 * (x1 + x2)
        return float(out) if np.ndim(out) == 0 else out

    return f


def coherence_factor(cfg):
    """``tau -> c1(tau)/c1(0)`` for the summed state."""
    a1, a2 = cfg.coherence_rates
    w1, w2 = cfg.weights
    return analytic_coefficient(1.0, a1, a2, cfg.phi12, cfg.phi21, w1, w2)


def populations(cfg, tau):
    """``(P1, P2)`` at ``tau``."""
    w1, w2 = cfg.weights
    x1, x2 = _propagate(tau, 0.0, 0.0, cfg.phi12, cfg.phi21, w1, w2)
    return x1, x2


def analytic_triple(rho0, cfg):
    """``tau -> BellTriple`` of the summed state, from the bi-exponential."""
    t0 = effective_bell(_as_params(rho0))
    f = coherence_factor(cfg)

    def gen(tau):
        k = f(tau)
        return BellTriple(t0.c1 * k, t0.c2 * k, t0.c3)

    return gen


def nm_classical_trajectory(rho0, cfg, tau_max, steps, method="analytic", dt=DEFAULT_DT):
    """Uniformly sampled C_G records with ``P1``, ``P2`` in ``record.extra``.

    ``method="integrate"`` samples the RK4 solution instead; ``tau_max/steps``
    must then be a multiple of ``dt``.
    """
    if steps < 2:
        raise ParameterOutOfRange("need at least 2 steps")
    taus = tau_grid(tau_max, steps)
    records = []
    if method == "analytic":
        gen = analytic_triple(rho0, cfg)
        for tau in taus:
            t = gen(tau)
            p1, p2 = populations(cfg, tau)
            records.append(_record(tau, t, float(p1), float(p2)))
        return records
    if method != "integrate":
        raise ValueError(f"unknown method {method!r}")
    every = int(round(tau_max / steps / dt))
    if every < 1 or abs(every * dt * steps - tau_max) > 1e-9 * max(1.0, tau_max):
        raise ParameterOutOfRange("sampling interval must be a whole number of integration steps")
    for (_, state), tau in zip(integrate(rho0, cfg, tau_max, dt, every), taus):
        t = effective_bell(state.system_params())
        records.append(_record(tau, t, state.p1, state.p2))
    return records


def _record(tau, t, p1, p2):
    cg = max(abs(t.c1), abs(t.c2), abs(t.c3))
    return TrajectoryRecord(tau, t.c1, t.c2, t.c3, cg, extra={"P1": p1, "P2": p2})


def nm_emergence_time(rho0, cfg, horizon=DEFAULT_HORIZON) -> Optional[float]:
    """Time at which C_G settles onto the constant ``|c~3|``, or None.

    ``max(|c~1|, |c~2|)`` decays monotonically, so the crossing is unique and
    found by bisection. Returns 0 when ``|c~3|`` dominates from the start and
    None when no crossing happens before ``horizon`` (or ``c~3 = 0``).
    """
    t0 = effective_bell(_as_params(rho0))
    m = max(abs(t0.c1), abs(t0.c2))
    z = abs(t0.c3)
    if z == 0.0:
        return None
    if z >= m:
        return 0.0
    f = coherence_factor(cfg)
    if m * f(horizon) > z:
        return None
    lo, hi = 0.0, float(horizon)
    while hi - lo > EMERGENCE_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if m * f(mid) > z:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

"""Sudden changes of the classical correlation and pointer-basis emergence.

C_G is the largest of ``|c~1|, |c~2|, |c~3|``. Because ``c~1`` and ``c~2``
share one decay law their order never changes, so a kink can only come
from ``|c~3|`` crossing ``max(|c~1|, |c~2|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .channels import ChannelKind, TrajectoryRecord, markov_params, markov_trajectory
from .errors import NoTransition
from .xstates import BellTriple, effective_bell

KINK_TOL = 1e-10
START_TOL = 1e-9


@dataclass(frozen=True)
class TransitionReport:
    has_transition: bool
    tau_star: Optional[float] = None
    tau_e: Optional[float] = None
    branch_before: Optional[str] = None
    branch_after: Optional[str] = None


def _leading_xy(t):
    return "c1" if abs(t.c1) >= abs(t.c2) else "c2"


def branch(t):
    """Label of the coefficient that currently sets C_G; ties go to ``c3``."""
    m = max(abs(t.c1), abs(t.c2))
    if abs(t.c3) >= m:
        return "c3"
    return _leading_xy(t)


def _magnitude(t, label):
    return abs(getattr(t, label))


def sudden_change_predicate(c0, kind):
    """Whether C_G has a sudden change at some finite positive time.

    PD: ``0 < |c~3| < max(|c~1|, |c~2|)``; the decaying maximum falls onto
    the frozen ``|c~3|``. GAD: ``|c~3| > max(|c~1|, |c~2|) > 0``; ``c~3``
    decays twice as fast and is overtaken.
    """
    t = effective_bell(c0)
    m = max(abs(t.c1), abs(t.c2))
    z = abs(t.c3)
    if ChannelKind(kind) is ChannelKind.PD:
        return 0.0 < z < m
    return z > m > 0.0


def transition_time(c0, spec):
    """Closed-form crossing time, and the emergence time for PD.

    Raises
    ------
    NoTransition
        If C_G never switches branch (and, for PD, never becomes constant).
    """
    t = effective_bell(c0)
    m = max(abs(t.c1), abs(t.c2))
    z = abs(t.c3)
    mult = spec.convention.rate_multiplier
    if spec.kind is ChannelKind.PD:
        if sudden_change_predicate(c0, spec.kind):
            tau = math.log(m / z) / mult
            return TransitionReport(True, tau, tau, _leading_xy(t), "c3")
        if z > 0.0:
            # |c~3| already dominates: C_G is constant from the start
            return TransitionReport(False, None, 0.0, "c3", "c3")
        raise NoTransition("PD with c~3 = 0 decays exponentially without a kink")
    if sudden_change_predicate(c0, spec.kind):
        tau = 2.0 * math.log(z / m) / mult
        return TransitionReport(True, tau, None, "c3", _leading_xy(t))
    raise NoTransition("GAD: c~3 is not the initial maximum, no crossing")


def closed_form_generator(c0, spec):
    return lambda tau: markov_params(c0, spec, tau)


def _bisect(gen, lo, hi, a, b, tol):
    def gap(tau):
        t = gen(tau)
        return _magnitude(t, a) - _magnitude(t, b)

    g_lo = gap(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        if (g_mid > 0) == (g_lo > 0) and g_mid != 0:
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def detect_kinks(
    traj: Sequence[TrajectoryRecord],
    generator: Optional[Callable[[float], BellTriple]] = None,
    tol: float = KINK_TOL,
):
    """Locate changes of the branch that sets C_G along a sampled trajectory.

    Each bracketing pair of samples is refined by bisection on the gap between
    the two competing magnitudes, using ``generator`` (tau -> BellTriple)
    when given and linear interpolation of the sampled gap otherwise. A
    switch that sits at the very first sample (an initial tie) is not a kink.
    """
    kinks = []
    labels = [branch(r.triple) for r in traj]
    for i in range(len(traj) - 1):
        a, b = labels[i], labels[i + 1]
        if a == b:
            continue
        lo, hi = traj[i].tau, traj[i + 1].tau
        if generator is not None:
            tau = _bisect(generator, lo, hi, a, b, tol)
        else:
            g0 = _magnitude(traj[i].triple, a) - _magnitude(traj[i].triple, b)
            g1 = _magnitude(traj[i + 1].triple, a) - _magnitude(traj[i + 1].triple, b)
            tau = lo if g0 == g1 else lo + (hi - lo) * g0 / (g0 - g1)
        if tau <= traj[0].tau + START_TOL:
            continue
        kinks.append(tau)
    return kinks


def count_kinks(c0, spec, tau_max=20.0, steps=400):
    """Number of branch switches of a closed-form trajectory on ``[0, tau_max]``."""
    traj = markov_trajectory(c0, spec, tau_max, steps)
    return len(detect_kinks(traj, closed_form_generator(c0, spec)))


def sudden_change_fraction(states, kind):
    """Fraction of ``states`` whose C_G has a sudden change under ``kind``."""
    states = list(states)
    if not states:
        return 0.0
    return sum(sudden_change_predicate(c, kind) for c in states) / len(states)

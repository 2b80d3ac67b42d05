import math

import numpy as np
import pytest

from tracecorr.channels import ChannelSpec, markov_trajectory
from tracecorr.errors import NoTransition
from tracecorr.pointer import (
    closed_form_generator,
    count_kinks,
    detect_kinks,
    sudden_change_fraction,
    sudden_change_predicate,
    transition_time,
)
from tracecorr.xstates import CorrelationParams, effective_bell, random_valid_params

from conftest import GAD_STATE, PD_STATE


def brute_force_has_change(c, kind, tau_max=60.0, n=6001):
    """Scan which branch sets C_G on a dense grid of positive times."""
    t = effective_bell(c)
    taus = np.logspace(-9, np.log10(tau_max), n)
    m = max(abs(t.c1), abs(t.c2))
    if kind == "pd":
        xy, z = m * np.exp(-taus), np.full_like(taus, abs(t.c3))
    else:
        xy, z = m * np.exp(-taus / 2), abs(t.c3) * np.exp(-taus)
    on_z = z >= xy
    return bool(np.any(on_z[1:] != on_z[:-1]))


def test_predicate_examples():
    assert sudden_change_predicate(PD_STATE, "pd")
    assert sudden_change_predicate(GAD_STATE, "gad")
    assert not sudden_change_predicate(CorrelationParams(0.5, 0.2, 0.0), "pd")
    assert not sudden_change_predicate(PD_STATE, "gad")


def test_pd_intermediate_c3_case():
    # |c2| < |c3| < |c1|: the decaying maximum still crosses |c3|
    c = CorrelationParams(0.5, 0.05, 0.2, 0, 0)
    assert sudden_change_predicate(c, "pd")
    t = effective_bell(c)
    equal_to_c_minus = t.c_minus == abs(t.c3) != 0
    assert not equal_to_c_minus
    kinks = detect_kinks(markov_trajectory(c, ChannelSpec("pd"), 3.0, 300), closed_form_generator(c, ChannelSpec("pd")))
    assert kinks == [pytest.approx(math.log(0.5 / 0.2), abs=1e-6)]


def test_predicate_matches_brute_force(rng):
    for c in random_valid_params(rng, 400):
        for kind in ("pd", "gad"):
            assert sudden_change_predicate(c, kind) == brute_force_has_change(c, kind), c


def test_transition_time_pd():
    k = transition_time(PD_STATE, ChannelSpec("pd"))
    assert k.has_transition
    assert k.tau_star == k.tau_e == pytest.approx(math.log(6.25), abs=1e-12)
    assert (k.branch_before, k.branch_after) == ("c1", "c3")
    h = transition_time(PD_STATE, ChannelSpec("pd", convention="halftime"))
    assert h.tau_e == pytest.approx(0.916291, abs=1e-6)
    assert abs(h.tau_e - 0.92) <= 0.005


def test_transition_time_gad():
    r = transition_time(GAD_STATE, ChannelSpec("gad"))
    assert r.tau_star == pytest.approx(2 * math.log(0.34 / 0.28), abs=1e-12)
    assert r.tau_e is None
    assert abs(r.tau_star - 0.37) <= 0.02


def test_pd_dominant_c3_gives_immediate_emergence():
    r = transition_time(CorrelationParams(0.3, 0.1, 0.3), ChannelSpec("pd"))
    assert not r.has_transition and r.tau_e == 0.0
    assert detect_kinks(markov_trajectory(CorrelationParams(0.3, 0.1, 0.3), ChannelSpec("pd"), 3, 30)) == []


def test_no_transition_raises():
    with pytest.raises(NoTransition):
        transition_time(CorrelationParams(0.5, 0.2, 0.0), ChannelSpec("pd"))
    with pytest.raises(NoTransition):
        transition_time(PD_STATE, ChannelSpec("gad"))


@pytest.mark.parametrize(
    "c, kind, expected",
    [(PD_STATE, "pd", math.log(6.25)), (GAD_STATE, "gad", 2 * math.log(17 / 14))],
)
def test_detect_kinks_closed_form(c, kind, expected):
    spec = ChannelSpec(kind)
    kinks = detect_kinks(markov_trajectory(c, spec, 5.0, 100), closed_form_generator(c, spec))
    assert len(kinks) == 1
    assert abs(kinks[0] - expected) < 1e-6


def test_detect_kinks_interpolated_without_generator():
    traj = markov_trajectory(PD_STATE, ChannelSpec("pd"), 5.0, 1000)
    (k,) = detect_kinks(traj)
    assert abs(k - math.log(6.25)) < 1e-4


def test_detect_kinks_monotone():
    assert detect_kinks(markov_trajectory(CorrelationParams(0.5, 0.2, 0.0), ChannelSpec("pd"), 5, 50)) == []


def test_constant_tail_after_emergence(rng):
    for c in random_valid_params(rng, 200):
        if not sudden_change_predicate(c, "pd"):
            continue
        spec = ChannelSpec("pd")
        tau_e = transition_time(c, spec).tau_e
        traj = markov_trajectory(c, spec, tau_e * 2 + 1, 200)
        z = abs(effective_bell(c).c3)
        before = [r.cg for r in traj if r.tau < tau_e]
        assert all(b > a for a, b in zip(before[1:], before[:-1]))
        assert all(abs(r.cg - z) <= 1e-12 for r in traj if r.tau >= tau_e)


def test_kinks_agree_with_closed_form(rng):
    for c in random_valid_params(rng, 300):
        for kind in ("pd", "gad"):
            spec = ChannelSpec(kind)
            kinks = detect_kinks(markov_trajectory(c, spec, 40.0, 400), closed_form_generator(c, spec))
            if sudden_change_predicate(c, kind):
                tau = transition_time(c, spec).tau_star
                if tau < 40.0:
                    assert len(kinks) == 1 and abs(kinks[0] - tau) < 1e-6
            else:
                assert kinks == []


def test_count_kinks_and_fraction(rng):
    states = random_valid_params(rng, 200)
    assert max(count_kinks(c, ChannelSpec("pd")) for c in states) <= 1
    frac = sudden_change_fraction(states, "pd")
    assert 0 < frac < 1
    assert sudden_change_fraction([], "pd") == 0.0

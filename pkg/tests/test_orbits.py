"""Forward orbits, orbit-wide tower reports, and the conjugate search for
a model with unit resultant."""

import random
from fractions import Fraction

import pytest

from padicdyn.errors import ResourceLimitError
from padicdyn.maps import Mobius, ProjPointQ, conjugate_map, eval_map, parse_map
from padicdyn.orbits import forward_orbit, moduli_search, orbital_report
from padicdyn.reduction import strict_good_reduction
from padicdyn.towers import NO_CERTIFICATE, UNRAMIFIED

from corpus_util import random_models


def _pt(text):
    return ProjPointQ.from_value(text)


def test_forward_orbit_cycle_detection():
    prof = forward_orbit(parse_map("z^2 - 1", 5), _pt("0"), 6, 5)
    assert [str(q) for q in prof.points] == ["0", "-1", "0", "-1", "0", "-1", "0"]
    assert (prof.preperiod, prof.period) == (0, 2)
    assert prof.has_cycle
    assert prof.reductions == (0, 4, 0, 4, 0, 4, 0)
    assert all(prof.integral_flags)
    assert all(prof.in_pc_flags)

    # strictly preperiodic: 1 falls onto the 2-cycle after one step
    prof2 = forward_orbit(parse_map("z^2 - 1", 5), _pt("1"), 4, 5)
    assert (prof2.preperiod, prof2.period) == (1, 2)

    # generic rational orbits never close up
    prof3 = forward_orbit(parse_map("z^2 + p", 5), _pt("1"), 3, 5)
    assert not prof3.has_cycle
    assert (prof3.preperiod, prof3.period) == (None, None)


def test_forward_orbit_without_prime_and_nonintegral():
    prof = forward_orbit(parse_map("z^2 + 1", 7), _pt("1"), 3)
    assert prof.p is None
    assert prof.reductions is None and prof.in_pc_flags is None

    # 1/p stays non-integral and reduces to infinity, which is postcritical
    prof2 = forward_orbit(parse_map("z^2 + p", 5), _pt("1/5"), 2, 5)
    assert prof2.integral_flags == (False, False, False)
    assert prof2.reductions == (None, None, None)
    assert prof2.in_pc_flags == (True, True, True)


def test_forward_orbit_height_cap():
    with pytest.raises(ResourceLimitError, match="exceeded 16 bits"):
        forward_orbit(parse_map("z^2", 5), _pt("2"), 20, 5, cap_height_bits=16)


def test_forward_orbit_tail_consistency():
    rng = random.Random(2)
    for m in random_models(5, 10, seed=53):
        x = ProjPointQ(rng.randint(-4, 4), 1)
        try:
            prof = forward_orbit(m, x, 5, 5)
        except ResourceLimitError:
            continue
        shifted = forward_orbit(m, eval_map(m, x), 4, 5)
        assert shifted.points == prof.points[1:]


def test_orbital_report_unramified_everywhere_on_orbit():
    rep = orbital_report(parse_map("z^2 + p", 5), _pt("1"), 2, 2, 5)
    assert rep.all_unramified_on_locus
    assert len(rep.basepoints) == 3
    for bp in rep.basepoints:
        assert [fr.certificate for fr in bp.fiber_reports] == [UNRAMIFIED, UNRAMIFIED]
        assert bp.cycle_types == ((1, 1), (1, 1, 1, 1))
    assert [(s.index, s.n, s.ok) for s in rep.shifts] == [(0, 1, True), (1, 1, True)]


def test_orbital_report_off_locus_is_not_a_failure():
    # x = p reduces to 0, inside the postcritical set: no certificate is
    # expected there and the overall flag must not trip
    rep = orbital_report(parse_map("z^2 + p", 5), _pt("5"), 1, 1, 5)
    assert rep.all_unramified_on_locus
    assert rep.basepoints[0].fiber_reports[0].certificate == NO_CERTIFICATE
    assert rep.basepoints[0].cycle_types == (None,)


def test_orbital_report_infinity_shift_notes():
    rep = orbital_report(parse_map("1/z", 5), _pt("0"), 2, 2, 5)
    assert [(s.ok, s.note) for s in rep.shifts] == [
        (None, "basepoint at infinity"),
        (None, "basepoint at infinity"),
    ]


def test_sgr_is_invariant_under_unit_conjugation():
    # any p-integral unit-determinant change of coordinates preserves SGR
    p = 5
    mats = [Mobius(1, 1, 0, 1), Mobius(2, 1, 1, 1), Mobius(0, 1, 1, 0), Mobius(3, 0, 0, 1)]
    rng = random.Random(9)
    for m in random_models(p, 14, seed=71, degrees=(2,)):
        M = rng.choice(mats)
        assert M.is_p_unit(p)
        assert (
            strict_good_reduction(m, p).is_strict_good_reduction
            == strict_good_reduction(conjugate_map(m, M), p).is_strict_good_reduction
        )


def test_orbit_report_is_invariant_under_affine_unit_conjugation():
    # the tower summary is phrased in the affine chart (integral points,
    # affine fiber polynomials), so it transports exactly along unit
    # affine substitutions, which fix the chart at infinity
    p = 5
    mats = [Mobius(1, 1, 0, 1), Mobius(3, 0, 0, 1), Mobius(2, 4, 0, 1)]
    rng = random.Random(9)
    checked = 0
    for m in random_models(p, 14, seed=71, degrees=(2,)):
        M = rng.choice(mats)
        assert M.is_p_unit(p)
        twisted = conjugate_map(m, M)
        x = ProjPointQ(rng.randint(-3, 3), 1)
        try:
            a = orbital_report(m, x, 2, 1, p)
            b = orbital_report(twisted, M.apply(x), 2, 1, p)
        except ResourceLimitError:
            continue
        assert a.all_unramified_on_locus == b.all_unramified_on_locus
        for bpa, bpb in zip(a.basepoints, b.basepoints):
            assert bpb.point == M.apply(bpa.point)
            assert [fr.certificate for fr in bpa.fiber_reports] == [
                fr.certificate for fr in bpb.fiber_reports
            ]
            assert bpa.cycle_types == bpb.cycle_types
        checked += 1
    assert checked >= 8


def test_moduli_search_frozen_witnesses():
    mr = moduli_search(parse_map("p*z^2 + z", 5), 5)
    assert (mr.initial_valuation, mr.best_valuation, mr.achieved_zero) == (2, 0, True)
    assert mr.best_mobius.formula() == "5*z"
    assert mr.best_model.map_str() == "z^2+z"
    assert mr.tried == 21

    mr2 = moduli_search(parse_map("p^2*z^2", 5), 5)
    assert (mr2.best_valuation, mr2.achieved_zero) == (0, True)
    assert mr2.best_mobius.formula() == "25*z"
    assert mr2.best_model.map_str() == "z^2"
    assert mr2.tried == 26

    # already-good maps keep their identity model
    mr3 = moduli_search(parse_map("z^2 + p", 5), 5)
    assert (mr3.initial_valuation, mr3.best_valuation) == (0, 0)
    assert mr3.best_mobius.formula() == "z"
    assert mr3.best_model.map_str() == "z^2+5"


def test_moduli_search_respects_search_space():
    # with the grid collapsed to the identity nothing can improve
    mr = moduli_search(
        parse_map("p*z^2 + z", 5),
        5,
        a_range=range(0, 1),
        b_set=(0,),
        include_inversion=False,
    )
    assert mr.tried == 1
    assert not mr.achieved_zero
    assert mr.best_valuation == mr.initial_valuation == 2
    assert mr.best_mobius.formula() == "z"


def test_moduli_search_never_worsens_and_is_sound():
    for p in (3, 5):
        for m in random_models(p, 12, seed=p + 19, degrees=(2,)):
            mr = moduli_search(m, p, a_range=range(-2, 3))
            assert mr.best_valuation <= mr.initial_valuation
            assert mr.achieved_zero == (mr.best_valuation == 0)
            if mr.achieved_zero:
                assert strict_good_reduction(mr.best_model, p).is_strict_good_reduction

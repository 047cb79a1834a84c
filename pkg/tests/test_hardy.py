import math

import numpy as np
import pytest

from jointweak import hardy
from jointweak.gaussian import moments, superposition_from_weak_values
from jointweak.hilbert import identity


def test_scenario_states():
    s = hardy.build_scenario("continuous", 1.0)
    assert s.post.overlap(s.pre) == pytest.approx(-1 / (2 * math.sqrt(3)))
    # no amplitude on both particles taking the overlapping arm
    assert s.pre.amplitudes[0] == 0
    for side in ("A", "B"):
        total = s.projectors[f"O_{side}"].entries + s.projectors[f"NO_{side}"].entries
        np.testing.assert_allclose(total, identity(4).entries, atol=1e-15)


def test_weak_value_table():
    s = hardy.build_scenario("continuous", 1.0)
    table = hardy.weak_value_table(s)
    expected = {
        "O_A": 1, "O_B": 1, "NO_A": 0, "NO_B": 0,
        "O_A&O_B": 0, "O_A&NO_B": 1, "NO_A&O_B": 1, "NO_A&NO_B": -1,
    }
    for key, value in expected.items():
        assert table[key] == pytest.approx(value, abs=1e-14), key
    joint_sum = sum(table[k] for k in (
        "O_A&O_B", "O_A&NO_B", "NO_A&O_B", "NO_A&NO_B"))
    assert joint_sum == pytest.approx(1.0, abs=1e-14)


def test_case_weak_values_match_table():
    s = hardy.build_scenario("continuous", 1.0)
    wv = hardy.case_weak_values(s, 4)
    assert wv.a_w == pytest.approx(0, abs=1e-14)
    assert wv.b_w == pytest.approx(0, abs=1e-14)
    assert wv.ab_w == pytest.approx(-1, abs=1e-14)
    assert wv.postselect_prob == pytest.approx(1 / 12)


# --------------------------------------------------------------------------
# continuous meter
# --------------------------------------------------------------------------

def test_continuous_case1_zero_everywhere():
    s = hardy.build_scenario("continuous", 1.0)
    for g in (0.01, 0.7, 2.0, 4.5):
        cp = hardy.p_continuous(s, 1, g)
        assert cp.engine == pytest.approx(0.0, abs=1e-13)
        assert cp.closed_form == 0.0


def test_continuous_engine_matches_curves():
    s = hardy.build_scenario("continuous", 1.0)
    for case in (2, 3, 4):
        for g in (0.05, 0.5, 1.0, 2.0, 4.0):
            cp = hardy.p_continuous(s, case, g)
            assert cp.engine == pytest.approx(cp.closed_form, abs=1e-11), (case, g)


def test_continuous_spot_value():
    s = hardy.build_scenario("continuous", 1.0)
    cp = hardy.p_continuous(s, 2, 1.0)
    assert cp.engine == pytest.approx(0.75395, abs=1e-5)
    cp4 = hardy.p_continuous(s, 4, 1.0)
    assert cp4.engine == pytest.approx(-0.50790, abs=1e-5)


def test_continuous_p2_equals_p3():
    s = hardy.build_scenario("continuous", 1.0)
    for g in (0.1, 1.3, 3.0):
        assert hardy.p_continuous(s, 2, g).engine == pytest.approx(
            hardy.p_continuous(s, 3, g).engine, abs=1e-14
        )


def test_continuous_sign_change():
    s = hardy.build_scenario("continuous", 1.0)
    root = hardy.find_sign_change(lambda g: hardy.p_continuous(s, 4, g).engine, 1.5, 1.8)
    assert root == pytest.approx(math.sqrt(4 * math.log(2)), abs=5e-4)
    assert hardy.p_continuous(s, 4, 1.0).engine < 0
    assert hardy.p_continuous(s, 4, 2.0).engine > 0


def test_continuous_depends_on_ratio_only():
    s1 = hardy.build_scenario("continuous", 1.0)
    s2 = hardy.build_scenario("continuous", 2.0)
    for case in (2, 4):
        assert hardy.p_continuous(s1, case, 0.8).engine == pytest.approx(
            hardy.p_continuous(s2, case, 1.6).engine, rel=1e-12
        )


def test_continuous_weak_limits_and_plateau():
    s = hardy.build_scenario("continuous", 1.0)
    for case, limit in zip((1, 2, 3, 4), hardy.WEAK_LIMITS):
        assert hardy.p_continuous(s, case, 1e-2).engine == pytest.approx(
            limit, abs=1e-4
        )
    for case in (2, 3, 4):
        assert hardy.p_continuous(s, case, 5.0).engine == pytest.approx(
            1 / 3, abs=1e-3
        )


def test_continuous_delta_q_combination():
    """delta_Q really is <XY> - sigma^4 <PxPy> at the mapped engine width."""
    s = hardy.build_scenario("continuous", 1.3)
    g = 0.9
    wv = hardy.case_weak_values(s, 2)
    m = moments(superposition_from_weak_values(
        "projector", wv, g, s.sigma / math.sqrt(2)))
    expected = (m.xy - s.sigma**4 * m.px_py) / g**2
    assert hardy.p_continuous(s, 2, g).engine == pytest.approx(expected, rel=1e-14)


# --------------------------------------------------------------------------
# discrete meter
# --------------------------------------------------------------------------

def test_discrete_case1_zero():
    s = hardy.build_scenario("qubit")
    for g in (0.01, 1.0, 2.5):
        assert hardy.p_discrete(s, 1, g).engine == pytest.approx(0.0, abs=1e-13)


def test_discrete_engine_matches_trig_form():
    s = hardy.build_scenario("qubit")
    for case in (2, 3, 4):
        for g in (0.05, 0.8, 1.5, 2.8):
            cp = hardy.p_discrete(s, case, g)
            assert cp.engine == pytest.approx(
                hardy.hardy_discrete_engine_cf(case, g), abs=1e-11
            ), (case, g)


def test_discrete_weak_limits():
    s = hardy.build_scenario("qubit")
    for case, limit in zip((1, 2, 3, 4), hardy.WEAK_LIMITS):
        assert hardy.p_discrete(s, case, 1e-2).engine == pytest.approx(
            limit, abs=1e-4
        )


def test_discrete_sign_change_at_half_pi():
    s = hardy.build_scenario("qubit")
    root = hardy.find_sign_change(lambda g: hardy.p_discrete(s, 4, g).engine, 1.2, 1.9)
    assert root == pytest.approx(math.pi / 2, abs=1e-6)
    assert hardy.p_discrete(s, 4, 1.0).engine < 0
    assert hardy.p_discrete(s, 4, 2.0).engine > 0


def test_discrete_tabulated_spot_values():
    assert hardy.hardy_discrete_cf(2, 1.0) == pytest.approx(1.05185, abs=1e-4)
    assert hardy.hardy_discrete_cf(3, 1.0) == pytest.approx(1.05185, abs=1e-4)
    assert hardy.hardy_discrete_cf(4, 1.0) == pytest.approx(-1.10371, abs=1e-4)


def test_discrete_tabulated_curves_share_limits_and_root():
    # closed-form curves agree with the engine at weak coupling and on the
    # pi/2 sign change, then drift apart (documented denominator slip)
    s = hardy.build_scenario("qubit")
    for case, limit in zip((2, 4), (1.0, -1.0)):
        assert hardy.hardy_discrete_cf(case, 1e-3) == pytest.approx(limit, abs=1e-5)
    root = hardy.find_sign_change(lambda g: hardy.hardy_discrete_cf(4, g), 1.2, 1.9)
    assert root == pytest.approx(math.pi / 2, abs=1e-9)
    assert abs(hardy.hardy_discrete_cf(2, 1.0) - hardy.p_discrete(s, 2, 1.0).engine) > 0.5


def test_discrete_rejects_out_of_range_coupling():
    s = hardy.build_scenario("qubit")
    with pytest.raises(ValueError):
        hardy.p_discrete(s, 2, 3.5)


# --------------------------------------------------------------------------
# sweeps and the weak-limit report
# --------------------------------------------------------------------------

def test_sweep_and_weak_limit_reports():
    s = hardy.build_scenario("continuous", 1.0)
    gs = np.geomspace(1e-3, 1.0, 40)
    rows = hardy.sweep(s, gs)
    assert len(rows) == 40
    curves = hardy.curves_from_rows(rows)
    for curve in curves:
        rep = hardy.weak_limit_check(curve)
        assert rep.max_deviation < 1e-4, curve.case_id
        # deviation shrinks quadratically: the fitted C reproduces the
        # deviation at the cutoff scale
        if curve.case_id != 1:
            small = [abs(p - rep.limit) for g, p in curve.samples if g <= 1e-2]
            assert abs(rep.quadratic_coeff) * 1e-4 == pytest.approx(
                max(small), rel=0.2
            )


def test_weak_limit_check_requires_small_samples():
    curve = hardy.HardyCurve(case_id=2, samples=((0.5, 0.9), (1.0, 0.7)))
    with pytest.raises(ValueError):
        hardy.weak_limit_check(curve)


def test_default_sweep_ranges():
    cont = hardy.default_g_values("continuous")
    assert len(cont) == 200
    assert cont[0] == pytest.approx(1e-3)
    assert cont[-1] == pytest.approx(5.0)
    disc = hardy.default_g_values("qubit")
    assert len(disc) == 200
    assert 0 < disc[0] and disc[-1] < math.pi

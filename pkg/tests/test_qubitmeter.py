import numpy as np
import pytest

from jointweak import qubitmeter as qm
from jointweak.errors import NotIdempotent, NotInvolutory
from jointweak.hilbert import (
    Operator,
    identity,
    ket,
    projector,
    sigma_x,
    sigma_y,
    sigma_z,
    tensor,
)
from jointweak.weakvalue import weak_value_set

from helpers import commuting_pair, random_local_unitary, random_state


def _random_involutory(rng):
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    m = n[0] * sigma_x().entries + n[1] * sigma_y().entries + n[2] * sigma_z().entries
    return Operator(m)


def _random_scenario(rng, g=None):
    pa, pb = commuting_pair(rng, "projector")
    while True:
        pre, post = random_state(rng, 4), random_state(rng, 4)
        if abs(post.overlap(pre)) > 0.1:
            break
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return qm.QubitMeterScenario(
        pre=pre,
        post=post,
        pa=pa,
        pb=pb,
        meter_init=ket(v / np.linalg.norm(v), normalized=True),
        sigma1=_random_involutory(rng),
        sigma2=_random_involutory(rng),
        g=float(rng.uniform(0.05, 2 * np.pi)) if g is None else g,
    )


def test_scenario_validation():
    rng = np.random.default_rng(40)
    pa, pb = commuting_pair(None, "projector")
    pre, post = random_state(rng, 4), random_state(rng, 4)
    xi = ket([1, 0, 0, 0], normalized=True)
    with pytest.raises(NotIdempotent):
        qm.QubitMeterScenario(pre, post, tensor(sigma_x(), identity(2)), pb,
                              xi, sigma_x(), sigma_x(), 1.0)
    with pytest.raises(NotInvolutory):
        qm.QubitMeterScenario(pre, post, pa, pb, xi,
                              Operator(np.diag([1, 0.5])), sigma_x(), 1.0)


def test_zero_coupling_returns_scaled_meter():
    rng = np.random.default_rng(41)
    s = _random_scenario(rng, g=0.0)
    meter = qm.evolve_postselect_qubit(s)
    ov = s.post.overlap(s.pre)
    np.testing.assert_allclose(
        meter.state.amplitudes, ov * s.meter_init.amplitudes, atol=1e-14
    )
    assert meter.prob_weight == pytest.approx(abs(ov) ** 2)


def test_vanishing_weak_values_leave_meter_untouched():
    # pre and post both orthogonal to each projector's range: eta reduces to 1
    pre = ket([1, 0, 0, 0], normalized=True)  # |O_A O_B>
    p_no_a = tensor(projector(ket([0, 1])), identity(2))
    p_no_b = tensor(identity(2), projector(ket([0, 1])))
    s = qm.QubitMeterScenario(pre, pre, p_no_a, p_no_b,
                              ket([1, 0, 0, 0], normalized=True),
                              sigma_x(), sigma_x(), 1.3)
    meter = qm.evolve_postselect_qubit(s)
    np.testing.assert_allclose(meter.state.amplitudes, [1, 0, 0, 0], atol=1e-14)


def test_two_constructions_agree_on_random_scenarios():
    rng = np.random.default_rng(42)
    for _ in range(25):
        s = _random_scenario(rng)
        meter = qm.evolve_postselect_qubit(s)  # raises if paths disagree
        wv = weak_value_set(s.pre, s.post, s.pa, s.pb)
        m1 = tensor(s.sigma1, identity(2))
        m2 = tensor(identity(2), s.sigma2)
        eta = qm.eta_operator(wv.a_w, wv.b_w, wv.ab_w, s.g, m1, m2)
        xi_eta = wv.overlap * (eta @ s.meter_init.amplitudes)
        np.testing.assert_allclose(meter.state.amplitudes, xi_eta, atol=1e-12)


def test_meter_expectation_basics():
    rng = np.random.default_rng(43)
    xi = random_state(rng, 4)
    assert qm.meter_expectation(xi, Operator(np.eye(4)), xi) == 0.0
    m = tensor(sigma_x(), sigma_x())
    assert qm.meter_expectation(xi, m, xi) == pytest.approx(0.0, abs=1e-14)


def test_displacement_is_2pi_periodic():
    rng = np.random.default_rng(44)
    s = _random_scenario(rng, g=0.9)
    s2 = qm.QubitMeterScenario(s.pre, s.post, s.pa, s.pb, s.meter_init,
                               s.sigma1, s.sigma2, s.g + 2 * np.pi)
    m12 = tensor(s.sigma1, identity(2)).matmul(tensor(identity(2), s.sigma2))
    d1 = qm.meter_expectation(qm.evolve_postselect_qubit(s).state, m12, s.meter_init)
    d2 = qm.meter_expectation(qm.evolve_postselect_qubit(s2).state, m12, s.meter_init)
    assert d1 == pytest.approx(d2, abs=1e-12)


def test_moment_contraction_matches_engine():
    rng = np.random.default_rng(45)
    for _ in range(10):
        s = _random_scenario(rng)
        m1 = tensor(s.sigma1, identity(2))
        m2 = tensor(identity(2), s.sigma2)
        engine = qm.meter_expectation(
            qm.evolve_postselect_qubit(s).state, m1.matmul(m2), s.meter_init
        )
        assert qm.cf_qubit_joint(s) == pytest.approx(engine, abs=1e-12)


def test_moment_contraction_zero_weak_values():
    # with eta = 1 the sigma1 sigma2 displacement must vanish
    pre = ket([1, 0, 0, 0], normalized=True)
    p_no_a = tensor(projector(ket([0, 1])), identity(2))
    p_no_b = tensor(identity(2), projector(ket([0, 1])))
    rng = np.random.default_rng(46)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    s = qm.QubitMeterScenario(pre, pre, p_no_a, p_no_b,
                              ket(v / np.linalg.norm(v), normalized=True),
                              sigma_x(), sigma_x(), 1.1)
    assert qm.cf_qubit_joint(s) == pytest.approx(0.0, abs=1e-14)


def test_alt_display_deviates_and_is_documented():
    rng = np.random.default_rng(47)
    s = _random_scenario(rng, g=1.0)
    wv = weak_value_set(s.pre, s.post, s.pa, s.pb)
    m1 = tensor(s.sigma1, identity(2))
    m2 = tensor(identity(2), s.sigma2)
    moments = qm.meter_moments(s.meter_init, m1, m2)
    exact = qm.cf_qubit_joint(s, moments)
    alt = qm.cf_qubit_joint_alt(wv.a_w, wv.b_w, wv.ab_w, s.g, moments)
    assert abs(exact - alt) > 1e-6  # transcription is not the exact value


def test_alt_display_zero_coupling():
    moments = (0.3, -0.1, 0.6)
    # with real weak values the g = 0 display collapses to <sigma1 sigma2>
    assert qm.cf_qubit_joint_alt(0.4, 0.2, -0.3, 0.0, moments) == pytest.approx(0.6)
    # with complex ones even the g = 0 value is off: the stray moment
    # coefficients carry no power of g (part of the documented deviation)
    assert qm.cf_qubit_joint_alt(0.4 + 0.1j, 0.2, -0.3j, 0.0, moments) != (
        pytest.approx(0.6)
    )


def test_hardy_closed_form_matches_engine():
    """|00> meter, sigma_x couplings, the fixed meter observable."""
    rng = np.random.default_rng(48)
    pa, pb = commuting_pair(None, "projector")
    xi = ket([1, 0, 0, 0], normalized=True)
    for _ in range(8):
        while True:
            pre, post = random_state(rng, 4), random_state(rng, 4)
            if abs(post.overlap(pre)) > 0.1:
                break
        g = float(rng.uniform(0.05, 3.0))
        s = qm.QubitMeterScenario(pre, post, pa, pb, xi, sigma_x(), sigma_x(), g)
        wv = weak_value_set(pre, post, pa, pb)
        engine = qm.meter_expectation(
            qm.evolve_postselect_qubit(s).state, qm.hardy_meter_observable(), xi
        )
        closed = qm.cf_hardy_qubit(wv.a_w, wv.b_w, wv.ab_w, g)
        assert closed == pytest.approx(engine, abs=1e-12)


def test_w6_equals_meter_norm():
    rng = np.random.default_rng(49)
    pa, pb = commuting_pair(None, "projector")
    xi = ket([1, 0, 0, 0], normalized=True)
    while True:
        pre, post = random_state(rng, 4), random_state(rng, 4)
        if abs(post.overlap(pre)) > 0.1:
            break
    g = 1.2
    s = qm.QubitMeterScenario(pre, post, pa, pb, xi, sigma_x(), sigma_x(), g)
    wv = weak_value_set(pre, post, pa, pb)
    meter = qm.evolve_postselect_qubit(s)
    norm = meter.state.norm() ** 2 / abs(wv.overlap) ** 2
    assert qm.w6(wv.a_w, wv.b_w, wv.ab_w, g) == pytest.approx(norm, rel=1e-12)


def test_hardy_alt_display_deviates():
    rng = np.random.default_rng(50)
    al, be, ka = 1.0, 0.0, 1.0
    g = 1.0
    assert abs(qm.cf_hardy_qubit_alt(al, be, ka, g) - qm.cf_hardy_qubit(al, be, ka, g)) > 0.1

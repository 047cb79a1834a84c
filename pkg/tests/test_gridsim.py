import numpy as np
import pytest

from jointweak import gridsim
from jointweak.errors import ClippingRisk, DegenerateNorm, NormalizationError
from jointweak.gaussian import moments, postselect_projector, superposition_from_weak_values
from jointweak.hilbert import identity, ket, projector, tensor
from jointweak.weakvalue import weak_value_set

from helpers import commuting_pair, random_scenario, random_state


def _hardy_states():
    pre = ket(np.array([0, 1, 1, 1]) / np.sqrt(3), normalized=True)
    post = ket(np.array([1, -1, -1, 1]) / 2, normalized=True)
    return pre, post


def test_init_grid_norm_and_moments():
    rng = np.random.default_rng(60)
    pre = random_state(rng, 4)
    gs = gridsim.init_grid(1.0, 512, 40.0, pre)
    assert gs.total_norm() == pytest.approx(1.0, abs=1e-10)
    pg, weight = gridsim.postselect_grid(gs, pre)
    assert weight == pytest.approx(1.0, abs=1e-10)
    m = gridsim.grid_moments(pg)
    assert m.x == pytest.approx(0.0, abs=1e-8)
    assert m.x2 == pytest.approx(0.0, abs=1e-8)  # displacement from sigma^2
    assert m.w_norm == pytest.approx(1.0, abs=1e-8)


def test_init_grid_rejections():
    pre = ket([1, 0], normalized=True)
    with pytest.raises(ValueError):
        gridsim.init_grid(1.0, 300, 40.0, pre)  # not a power of two
    with pytest.raises(ValueError):
        gridsim.init_grid(1.0, 128, 40.0, pre)  # too small
    with pytest.raises(ValueError):
        gridsim.init_grid(1.0, 512, 5.0, pre)  # extent below 10 sigma
    with pytest.raises(NormalizationError):
        gridsim.init_grid(1.0, 512, 40.0, ket([1, 1]))


def test_zero_coupling_leaves_state_unchanged():
    rng = np.random.default_rng(61)
    pre = random_state(rng, 4)
    a, b = commuting_pair(None, "involutory")
    gs = gridsim.init_grid(1.0, 256, 40.0, pre)
    gs2 = gridsim.apply_coupling(gs, a, b, 0.0)
    np.testing.assert_allclose(gs2.values, gs.values, atol=1e-12)


def test_single_eigenbranch_displaces_gaussian():
    # pre-selection in a joint eigenstate: the whole packet moves to (g, g)
    pre = ket([1, 0, 0, 0], normalized=True)
    pa = tensor(projector(ket([1, 0])), identity(2))
    pb = tensor(identity(2), projector(ket([1, 0])))
    g = 1.5
    gs = gridsim.init_grid(1.0, 512, 40.0, pre)
    gs = gridsim.apply_coupling(gs, pa, pb, g)
    pg, _ = gridsim.postselect_grid(gs, pre)
    m = gridsim.grid_moments(pg)
    assert m.x == pytest.approx(g, abs=1e-9)
    assert m.y == pytest.approx(g, abs=1e-9)
    assert m.x2 == pytest.approx(g**2, abs=1e-8)


def test_clipping_guard():
    pre = ket([1, 0, 0, 0], normalized=True)
    a, b = commuting_pair(None, "involutory")
    gs = gridsim.init_grid(1.0, 256, 12.0, pre)
    with pytest.raises(ClippingRisk):
        gridsim.apply_coupling(gs, a, b, 4.0)


def test_postselect_probability_limits():
    pre, post = _hardy_states()
    pa = tensor(projector(ket([1, 0])), identity(2))
    pb = tensor(identity(2), projector(ket([0, 1])))
    gs = gridsim.init_grid(1.0, 256, 40.0, pre)
    gs = gridsim.apply_coupling(gs, pa, pb, 1e-4)
    _, weight = gridsim.postselect_grid(gs, post)
    assert weight == pytest.approx(1 / 12, abs=1e-6)


def test_orthogonal_postselection_vanishes():
    pre = ket([1, 0, 0, 0], normalized=True)
    post = ket([0, 1, 0, 0], normalized=True)
    gs = gridsim.init_grid(1.0, 256, 40.0, pre)
    with pytest.raises(DegenerateNorm):
        gridsim.postselect_grid(gs, post)


def test_real_field_has_no_momentum_moments():
    rng = np.random.default_rng(62)
    pre = random_state(rng, 4, real=True)
    gs = gridsim.init_grid(1.0, 256, 40.0, pre)
    pg, _ = gridsim.postselect_grid(gs, pre)
    m = gridsim.grid_moments(pg)
    assert m.x_py == pytest.approx(0.0, abs=1e-10)
    assert m.px_py == pytest.approx(0.0, abs=1e-10)


def test_parseval():
    rng = np.random.default_rng(63)
    pre = random_state(rng, 4)
    gs = gridsim.init_grid(1.0, 256, 40.0, pre)
    pg, weight = gridsim.postselect_grid(gs, pre)
    assert gridsim.spectral_norm(pg) == pytest.approx(weight, rel=1e-10)


def _gap_to_analytic(pre, post, pa, pb, wv, n, extent):
    exact = moments(superposition_from_weak_values("projector", wv, 1.0, 1.0))
    m = gridsim.simulate_moments(pre, post, pa, pb, 1.0, 1.0, n=n, extent=extent)
    return max(
        abs(getattr(m, f) - getattr(exact, f))
        for f in ("x", "y", "xy", "x_py", "x2", "px_py", "w_norm")
    )


def test_convergence_toward_analytic():
    pre, post = _hardy_states()
    pa = tensor(projector(ket([1, 0])), identity(2))
    pb = tensor(identity(2), projector(ket([0, 1])))
    wv = weak_value_set(pre, post, pa, pb)
    # default box: spectrally exact already, so every gap sits at the
    # rounding floor and refinement must not make anything worse
    gaps = [_gap_to_analytic(pre, post, pa, pb, wv, n, 40.0) for n in (256, 512, 1024)]
    for i in (1, 2):
        assert gaps[i] <= max(gaps[i - 1], 5e-15)
    assert gaps[2] < 1e-6
    # an oversized box under-resolves momentum space at n = 256; one
    # doubling must then recover the floor
    coarse = _gap_to_analytic(pre, post, pa, pb, wv, 256, 120.0)
    fine = _gap_to_analytic(pre, post, pa, pb, wv, 512, 120.0)
    assert coarse > 1e-10
    assert fine < coarse / 100


def test_grid_matches_engine_for_random_scenarios():
    rng = np.random.default_rng(64)
    for kind in ("involutory", "projector"):
        pre, post, a, b, wv = random_scenario(rng, kind)
        for g in (0.1, 1.0, 2.0):
            grid = gridsim.simulate_moments(pre, post, a, b, g, 1.0, n=512)
            exact = moments(superposition_from_weak_values(kind, wv, g, 1.0))
            for f in ("x", "y", "xy", "x_py", "x2", "px_py", "w_norm"):
                gap = abs(getattr(grid, f) - getattr(exact, f))
                assert gap < 1e-6 * max(1.0, abs(getattr(exact, f))), (kind, g, f)

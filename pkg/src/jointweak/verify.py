"""Cross-engine verification suite.

Each check pits independently constructed computations against each other:
the weak-value branch engine against a joint-eigendecomposition
reconstruction and against the FFT grid simulator, closed forms against
the engines, series truncations against polynomial fits of exact values.

Checks marked as adjudications assert a *documented deviation*: several
transcribed closed-form variants are known to differ from the exact
engines by definite amounts (a constant factor, a sign, a garbled
normalization), and the suite verifies that the deviation is exactly the
documented one instead of pretending the variant is fine.  Everything is
seeded, so repeated runs produce identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closedform as cf
from . import gaussian, gridsim, hardy, qubitmeter
from .hilbert import (
    Ket,
    Operator,
    expm_hermitian,
    identity,
    ket,
    projector,
    sigma_x,
    sigma_z,
    tensor,
)
from .weakvalue import WeakValueSet, weak_value_set

SEED = 20260810
G_OVER_SIGMA = (0.01, 0.1, 0.5, 1.0, 2.0, 3.0)

# analytic-to-analytic agreement: relative 1e-10 plus an absolute floor of
# 1e-13 so that float dust on near-zero displacements is not scored as a
# relative disagreement (sigma = 1 everywhere, so 1e-13 is three decades
# below the headline tolerance at the natural scale)
REL_TOL = 1e-10
ABS_FLOOR = 1e-13

GRID_TOL = {256: 1e-5, 512: 1e-6, 1024: 1e-6}


@dataclass
class CheckResult:
    group: str
    name: str
    passed: bool
    detail: str
    skipped: bool = False
    adjudication: bool = False

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIP"
        if self.adjudication:
            return "NOTE" if self.passed else "FAIL"
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        return f"[{self.group}] {self.status} {self.name} - {self.detail}"


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)

    def add(self, group, name, passed, detail, **kwargs) -> CheckResult:
        res = CheckResult(group, name, bool(passed), detail, **kwargs)
        self.results.append(res)
        return res

    @property
    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed and not r.skipped]

    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        return {
            "results": [
                {
                    "group": r.group,
                    "name": r.name,
                    "status": r.status,
                    "passed": r.passed,
                    "skipped": r.skipped,
                    "adjudication": r.adjudication,
                    "detail": r.detail,
                }
                for r in self.results
            ],
            "n_failed": len(self.failed),
        }


def _overshoot(a: float, b: float, rel: float = REL_TOL, atol: float = ABS_FLOOR) -> float:
    """|a - b| over the allowance rel*max(|a|,|b|) + atol; <= 1 means agreement."""
    return abs(a - b) / (rel * max(abs(a), abs(b)) + atol)


def _rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), ABS_FLOOR)


def _rand_state(rng: np.random.Generator, dim: int) -> Ket:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return ket(v / np.linalg.norm(v), normalized=True)


def _rand_local_unitary(rng: np.random.Generator) -> np.ndarray:
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _rotated_pair(rng: np.random.Generator, kind: str) -> tuple[Operator, Operator]:
    """Commuting pair on 2x2 qubits, conjugated by a random local unitary."""
    u = np.kron(_rand_local_unitary(rng), _rand_local_unitary(rng))
    if kind == "involutory":
        a0 = np.kron(sigma_x().entries, np.eye(2))
        b0 = np.kron(np.eye(2), sigma_z().entries)
    else:
        p = np.array([[1, 0], [0, 0]], dtype=complex)
        a0 = np.kron(p, np.eye(2))
        b0 = np.kron(np.eye(2), p)
    return Operator(u @ a0 @ u.conj().T), Operator(u @ b0 @ u.conj().T)


@dataclass(frozen=True)
class Scenario:
    kind: str
    pre: Ket
    post: Ket
    a: Operator
    b: Operator
    wv: WeakValueSet


def _scenarios(rng: np.random.Generator, count: int) -> list[Scenario]:
    out = []
    while len(out) < count:
        kind = "involutory" if len(out) % 2 == 0 else "projector"
        a, b = _rotated_pair(rng, kind)
        pre, post = _rand_state(rng, 4), _rand_state(rng, 4)
        if abs(post.overlap(pre)) < 0.05:
            continue  # keep post-selection comfortably non-orthogonal
        out.append(Scenario(kind, pre, post, a, b, weak_value_set(pre, post, a, b)))
    return out


def _engine_report(s: Scenario, g: float, sigma: float) -> gaussian.MomentReport:
    sup = gaussian.superposition_from_weak_values(s.kind, s.wv, g, sigma)
    return gaussian.moments(sup)


_FIELDS = ("x", "y", "xy", "x_py", "x2", "px_py", "w_norm")


def _report_gap(r1, r2) -> float:
    """Worst overshoot of the mixed tolerance across report fields."""
    return max(_overshoot(getattr(r1, f), getattr(r2, f)) for f in _FIELDS)


def _report_abs_gap(r1, r2) -> float:
    return max(
        abs(getattr(r1, f) - getattr(r2, f)) / max(1.0, abs(getattr(r1, f)))
        for f in _FIELDS
    )


# --------------------------------------------------------------------------
# criterion 1: triple-engine agreement
# --------------------------------------------------------------------------

def check_triple_engine(
    report: VerifyReport,
    pairs: int = 50,
    grid_n: int = 1024,
    fast: bool = False,
    seed: int = SEED,
) -> None:
    rng = np.random.default_rng(seed)
    scenarios = _scenarios(rng, pairs)
    sigma = 1.0
    worst_branch = 0.0
    worst_grid = 0.0
    grid_tol = GRID_TOL.get(grid_n, 1e-6)
    for s in scenarios:
        for gos in G_OVER_SIGMA:
            g = gos * sigma
            eng = _engine_report(s, g, sigma)
            rec = gaussian.moments(
                gaussian.eigenbranch_superposition(s.pre, s.post, s.a, s.b, g, sigma)
            )
            worst_branch = max(worst_branch, _report_gap(eng, rec))
            if not fast:
                grd = gridsim.simulate_moments(
                    s.pre, s.post, s.a, s.b, g, sigma, n=grid_n
                )
                worst_grid = max(worst_grid, _report_abs_gap(eng, grd))
    report.add(
        "triple-engine",
        f"branch engine vs eigendecomposition reconstruction ({pairs} pairs x "
        f"{len(G_OVER_SIGMA)} couplings)",
        worst_branch <= 1.0,
        f"worst deviation = {worst_branch:.3e} x allowance "
        f"({REL_TOL:g} rel + {ABS_FLOOR:g} abs)",
    )
    if fast:
        report.add(
            "triple-engine",
            f"branch engine vs grid simulator (n={grid_n})",
            True,
            "skipped (--fast)",
            skipped=True,
        )
    else:
        report.add(
            "triple-engine",
            f"branch engine vs grid simulator (n={grid_n})",
            worst_grid < grid_tol,
            f"max gap {worst_grid:.3e} (tol {grid_tol:g})",
        )


# --------------------------------------------------------------------------
# criterion 2: closed forms vs the exact engine
# --------------------------------------------------------------------------

def check_closed_forms(report: VerifyReport, pairs: int = 50, seed: int = SEED) -> None:
    rng = np.random.default_rng(seed + 1)
    scenarios = _scenarios(rng, pairs)
    sigma = 1.0
    worst: dict[str, float] = {}
    ratio_alt_xy = []
    for s in scenarios:
        for gos in G_OVER_SIGMA:
            g = gos * sigma
            eng = _engine_report(s, g, sigma)
            inp = cf.ClosedFormInputs(s.wv, g, sigma)
            if s.kind == "involutory":
                checks = {
                    "involutory <XY> closed form": (cf.cf_xy_inv(inp), eng.xy),
                    "involutory <X> closed form": (cf.cf_x_inv(inp), eng.x),
                    "involutory <XPy> closed form": (cf.cf_xpy_inv(inp), eng.x_py),
                    "involutory <X^2> closed form": (
                        cf.cf_x2_inv(inp).displacement,
                        eng.x2,
                    ),
                    "involutory norm constant = 4 w_norm": (
                        cf.w1(inp),
                        4 * eng.w_norm,
                    ),
                }
                if abs(eng.xy) > 1e-8:
                    ratio_alt_xy.append(cf.cf_xy_inv_alt(inp) / eng.xy)
            else:
                checks = {
                    "projector <XY> closed form": (cf.cf_xy_proj(inp), eng.xy),
                    "projector <X> closed form": (cf.cf_x_proj(inp), eng.x),
                    "projector <PxPy> closed form": (cf.cf_pxpy_proj(inp), eng.px_py),
                    "projector norm constant = 2 e^(g^2/4s^2) w_norm": (
                        cf.w3(inp),
                        2 * math.exp(g**2 / (4 * sigma**2)) * eng.w_norm,
                    ),
                }
            for name, (a, b) in checks.items():
                worst[name] = max(worst.get(name, 0.0), _overshoot(a, b))
    for name, err in worst.items():
        report.add(
            "engine-vs-closedform",
            name,
            err <= 1.0,
            f"worst deviation = {err:.3e} x allowance "
            f"({REL_TOL:g} rel + {ABS_FLOOR:g} abs)",
        )
    ratio = float(np.mean(ratio_alt_xy))
    spread = float(np.max(np.abs(np.array(ratio_alt_xy) - 0.5)))
    report.add(
        "engine-vs-closedform",
        "alt <XY> transcription = engine / 2",
        spread < 1e-8,
        f"mean ratio {ratio:.12f}, max |ratio - 0.5| = {spread:.3e} "
        "(documented factor-2 normalization deviation)",
        adjudication=True,
    )
    # alt norm constant for <XPy>: sign-flipped and scaled by e^(g^2/s^2)
    s0 = next(s for s in scenarios if s.kind == "involutory")
    devs = []
    for gos in G_OVER_SIGMA:
        inp = cf.ClosedFormInputs(s0.wv, gos * sigma, sigma)
        expected = -math.exp((gos * sigma) ** 2 / sigma**2) * cf.w1(inp) / 2
        devs.append(_rel_err(cf.w2_alt(inp), expected))
    report.add(
        "engine-vs-closedform",
        "alt <XPy> norm constant = -e^(g^2/s^2) w1/2",
        max(devs) < 1e-10,
        f"max relative gap {max(devs):.3e} (documented sign+scale deviation)",
        adjudication=True,
    )
    # <X^2> raw variant: unnormalized second moment scaled by e^(g^2/s^2) w1
    devs = []
    for s in scenarios:
        if s.kind != "involutory":
            continue
        for gos in G_OVER_SIGMA:
            g = gos * sigma
            inp = cf.ClosedFormInputs(s.wv, g, sigma)
            eng = _engine_report(s, g, sigma)
            raw = cf.cf_x2_inv(inp).raw_variant
            expected = (
                (eng.x2 + sigma**2) * cf.w1(inp) * math.exp(g**2 / sigma**2)
            )
            devs.append(_rel_err(raw, expected))
    report.add(
        "engine-vs-closedform",
        "alt <X^2> display = e^(g^2/s^2) w1 <X^2>_f (no norm division, no offset)",
        max(devs) < 1e-9,
        f"max relative gap {max(devs):.3e} (documented missing-normalization reading)",
        adjudication=True,
    )


# --------------------------------------------------------------------------
# criterion 3: second-order joint-weak-value recovery
# --------------------------------------------------------------------------

def check_rs_recovery(report: VerifyReport, seed: int = SEED) -> None:
    rng = np.random.default_rng(seed + 2)
    sigma = 1.0
    worst_r2 = 1.0
    slopes = []
    for s in _scenarios(rng, 6):
        if s.kind != "involutory":
            continue
        target = float(np.real(s.wv.ab_w))
        gs = np.geomspace(1e-3, 1e-1, 15) * sigma
        errs = []
        for g in gs:
            eng = _engine_report(s, g, sigma)
            est = cf.rs_second_order(cf.ClosedFormInputs(s.wv, g, sigma), eng.xy)
            errs.append(abs(est - target))
        errs = np.array(errs)
        if np.max(errs) < 1e-13:
            continue  # estimator exact for this draw; nothing to fit
        mask = errs > 1e-15
        design = np.vstack([np.log(gs[mask]), np.ones(mask.sum())]).T
        sol, *_ = np.linalg.lstsq(design, np.log(errs[mask]), rcond=None)
        fitted = design @ sol
        ss_res = float(np.sum((np.log(errs[mask]) - fitted) ** 2))
        ss_tot = float(np.sum((np.log(errs[mask]) - np.log(errs[mask]).mean()) ** 2))
        r2 = 1 - ss_res / ss_tot
        worst_r2 = min(worst_r2, r2)
        slopes.append(sol[0])
    report.add(
        "series",
        "second-order inversion error scales as (g/sigma)^2",
        worst_r2 >= 0.999 and all(abs(sl - 2) < 0.05 for sl in slopes),
        f"log-log slopes {', '.join(f'{sl:.3f}' for sl in slopes)}; "
        f"min R^2 {worst_r2:.6f} (need >= 0.999)",
    )


# --------------------------------------------------------------------------
# criterion 4: third-order series and single-pointer inversion
# --------------------------------------------------------------------------

def _fit_odd_series(values: np.ndarray, gs: np.ndarray) -> np.ndarray:
    design = np.vstack([gs, gs**3, gs**5]).T
    sol, *_ = np.linalg.lstsq(design, values, rcond=None)
    return sol


def check_third_order(report: VerifyReport, seed: int = SEED) -> None:
    rng = np.random.default_rng(seed + 3)
    sigma = 1.0
    gs = np.array([0.002, 0.004, 0.006, 0.008, 0.010])
    worst = 0.0
    for s in _scenarios(rng, 4):
        if s.kind != "involutory":
            continue
        vals = np.array([_engine_report(s, g, sigma).x for g in gs])
        c3_fit = _fit_odd_series(vals, gs)[1]
        _, c3_form = cf.x_inv_series(cf.ClosedFormInputs(s.wv, 1.0, sigma))
        worst = max(worst, abs(c3_fit - c3_form))
    report.add(
        "series",
        "g^3 coefficient of exact <X> matches the third-order bracket",
        worst < 1e-8,
        f"max |fit - bracket| = {worst:.3e} (tol 1e-8, five-point odd fit)",
    )

    # algebraic round trip with the stated real triple
    wv = WeakValueSet(0.5, 1.0, 0.3, 1.0, 1.0)
    g0 = 0.05
    inp = cf.ClosedFormInputs(wv, g0, sigma)
    c1, c3 = cf.x_inv_series(inp)
    x_series = c1 * g0 + c3 * g0**3
    rec = cf.infer_joint_from_single(x_series, inp)
    report.add(
        "series",
        "inversion recovers the joint value fed its own series",
        abs(rec - 0.3) < 1e-12,
        f"|recovered - 0.3| = {abs(rec - 0.3):.3e}",
    )

    # engine-fed recovery at g/sigma = 0.05: O(g^2) truncation error.
    # Real observables and real states keep every weak value real, which
    # the inversion requires.
    rng2 = np.random.default_rng(seed + 4)
    a = Operator(np.kron(sigma_x().entries, np.eye(2)))
    b = Operator(np.kron(np.eye(2), sigma_z().entries))
    worst_ratio = 0.0
    found = 0
    while found < 3:
        v1 = rng2.normal(size=4)
        v2 = rng2.normal(size=4)
        pre = ket(v1 / np.linalg.norm(v1), normalized=True)
        post = ket(v2 / np.linalg.norm(v2), normalized=True)
        if abs(post.overlap(pre)) < 0.2:
            continue
        wv = weak_value_set(pre, post, a, b)
        if abs(wv.b_w) < 0.2:
            continue
        found += 1
        eng_x = gaussian.moments(
            gaussian.superposition_from_weak_values("involutory", wv, g0, sigma)
        ).x
        rec = cf.infer_joint_from_single(eng_x, cf.ClosedFormInputs(wv, g0, sigma))
        worst_ratio = max(worst_ratio, abs(rec - np.real(wv.ab_w)) / g0**2)
    report.add(
        "series",
        "inversion of the exact <X> at g/sigma = 0.05 is O(g^2) accurate",
        worst_ratio < 20.0,
        f"max |error| / g^2 = {worst_ratio:.3f} (bounded constant)",
    )

    # adjudication: alt fourth-order <X^2> bracket vs the engine-true one
    rng3 = np.random.default_rng(seed + 5)
    s = next(sc for sc in _scenarios(rng3, 2) if sc.kind == "involutory")
    gs4 = np.array([0.02, 0.04, 0.06, 0.08, 0.10, 0.12])
    vals = np.array([_engine_report(s, g, sigma).x2 for g in gs4])
    design = np.vstack([gs4**2, gs4**4, gs4**6, gs4**8]).T
    sol, *_ = np.linalg.lstsq(design, vals, rcond=None)
    inp = cf.ClosedFormInputs(s.wv, 1.0, sigma)
    true_c4 = cf.x2_inv_g4_coefficient(inp)
    alt_c4 = (cf.x2_inv_fourth_order_alt(inp) - cf.x2_inv_second_order(inp))
    d_true = abs(sol[1] - true_c4)
    d_alt = abs(sol[1] - alt_c4)
    report.add(
        "series",
        "g^4 coefficient of <X^2>: engine matches the corrected bracket",
        d_true < 1e-6 and d_alt > 1e-3,
        f"fit {sol[1]:+.8f}; corrected {true_c4:+.8f} (gap {d_true:.1e}), "
        f"alt bracket {alt_c4:+.8f} (gap {d_alt:.1e})",
        adjudication=True,
    )

    # adjudication: projector third-order bracket arrives sign-flipped
    rng4 = np.random.default_rng(seed + 6)
    s = next(sc for sc in _scenarios(rng4, 3) if sc.kind == "projector")
    vals = np.array([_engine_report(s, g, sigma).x for g in gs])
    c3_fit = _fit_odd_series(vals, gs)[1]
    inp = cf.ClosedFormInputs(s.wv, 1.0, sigma)
    _, c3_true = cf.x_proj_series(inp)
    c3_alt = cf.x_proj_series_alt_bracket(inp)
    report.add(
        "series",
        "projector g^3 bracket: engine equals the negated alt bracket",
        abs(c3_fit - c3_true) < 1e-7 and abs(c3_fit + c3_alt) < 1e-7,
        f"fit {c3_fit:+.8f}; branch form {c3_true:+.8f}; alt bracket {c3_alt:+.8f} "
        "(documented sign flip)",
        adjudication=True,
    )


# --------------------------------------------------------------------------
# criterion 9: single-pointer inversion on the imaginary-weak-value scenario
# --------------------------------------------------------------------------

def theta_scenario(theta: float = math.pi / 6):
    """Pre |+z,+z>, post (cos t |+z> - i sin t |-z>) (x) |+z>, A = sx (x) 1,
    B = 1 (x) sz.  Realizes a_w = i tan t, b_w = 1, ab_w = i tan t."""
    pre = ket([1, 0, 0, 0], normalized=True)
    post = ket([math.cos(theta), 0, -1j * math.sin(theta), 0], normalized=True)
    a = tensor(sigma_x(), identity(2))
    b = tensor(identity(2), sigma_z())
    return pre, post, a, b


def check_single_pointer_inversion(report: VerifyReport) -> None:
    pre, post, a, b = theta_scenario()
    wv = weak_value_set(pre, post, a, b)
    sigma = 1.0
    xs = []
    for g in (0.02, 0.05, 0.1, 0.5, 1.0, 2.0):
        eng = _engine_report(Scenario("involutory", pre, post, a, b, wv), g, sigma)
        xs.append((g, eng.x, 4 * sigma**2 * eng.x / g**3))
    max_x = max(abs(x) for _, x, _ in xs)
    jw = wv.ab_w
    finding_holds = max_x < 1e-12 and abs(np.real(jw)) < 1e-12 and abs(np.imag(jw)) > 0.5
    report.add(
        "series",
        "single-pointer inversion, imaginary-joint-value scenario",
        finding_holds,
        "FINDING: with a_w = i tan(pi/6) and joint value "
        f"{jw:.6f} purely imaginary, the exact <X> displacement is 0 at every "
        f"coupling (max |x| = {max_x:.2e}); 4 s^2 <X>/g^3 = 0 therefore equals "
        "Re(joint value) = 0 but carries no information about the imaginary "
        "part, so the proportionality claimed for this scenario holds only "
        "for the real part (the all-real premise of the inversion is violated)",
        adjudication=True,
    )


# --------------------------------------------------------------------------
# criterion 5-7: Hardy
# --------------------------------------------------------------------------

def check_hardy_table(report: VerifyReport) -> None:
    s = hardy.build_scenario("continuous", 1.0)
    table = hardy.weak_value_table(s)
    expected = {
        "O_A": 1, "O_B": 1, "NO_A": 0, "NO_B": 0,
        "O_A&O_B": 0, "O_A&NO_B": 1, "NO_A&O_B": 1, "NO_A&NO_B": -1,
    }
    worst = max(abs(table[k] - v) for k, v in expected.items())
    total = sum(table[f"{a}&{b}"] for a in ("O_A", "NO_A") for b in ("O_B", "NO_B"))
    report.add(
        "hardy",
        "weak-value table equals (1,1,0,0,0,1,1,-1)",
        worst < 1e-13 and abs(total - 1) < 1e-13,
        f"max deviation {worst:.2e}; joint sum rule |sum - 1| = {abs(total - 1):.2e}",
    )


def _hardy_sweep_small(meter: str):
    s = hardy.build_scenario(meter, 1.0)
    gs = np.concatenate([np.geomspace(1e-3, 1e-2, 8), np.geomspace(2e-2, 1.0, 8)])
    return s, hardy.sweep(s, gs)


def check_hardy_continuous(report: VerifyReport) -> None:
    s = hardy.build_scenario("continuous", 1.0)
    gs = np.geomspace(1e-3, 5.0, 200)
    rows = hardy.sweep(s, gs)

    p1_max = max(abs(r["P1"]) for r in rows)
    p23_max = max(abs(r["P2"] - r["P3"]) for r in rows)
    report.add(
        "hardy",
        "continuous P1 identically zero",
        p1_max < 1e-12,
        f"max |P1| = {p1_max:.2e} over {len(rows)} samples",
    )
    report.add(
        "hardy",
        "continuous P2 = P3 at every coupling",
        p23_max < 1e-12,
        f"max |P2 - P3| = {p23_max:.2e}",
    )
    cf_gap = max(
        abs(r[f"P{c}"] - r[f"P{c}_cf"]) for r in rows for c in (1, 2, 3, 4)
    )
    report.add(
        "hardy",
        "continuous engine matches the tabulated curves",
        cf_gap < 1e-9,
        f"max |engine - closed form| = {cf_gap:.2e} (tol 1e-9)",
    )
    at = {}
    for g_target in (1e-2, 5.0):
        idx = int(np.argmin(np.abs(gs - g_target)))
        at[g_target] = rows[idx]
    limit_dev = max(
        abs(at[1e-2][f"P{c}"] - lim)
        for c, lim in zip((1, 2, 3, 4), hardy.WEAK_LIMITS)
    )
    report.add(
        "hardy",
        "continuous weak limits (0,1,1,-1) at g/sigma = 1e-2",
        limit_dev < 1e-4,
        f"max deviation {limit_dev:.2e} (tol 1e-4)",
    )
    plateau_dev = max(abs(at[5.0][f"P{c}"] - 1 / 3) for c in (2, 3, 4))
    report.add(
        "hardy",
        "continuous strong-coupling plateau 1/3 at g/sigma = 5",
        plateau_dev < 1e-3,
        f"max |P - 1/3| = {plateau_dev:.2e} (tol 1e-3)",
    )
    root = hardy.find_sign_change(
        lambda g: hardy.p_continuous(s, 4, g).engine, 1.5, 1.8
    )
    target = math.sqrt(4 * math.log(2))
    report.add(
        "hardy",
        "continuous P4 sign change at g/sigma = sqrt(4 ln 2)",
        abs(root - target) < 5e-4,
        f"bisected root {root:.6f}, expected {target:.6f} "
        f"(|gap| = {abs(root - target):.2e}, tol 5e-4)",
    )


def check_hardy_discrete(report: VerifyReport) -> None:
    s = hardy.build_scenario("qubit")
    gs = np.concatenate(
        [np.geomspace(1e-3, 1e-2, 6), np.linspace(0.02, math.pi - 0.02, 120)]
    )
    rows = hardy.sweep(s, gs)
    p1_max = max(abs(r["P1"]) for r in rows)
    p23_max = max(abs(r["P2"] - r["P3"]) for r in rows)
    report.add(
        "hardy",
        "discrete P1 identically zero",
        p1_max < 1e-12,
        f"max |P1| = {p1_max:.2e}",
    )
    report.add(
        "hardy",
        "discrete P2 = P3 at every coupling",
        p23_max < 1e-12,
        f"max |P2 - P3| = {p23_max:.2e}",
    )
    idx = int(np.argmin(np.abs(gs - 1e-2)))
    limit_dev = max(
        abs(rows[idx][f"P{c}"] - lim)
        for c, lim in zip((1, 2, 3, 4), hardy.WEAK_LIMITS)
    )
    report.add(
        "hardy",
        "discrete weak limits (0,1,1,-1) at g = 1e-2",
        limit_dev < 1e-4,
        f"max deviation {limit_dev:.2e} (tol 1e-4)",
    )
    root = hardy.find_sign_change(
        lambda g: hardy.p_discrete(s, 4, g).engine, 1.2, 1.9, iterations=80
    )
    report.add(
        "hardy",
        "discrete P4 sign change at g = pi/2 (bisection on the exact engine)",
        abs(root - math.pi / 2) < 1e-6,
        f"bisected root {root:.9f}, expected {math.pi/2:.9f} "
        f"(|gap| = {abs(root - math.pi/2):.2e}, tol 1e-6)",
    )
    spot2 = hardy.hardy_discrete_cf(2, 1.0)
    spot4 = hardy.hardy_discrete_cf(4, 1.0)
    report.add(
        "hardy",
        "discrete tabulated spot values P2(1), P4(1)",
        abs(spot2 - 1.05185) < 1e-4 and abs(spot4 - (-1.10371)) < 1e-4,
        f"P2(1) = {spot2:.6f} (expect 1.05185), P4(1) = {spot4:.6f} "
        "(expect -1.10371), tol 1e-4",
    )
    # P = -disp / (2 g^2) amplifies the engine's rounding floor by 1/g^2 at
    # small couplings, so the curve comparison carries a 1e-9 tolerance.
    eng_cf_gap = max(
        abs(r[f"P{c}"] - hardy.hardy_discrete_engine_cf(c, r["g"]))
        for r in rows
        for c in (1, 2, 3, 4)
    )
    report.add(
        "hardy",
        "discrete engine matches its closed trigonometric form",
        eng_cf_gap < 1e-9,
        f"max gap {eng_cf_gap:.2e} (tol 1e-9)",
    )
    tab_gap = max(
        abs(r[f"P{c}"] - r[f"P{c}_cf"]) for r in rows for c in (2, 4)
    )
    report.add(
        "hardy",
        "discrete tabulated curves deviate from the engine at finite g",
        tab_gap > 0.1,
        f"max |engine - tabulated| = {tab_gap:.3f}; limits and the pi/2 sign "
        "change agree, finite-g values do not (documented denominator slip "
        "in the tabulated curves)",
        adjudication=True,
    )


# --------------------------------------------------------------------------
# criterion 8: qubit meter self-consistency
# --------------------------------------------------------------------------

def _rand_qubit_scenario(rng: np.random.Generator, g: float | None = None):
    pa, pb = _rotated_pair(rng, "projector")
    pre, post = _rand_state(rng, 4), _rand_state(rng, 4)
    if abs(post.overlap(pre)) < 0.05:
        return None
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    meter_init = ket(v / np.linalg.norm(v), normalized=True)

    def rand_invol():
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        m = (
            n[0] * sigma_x().entries
            + n[1] * np.array([[0, -1j], [1j, 0]])
            + n[2] * sigma_z().entries
        )
        return Operator(m)

    return qubitmeter.QubitMeterScenario(
        pre=pre,
        post=post,
        pa=pa,
        pb=pb,
        meter_init=meter_init,
        sigma1=rand_invol(),
        sigma2=rand_invol(),
        g=float(rng.uniform(0.05, 2 * math.pi)) if g is None else g,
    )


def check_qubit_engine(report: VerifyReport, seed: int = SEED) -> None:
    rng = np.random.default_rng(seed + 7)
    worst_pair = 0.0
    worst_unitary = 0.0
    worst_period = 0.0
    worst_cf = 0.0
    count = 0
    while count < 100:
        s = _rand_qubit_scenario(rng)
        if s is None:
            continue
        count += 1
        wv = weak_value_set(s.pre, s.post, s.pa, s.pb)
        m1, m2 = tensor(s.sigma1, identity(2)), tensor(identity(2), s.sigma2)
        h = Operator(tensor(s.pa, m1).entries + tensor(s.pb, m2).entries)
        u = expm_hermitian(h, -1j * s.g)
        worst_unitary = max(
            worst_unitary,
            float(np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(16)))),
        )
        meter = qubitmeter.evolve_postselect_qubit(s)
        eta = qubitmeter.eta_operator(wv.a_w, wv.b_w, wv.ab_w, s.g, m1, m2)
        xi_eta = wv.overlap * (eta @ s.meter_init.amplitudes)
        worst_pair = max(
            worst_pair, float(np.max(np.abs(meter.state.amplitudes - xi_eta)))
        )
        # displacement of sigma1 sigma2: engine vs the four-moment contraction
        m12 = m1.matmul(m2)
        disp = qubitmeter.meter_expectation(meter.state, m12, s.meter_init)
        disp_cf = qubitmeter.cf_qubit_joint(s)
        worst_cf = max(worst_cf, abs(disp - disp_cf))
        # 2 pi periodicity
        s2 = qubitmeter.QubitMeterScenario(
            s.pre, s.post, s.pa, s.pb, s.meter_init, s.sigma1, s.sigma2,
            s.g + 2 * math.pi,
        )
        disp2 = qubitmeter.meter_expectation(
            qubitmeter.evolve_postselect_qubit(s2).state, m12, s.meter_init
        )
        worst_period = max(worst_period, abs(disp - disp2))
    report.add(
        "qubit-engine",
        "matrix-exponential vs weak-value construction (100 scenarios)",
        worst_pair < 1e-12,
        f"max amplitude gap {worst_pair:.3e} (tol 1e-12)",
    )
    report.add(
        "qubit-engine",
        "coupling evolution is unitary",
        worst_unitary < 1e-12,
        f"max |U^dag U - 1| = {worst_unitary:.3e} (tol 1e-12)",
    )
    report.add(
        "qubit-engine",
        "displacements are 2 pi periodic in g",
        worst_period < 1e-12,
        f"max |disp(g) - disp(g + 2 pi)| = {worst_period:.3e}",
    )
    report.add(
        "qubit-engine",
        "four-moment contraction closed form matches the engine",
        worst_cf < 1e-12,
        f"max gap {worst_cf:.3e}",
    )

    # adjudication: the transcribed all-order display deviates
    rng2 = np.random.default_rng(seed + 8)
    devs = []
    count = 0
    while count < 10:
        s = _rand_qubit_scenario(rng2)
        if s is None:
            continue
        count += 1
        wv = weak_value_set(s.pre, s.post, s.pa, s.pb)
        m1, m2 = tensor(s.sigma1, identity(2)), tensor(identity(2), s.sigma2)
        moments = qubitmeter.meter_moments(s.meter_init, m1, m2)
        exact = qubitmeter.cf_qubit_joint(s, moments)
        alt = qubitmeter.cf_qubit_joint_alt(wv.a_w, wv.b_w, wv.ab_w, s.g, moments)
        devs.append(abs(exact - alt))
    report.add(
        "qubit-engine",
        "alt all-order two-qubit display deviates from the engine",
        max(devs) > 1e-3,
        f"max |exact - alt| = {max(devs):.3f} over 10 random scenarios "
        "(documented transcription deviation; the exact four-moment "
        "contraction is the arbiter)",
        adjudication=True,
    )
    # zero weak values: meter untouched
    o = ket([1, 0])
    pre = ket(np.kron(o.amplitudes, o.amplitudes), normalized=True)
    p_no = tensor(projector(ket([0, 1])), identity(2))
    p_nob = tensor(identity(2), projector(ket([0, 1])))
    scen = qubitmeter.QubitMeterScenario(
        pre=pre,
        post=pre,
        pa=p_no,
        pb=p_nob,
        meter_init=ket([1, 0, 0, 0], normalized=True),
        sigma1=sigma_x(),
        sigma2=sigma_x(),
        g=1.3,
    )
    meter = qubitmeter.evolve_postselect_qubit(scen)
    gap = float(
        np.max(np.abs(meter.state.amplitudes - np.array([1, 0, 0, 0], complex)))
    )
    report.add(
        "qubit-engine",
        "vanishing weak values leave the meter untouched",
        gap < 1e-12,
        f"max amplitude gap {gap:.3e}",
    )


# --------------------------------------------------------------------------
# suite driver
# --------------------------------------------------------------------------

def run_all(
    grid_n: int = 1024, fast: bool = False, pairs: int = 50, seed: int = SEED
) -> VerifyReport:
    report = VerifyReport()
    check_triple_engine(report, pairs=pairs, grid_n=grid_n, fast=fast, seed=seed)
    check_closed_forms(report, pairs=pairs, seed=seed)
    check_rs_recovery(report, seed=seed)
    check_third_order(report, seed=seed)
    check_single_pointer_inversion(report)
    check_hardy_table(report)
    check_hardy_continuous(report)
    check_hardy_discrete(report)
    check_qubit_engine(report, seed=seed)
    return report

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochball.geometry import BallPoint, rho_ball
from blochball.holo import Cayley, Linear, SamplingBudget, dilation, function_family
from blochball.mobius import MobiusMap, quotient_BC
from blochball.operators import (
    Composition,
    InterpSequence,
    KalajMap,
    RangeError,
    ScalarMap,
    ScanConfig,
    UnitaryMap,
    automorphism_invariance,
    cayley_basis,
    composition_contraction,
    defect,
    finite_section,
    inequality_checks,
    interp_separation,
    jacobian_norm,
    kalaj_check,
    necessary_scan,
    parse_map,
    perturb_sequence,
    perturbation_check,
    preimage_w,
    range_identity_checks,
    schwarz_pointwise,
    sufficient_scan,
    tau,
    tau_tilde,
    y_grid,
)
from blochball.sampling import derive_rng, random_ball, random_directions, random_unitary
from strategies import dim_and_points

FAST = ScanConfig(samples=400, refine_steps=30)


def maps(n, seed=0):
    rng = derive_rng(seed, "maps", n)
    a = BallPoint(random_ball(rng, n, 1, 0.9)[0])
    out = [MobiusMap(a), ScalarMap(0.7 * np.exp(0.3j), n), UnitaryMap(random_unitary(rng, n)),
           Composition((MobiusMap(a), ScalarMap(0.8, n))), Composition((ScalarMap(0.5, n), MobiusMap(a)))]
    if n == 2:
        out.append(KalajMap(0.7))
    return out


# --------------------------------------------------------------- maps


def test_jacobians_match_finite_differences():
    rng = derive_rng(1, "fdj")
    for n in (1, 2, 3):
        for psi in maps(n):
            x, v = random_ball(rng, n, 1, 0.8)[0], random_directions(rng, n, 1)[0]
            h = 1e-6
            fd = (psi.apply(x + h * v) - psi.apply(x - h * v)) / (2 * h)
            assert np.allclose(psi.jacobian(x) @ v, fd, atol=1e-7), psi.describe()


def test_defects_match_norms():
    rng = derive_rng(2, "defect")
    for n in (1, 2):
        for psi in maps(n):
            x = random_ball(rng, n, 20, 0.9)
            direct = 1 - np.linalg.norm(psi.apply(x), axis=-1) ** 2
            assert np.allclose(defect(psi, x), direct, rtol=1e-10, atol=1e-14)


def test_composition_order():
    s, u = ScalarMap(0.5, 2), UnitaryMap(np.array([[0, 1], [1, 0]]))
    x = np.array([0.2, 0.4j])
    assert np.allclose(Composition((s, u)).apply(x), u.apply(s.apply(x)))
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((ScalarMap(0.5, 1), u))


def test_map_validation():
    with pytest.raises(ValueError):
        ScalarMap(1.1)
    with pytest.raises(ValueError):
        KalajMap(0.0)
    with pytest.raises(ValueError):
        UnitaryMap(np.ones((2, 2)))


def test_parse_map():
    assert parse_map("mobius:a=0.3", 3).dim == 3
    assert parse_map("scalar:0.5", 2).apply(np.array([0.2, 0.2])) == pytest.approx([0.1, 0.1])
    assert parse_map("kalaj:t=0.7").kind == "kalaj"
    assert parse_map("unitary:phases=0,1.5").dim == 2
    assert parse_map("mobius:a=0.1+0.2i").describe() == parse_map("mobius:a=0.1+0.2j").describe()
    comp = parse_map("scalar:0.5 | mobius:a=0.2,0", 2)
    assert comp.kind == "composition" and len(comp.maps) == 2
    for bad in ("nonsense", "scalar:abc", "kalaj:t=2", "mobius:a=1.0", "scalar:0.1,0.2", "foo:1"):
        with pytest.raises(ValueError):
            parse_map(bad, 2)


# ------------------------------------------------------------- tau

def test_scalar_tau_closed_form():
    psi = ScalarMap(0.5, 2)
    assert tau(psi, np.zeros(2)) == pytest.approx(0.5)
    x = random_ball(derive_rng(3, "s"), 2, 50)
    r2 = np.linalg.norm(x, axis=-1) ** 2
    assert np.allclose(tau(psi, x), 0.5 * (1 - r2) / (1 - 0.25 * r2), rtol=1e-12)
    assert np.allclose(tau_tilde(psi, x), 0.5 * np.sqrt(1 - r2) / (1 - 0.25 * r2), rtol=1e-12)


@pytest.mark.parametrize("t", [0.1, 0.7, 1.5])
def test_kalaj_values(t):
    psi = KalajMap(t)
    o = np.zeros(2)
    assert tau_tilde(psi, o) == pytest.approx(1 / np.sin(t))
    assert kalaj_check(psi, o) == pytest.approx(1.0, abs=1e-12)
    x = np.array([0.6j, 0.3])
    # (1-|x|^2) sin t / (sin t sqrt(1-|z|^2))
    assert kalaj_check(psi, x) == pytest.approx((1 - 0.45) / np.sqrt(1 - 0.36))


@given(dim_and_points(1, r_max=0.999), st.integers(0, 4))
def test_tau_order_and_kalaj_bound(data, k):
    n, (x,) = data
    psi = maps(n)[k]
    assert tau(psi, x) <= tau_tilde(psi, x) * (1 + 1e-12)
    assert kalaj_check(psi, x) <= 1 + 1e-9


@given(dim_and_points(1, r_max=0.999))
def test_tau_of_automorphism_at_least_one(data):
    n, (x,) = data
    psi = MobiusMap(BallPoint(random_ball(derive_rng(n, "aut"), n, 1, 0.95)[0]))
    t = tau(psi, x)
    assert t >= 1 - 1e-9
    if n == 1:
        assert t == pytest.approx(1.0, abs=1e-9)


def test_tau_of_automorphism_at_origin():
    # |phi_a'(0)| = sqrt(1 - |a|^2) once n >= 2, and 1 - |phi_a(0)|^2 = 1 - |a|^2
    a = np.array([0.6, 0.0])
    assert tau(MobiusMap(BallPoint(a)), np.zeros(2)) == pytest.approx(1 / 0.8)
    assert tau(MobiusMap(BallPoint(a[:1])), np.zeros(1)) == pytest.approx(1.0)


# --------------------------------------------------------- preimage

def test_preimage_for_scalar():
    psi, x = ScalarMap(-0.5, 2), np.array([0.2, 0.1j])
    # psi'(x) = z I and |psi'| = |z|, so w = |z| x
    assert np.allclose(preimage_w(psi, x), 0.5 * x)
    assert np.allclose(preimage_w(psi, np.zeros(2)), 0)
    assert range_identity_checks(psi, np.zeros(2)) == {}


def test_preimage_fails_for_kalaj():
    with pytest.raises(RangeError):
        preimage_w(KalajMap(0.7), np.array([0.3, 0.1]))
    with pytest.raises(RangeError):
        range_identity_checks(KalajMap(0.7), np.array([0.3, 0.1]))


def test_range_identities_hold():
    rng = derive_rng(4, "ri")
    for n in (1, 2, 5):
        for psi in maps(n)[:5]:
            for x in random_ball(rng, n, 20, 0.95):
                for name, c in range_identity_checks(psi, x).items():
                    assert c.holds, (psi.describe(), name, c)


def test_inequality_checks_hold():
    rng = derive_rng(5, "iq")
    for n in (1, 2, 4):
        for psi in maps(n):
            for x, w in zip(random_ball(rng, n, 20, 0.95), random_directions(rng, n, 20)):
                for name, c in inequality_checks(psi, x, w).items():
                    assert c.holds, (psi.describe(), name, c)


def test_schwarz_quotient_strict_for_scalar():
    q = quotient_BC(ScalarMap(0.5, 2), np.array([0.3, 0.0]), np.array([0.0, 1.0]))
    assert q < 1


# ---------------------------------------------------------- scanners

def test_y_grid_shape():
    g = y_grid(3, radius=0.9, rings=2, angles=4, extra=5)
    assert g.shape == (1 + 8 + 5, 3)
    assert np.all(np.linalg.norm(g, axis=-1) <= 0.9 + 1e-12)
    assert np.array_equal(g, y_grid(3, radius=0.9, rings=2, angles=4, extra=5))


def test_necessary_scan_surjective_maps_reach_everything():
    rep = necessary_scan(MobiusMap(BallPoint.of(0.5, 0)), 1.0, y_grid(2, extra=4), FAST)
    assert rep.r_hat < 1e-10 and not rep.evidence_against and rep.empty == []
    rep = necessary_scan(UnitaryMap(np.diag(np.exp([0.3j, 1.1j]))), 1.0, y_grid(2, extra=4), FAST)
    assert rep.r_hat < 1e-10


def test_sufficient_scan_scalar_fails_outside_range():
    ys = y_grid(2, radius=0.9, rings=3, angles=4, extra=0)
    rep = sufficient_scan(ScalarMap(0.5, 2), 1e-3, 0.1, ys, FAST)
    assert not rep.success
    for y, ok in zip(ys, rep.accepted):
        if np.linalg.norm(y) > 0.5 + 1e-3:
            assert not ok


def test_necessary_scan_flags_scalar_contraction():
    rep = necessary_scan(ScalarMap(0.5, 2), 0.25, y_grid(2, radius=0.99, rings=1, extra=0), ScanConfig())
    # tau_tilde >= 1/4 means 2 sqrt(1 - u) >= 1 - u/4 with u = |x|^2, i.e. u^2 + 56u - 48 <= 0;
    # the closest image of such x to a point at radius 0.99 sits at radius sqrt(u_max) / 2
    u = (-56 + np.sqrt(56**2 + 4 * 48)) / 2
    want = rho_ball(np.array([0.5 * np.sqrt(u)]), np.array([0.99]))
    assert want <= rep.r_hat <= want + 1e-4
    assert rep.evidence_against


def test_necessary_scan_empty_rows():
    rep = necessary_scan(ScalarMap(0.5, 1), 10.0, y_grid(1, rings=1, angles=2, extra=0), FAST)
    assert len(rep.empty) == 3 and np.isnan(rep.r_hat)
    with pytest.raises(ValueError):
        necessary_scan(ScalarMap(0.5, 1), 0.0, y_grid(1))


def test_sufficient_scan_automorphism():
    a = np.array([0.5, 0])
    psi = MobiusMap(BallPoint(a))
    ys = y_grid(2, extra=4)
    rep = sufficient_scan(psi, 1e-6, 0.99, ys, FAST, A0=3 * np.sqrt(3) / 2)
    assert rep.success and rep.eps_found >= 1 - 1e-6 and rep.clears_threshold
    # independent k: witness x = psi(y), w_x from its least-squares definition
    for y, k in zip(ys, rep.k_values):
        x = psi.apply(y)
        w = np.linalg.lstsq(psi.jacobian(x), jacobian_norm(psi, x) * psi.apply(x), rcond=None)[0]
        if np.linalg.norm(w) < 1e-300:
            assert k is None
        else:
            assert k == pytest.approx(14 * (1 / (15 * rep.A0) - 1e-6) * 0.99 / np.linalg.norm(w), rel=1e-8)
    assert rep.k_inf == min(k for k in rep.k_values if k is not None)


def test_sufficient_scan_kalaj_never_accepts():
    rep = sufficient_scan(KalajMap(0.7), 1e-3, 0.5, y_grid(2, rings=2, extra=2), FAST)
    assert not rep.success and not any(rep.accepted)


# ----------------------------------------------------- interpolation

def test_separation_values():
    assert interp_separation(InterpSequence((BallPoint.of(0.9), BallPoint.of(-0.9)))) == pytest.approx(1.8 / 1.81)
    pts = [1 - Fraction(1, 2**j) for j in range(1, 6)]
    exact = min((b - a) / (1 - a * b) for a, b in zip(pts, pts[1:]))
    assert exact == Fraction(16, 47)
    assert interp_separation(InterpSequence.geometric(5)) == pytest.approx(16 / 47, abs=1e-12)
    with pytest.raises(ValueError):
        interp_separation(InterpSequence((BallPoint.of(0.5),)))
    with pytest.raises(ValueError):
        InterpSequence((np.zeros(1),))


def test_section_entries():
    seq, f = InterpSequence((BallPoint.of(0.5),)), Cayley(np.array([0.49]))
    p = 0.5 * 0.49
    fs = finite_section(seq, [f])
    assert fs.matrix[0, 0] == pytest.approx(0.75 * p / (1 - p) ** 2)
    assert fs.sigma_min == pytest.approx(abs(fs.matrix[0, 0]))
    with pytest.raises(ValueError):
        finite_section(InterpSequence.geometric(3), [f])


def test_section_entry_with_centre_on_the_point():
    # Rf_y(x) = <x,y>/(1-<x,y>)^2 at y = x gives |x|^2 / (1 - |x|^2)
    x = np.array([0.3, 0.4j])
    fs = finite_section(InterpSequence((BallPoint(x),)), [Cayley(x)])
    assert fs.matrix[0, 0] == pytest.approx(0.25 / 0.75, rel=1e-14)


def test_section_is_injective_on_separated_sequence():
    seq = InterpSequence.geometric(5, 2)
    assert finite_section(seq, cayley_basis(seq, 8)).sigma_min >= 1e-8


def test_merged_sequence_collapses():
    p = np.array([0.5, 0.1j])
    seq = InterpSequence((BallPoint(p), BallPoint(p)))
    assert interp_separation(seq) == 0.0
    assert finite_section(seq, cayley_basis(seq, 4)).sigma_min < 1e-8


@pytest.mark.parametrize("delta", [0.001, 0.01, 0.05])
def test_perturbation(delta):
    seq = InterpSequence.geometric(5, 2)
    moved = perturb_sequence(seq, delta, seed=1)
    assert np.allclose(rho_ball(seq.array(), moved.array()), delta, rtol=1e-9)
    basis = cayley_basis(seq, 6)
    rep = perturbation_check(seq, moved, basis, budget=SamplingBudget(samples=500))
    assert rep.holds and rep.delta_hat == pytest.approx(delta, rel=1e-9)
    a, b = seq.array(), moved.array()
    for f, row in zip(basis, rep.rows):
        assert row.lhs == pytest.approx(np.max(np.abs(dilation(f, a) - dilation(f, b))))
    with pytest.raises(ValueError):
        perturbation_check(seq, InterpSequence.geometric(3, 2), basis)


# -------------------------------------------------------- composition

def test_contraction_and_invariance():
    budget = SamplingBudget(samples=500, ascent_starts=2, ascent_steps=40)
    for n in (1, 2):
        a = BallPoint(random_ball(derive_rng(6, "ci"), n, 1, 0.8)[0])
        for f in function_family(n, size=1)[:3]:
            g_val, f_val = composition_contraction(f, ScalarMap(0.6, n), budget)
            assert g_val <= f_val * (1 + 1e-6)
            assert automorphism_invariance(f, MobiusMap(a), budget) >= 1 - 1e-6


@given(dim_and_points(1, r_max=0.99), st.integers(0, 4))
def test_schwarz_pointwise(data, k):
    n, (x,) = data
    f = Linear(np.ones(n) / np.sqrt(n))
    assert schwarz_pointwise(f, maps(n)[k], x).holds

import numpy as np
import pytest
from hypothesis import given

from blochball.geometry import BallPoint, rho_ball
from blochball.holo import (
    Cayley,
    Combination,
    Linear,
    LogCayley,
    Monomial,
    Precomposed,
    SamplingBudget,
    beta_lipschitz_defect,
    cauchy_epsilon,
    cauchy_lemma_check,
    dilation,
    estimate_A0,
    function_family,
    growth_bound_check,
    intermediate_defect,
    invariant_gradient_norm,
    invariant_gradient_sup,
    lipschitz_defect,
    lipschitz_ratio,
    modulus_lipschitz_defect,
    radial_derivative,
    seminorm,
    seminorm_objective,
    seminorm_profile,
)
from blochball.mobius import MobiusMap
from blochball.sampling import derive_rng, random_ball, random_directions
from strategies import dim_and_points


def disk_grid(k=1500, r_max=1 - 1e-6):
    r = 1 - np.geomspace(1, 1 - r_max, k)
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    return (r[:, None] * np.exp(1j * t)[None, :]).reshape(-1, 1)


def fd_grad(f, x, h=1e-6):
    g = np.empty(x.size, dtype=complex)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def test_gradients_match_finite_differences():
    rng = derive_rng(0, "fd")
    for n in (1, 2, 4):
        x = random_ball(rng, n, 1, 0.8)[0]
        for f in function_family(n, size=2):
            assert np.allclose(f.grad(x), fd_grad(f, x), atol=1e-6 * max(1, np.abs(f.grad(x)).max()))


def test_monomial_values():
    f = Monomial((2, 0, 1))
    x = np.array([0.5, 0.3, 0.2j])
    assert f(x) == pytest.approx(0.25 * 0.2j)
    assert np.allclose(f.grad(x), [2 * 0.5 * 0.2j, 0, 0.25])
    with pytest.raises(ValueError):
        Monomial((-1,))


def test_constructors_validate():
    with pytest.raises(ValueError):
        Cayley(np.array([1.0]))
    with pytest.raises(ValueError):
        LogCayley(np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        Combination([(1.0, Linear([1.0])), (1.0, Linear([1.0, 0.0]))])


def test_combination_algebra():
    f, g = Linear(np.array([0.5, 0])), Cayley(np.array([0.0, 0.3]))
    h = f + 2 * g
    x = np.array([0.1, 0.2j])
    assert h(x) == pytest.approx(f(x) + 2 * g(x))
    assert np.allclose(h.grad(x), f.grad(x) + 2 * g.grad(x))


def test_radial_derivative_of_cayley():
    y = np.array([0.4, 0.2j])
    x = np.array([0.3, -0.1])
    p = np.vdot(y, x)
    assert radial_derivative(Cayley(y), x) == pytest.approx(p / (1 - p) ** 2)


def test_linear_seminorms():
    f = Linear(np.array([0.5]))
    pts = np.linspace(0, 1, 100_001)[:-1, None].astype(complex)
    assert seminorm_objective(f, "R", pts).max() == pytest.approx(0.5 * 2 / (3 * np.sqrt(3)), rel=1e-9)
    prof = seminorm_profile(f, SamplingBudget(samples=2000))
    assert prof["R"].value == pytest.approx(0.5 * 2 / (3 * np.sqrt(3)), rel=1e-6)
    assert prof["B"].value == pytest.approx(0.5)
    assert prof["I"].value == pytest.approx(0.5)


def test_cayley_bloch_seminorm_closed_form():
    # brute force on a fine disk grid agrees with |y| / (1 - |y|^2)
    for r in (0.2, 0.6, 0.9):
        f = Cayley(np.array([r]))
        grid = seminorm_objective(f, "B", np.concatenate([disk_grid(), [[r]]])).max()
        assert grid == pytest.approx(r / (1 - r * r), rel=1e-9)
        assert seminorm(f, "B").value == pytest.approx(r / (1 - r * r), rel=1e-6)


def test_log_function_invariant_seminorm_approaches_two():
    f = LogCayley(np.array([1.0]))
    assert seminorm_objective(f, "I", disk_grid(r_max=1 - 1e-9)).max() == pytest.approx(2.0, abs=1e-6)
    assert 1.99 <= seminorm(f, "I").value <= 2.0 + 1e-9


@given(dim_and_points(1, r_max=0.999))
def test_invariant_gradient_equals_gradient_of_composition_at_origin(data):
    n, (x,) = data
    f = function_family(n, size=1)[1]
    g = Precomposed(f, MobiusMap(BallPoint(x)))
    direct = np.linalg.norm(g.grad(np.zeros(n)))
    assert invariant_gradient_norm(f, x) == pytest.approx(direct, rel=1e-6, abs=1e-12)


def test_invariant_gradient_closed_form_vs_search():
    rng = derive_rng(1, "igs")
    for n in (1, 2, 5):
        fam = function_family(n, size=1)
        for j, x in enumerate(random_ball(rng, n, 12)):
            f = fam[j % len(fam)]
            a = invariant_gradient_norm(f, x)
            b = invariant_gradient_sup(f, x, directions=200, seed=j)
            assert abs(a - b) <= 0.01 * max(a, b, 1e-300)


def test_seminorm_chain_and_methods():
    for n in (1, 3):
        for f in function_family(n, size=1):
            for method in ("random", "grid", "random+ascent"):
                prof = seminorm_profile(f, SamplingBudget(samples=500, method=method))
                # B and I coincide in dimension 1, so allow rounding
                assert prof["R"].value <= prof["B"].value <= prof["I"].value * (1 + 1e-12)
                est = prof["I"]
                assert est.value == pytest.approx(float(seminorm_objective(f, "I", est.witness.coords[None])[0]))


def test_seminorm_rejects_unknown_kind():
    with pytest.raises(ValueError):
        seminorm_objective(Linear([1.0]), "X", np.zeros((1, 1)))


def test_estimate_A0_for_linear():
    assert estimate_A0([Linear(np.array([0.7]))]) == pytest.approx(3 * np.sqrt(3) / 2, rel=1e-6)


def _pairs(n, k, seed):
    rng = derive_rng(seed, "pairs", n)
    x = random_ball(rng, n, k)
    v = random_directions(rng, n, k) * (10.0 ** rng.uniform(-6, -0.01, k))[:, None]
    y = np.array([MobiusMap(BallPoint(p)).apply(q) for p, q in zip(x, v)])
    return x, y


def test_lipschitz_family_of_bounds():
    for n in (1, 2, 5):
        x, y = _pairs(n, 300, n)
        for f in function_family(n, size=1):
            s = seminorm(f, "I", SamplingBudget(samples=1000)).value
            assert np.all(np.asarray(lipschitz_defect(f, x, y, s)) <= 1e-9)
            assert np.all(np.asarray(modulus_lipschitz_defect(f, x, y, s)) <= 1e-9)
            assert np.all(np.asarray(intermediate_defect(f, x, y, s)) <= 1e-9)
            assert np.all(np.asarray(beta_lipschitz_defect(f, x, y, s)) <= 1e-9)
            ok = rho_ball(x, y) > 1e-6
            assert np.all(np.asarray(lipschitz_ratio(f, x[ok], y[ok], s)) <= 14)


def test_dilation_defect_is_exact_difference():
    f = Cayley(np.array([0.5]))
    x, y = np.array([0.2]), np.array([-0.3])
    d = lipschitz_defect(f, x, y, 1.0)
    assert d == pytest.approx(abs(dilation(f, x) - dilation(f, y)) - 14 * rho_ball(x, y))


def test_cauchy_and_growth_bounds():
    f = Cayley(np.array([0.3, 0.4j]))
    s_i = seminorm(f, "I").value
    s_b = seminorm(f, "B").value
    x, y = np.array([0.6, 0.1]), np.array([0.55, 0.15j])
    eps = cauchy_epsilon(x)
    assert eps == pytest.approx((1 - np.linalg.norm(x)) / (2 * np.linalg.norm(x)))
    rep = cauchy_lemma_check(f, x, y, eps, s_i)
    assert rep.holds and rep.margin >= 0
    ok, lhs, rhs = growth_bound_check(f, x, s_b)
    assert ok and lhs <= rhs
    with pytest.raises(ValueError):
        cauchy_lemma_check(f, x, y, 1.0, s_i)
    with pytest.raises(ValueError):
        cauchy_epsilon(np.zeros(2))


def test_family_covers_every_kind():
    kinds = {f.kind for f in function_family(3)}
    assert kinds == {"linear", "cayley", "log-cayley", "monomial", "mobius-precomposed", "affine-combination"}
    assert [f.describe() for f in function_family(2, seed=5)] == [f.describe() for f in function_family(2, seed=5)]

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochball.c0s import FiniteC0Vector, c0s_bound, c0s_scaling_check, c0s_scan, random_c0s, rho_c0s, site_bounds
from blochball.geometry import rho_disk
from blochball.sampling import derive_rng


def test_vector_validation():
    with pytest.raises(ValueError):
        FiniteC0Vector(np.array([]))
    with pytest.raises(ValueError):
        FiniteC0Vector(np.array([0.2, 1.0]))
    v = FiniteC0Vector([0.5, -0.2j])
    assert v.sup_norm == pytest.approx(0.5) and len(v) == 2
    with pytest.raises(ValueError):
        v.values[0] = 0


def test_two_site_example():
    x, y = FiniteC0Vector([0.5, 0.0]), FiniteC0Vector([-0.5, 0.0])
    assert rho_c0s(x, y) == pytest.approx(0.8)
    assert c0s_bound(x, y) == pytest.approx(1.5)
    assert c0s_scaling_check(x, y, 1.5).holds


def test_singleton_is_disk():
    rng = derive_rng(0, "single")
    a, b = random_c0s(rng, 1, 200), random_c0s(rng, 1, 200)
    assert np.allclose(rho_c0s(a, b), rho_disk(a[:, 0], b[:, 0]), rtol=0, atol=0)


def test_site_bounds_dominate_global_bound():
    x = np.array([0.5, 0.0, 0.25j])
    sb = site_bounds(x)
    assert sb[1] == np.inf and sb[0] == pytest.approx(1.5) and sb[2] == pytest.approx(2.5)
    assert np.all(sb >= c0s_bound(x, x))


def test_rejections():
    x, y = FiniteC0Vector([0.5]), FiniteC0Vector([0.1, 0.2])
    with pytest.raises(ValueError):
        rho_c0s(x, y)
    with pytest.raises(ValueError):
        c0s_scaling_check(x, y, 1.0)
    with pytest.raises(ValueError):
        c0s_scaling_check(x, FiniteC0Vector([0.2]), 1.6)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(0.01, 1.0))
def test_scaling_holds(sites, seed, w):
    rng = derive_rng(seed, "c0s-prop")
    x, y = FiniteC0Vector(random_c0s(rng, sites, 1)[0]), FiniteC0Vector(random_c0s(rng, sites, 1)[0])
    if rho_c0s(x, y) < 1e-6:
        return
    z = w * c0s_bound(x, y) * np.exp(2j * np.pi * rng.random())
    assert c0s_scaling_check(x, y, z).holds


def test_triangle_inequality():
    rng = derive_rng(1, "tri")
    x, y, z = (random_c0s(rng, 4, 2000) for _ in range(3))
    assert np.all(rho_c0s(x, z) <= rho_c0s(x, y) + rho_c0s(y, z) + 1e-12)


def test_scan():
    res, site_fail = c0s_scan(8, 5000, seed=2)
    assert res.ok and site_fail == 0 and res.worst_lhs <= 2 + 1e-9
    again, _ = c0s_scan(8, 5000, seed=2)
    assert again.worst_lhs == res.worst_lhs


def test_z_exactly_at_bound_is_admissible():
    x, y = FiniteC0Vector([0.3 + 0.4j]), FiniteC0Vector([-0.2])
    for theta in np.linspace(0, 2 * np.pi, 50):
        assert c0s_scaling_check(x, y, c0s_bound(x, y) * np.exp(1j * theta)).holds

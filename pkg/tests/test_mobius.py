import mpmath as mp
import numpy as np
import pytest
from hypothesis import given

from blochball.geometry import BallPoint, rho_ball
from blochball.mobius import (
    MobiusMap,
    bc_parts,
    deriv0,
    deriv_at,
    inv_deriv0_norm_sq,
    mobius_apply,
    project_P,
    project_Q,
    quotient_BC,
)
from blochball.sampling import derive_rng, random_ball, random_directions, random_unitary, uniform_ball
from strategies import dim_and_points

mp.mp.dps = 40


def phi_mp(a, y):
    """phi_a(y) = (s Q + P)(a - y) / (1 - <y, a>) with P = a a^H / |a|^2."""
    a = [mp.mpc(complex(c)) for c in a]
    y = [mp.mpc(complex(c)) for c in y]
    na = mp.fsum(abs(c) ** 2 for c in a)
    s = mp.sqrt(1 - na)
    d = 1 - mp.fsum(u * mp.conj(v) for u, v in zip(y, a))
    m = [(u - v) / d for u, v in zip(a, y)]
    if na == 0:
        return [complex(-c) for c in y]
    ma = mp.fsum(u * mp.conj(v) for u, v in zip(m, a))
    p = [ma / na * c for c in a]
    return [complex(s * (u - v) + v) for u, v in zip(m, p)]


def test_disk_value():
    phi = MobiusMap(BallPoint.of(0.5))
    assert phi(np.array([0.25]))[0] == pytest.approx((0.5 - 0.25) / (1 - 0.125))


def test_swaps_zero_and_center():
    a = BallPoint.of(0.3, -0.2j, 0.1)
    phi = MobiusMap(a)
    assert np.allclose(phi(np.zeros(3)), a.coords, atol=1e-15)
    assert np.allclose(phi(a.coords), 0, atol=1e-15)


def test_zero_center_is_minus_identity():
    y = np.array([0.2, 0.3j])
    assert np.allclose(MobiusMap(BallPoint.zeros(2))(y), -y)
    assert np.allclose(deriv0(MobiusMap(BallPoint.zeros(2))), -np.eye(2))


def test_matches_high_precision():
    rng = derive_rng(1, "phi-mp")
    for n in (1, 2, 4):
        a, y = random_ball(rng, n, 30, r_max=0.99), random_ball(rng, n, 30, r_max=0.99)
        for c, p in zip(a, y):
            assert np.allclose(MobiusMap(BallPoint(c))(p), phi_mp(c, p), rtol=0, atol=1e-12)


def test_mobius_apply_types():
    phi = MobiusMap(BallPoint.of(0.1, 0.2))
    assert isinstance(mobius_apply(phi, BallPoint.of(0.3, 0.0)), BallPoint)
    assert isinstance(mobius_apply(phi, np.array([0.3, 0.0])), np.ndarray)


@given(dim_and_points(2))
def test_involution(data):
    _, (a, y) = data
    phi = MobiusMap(BallPoint(a))
    err = np.linalg.norm(phi(phi(y)) - y)
    # conditioning grows like 1 / (1 - |a|^2)
    assert err * (1 - np.linalg.norm(a) ** 2) <= 32 * np.finfo(float).eps


@given(dim_and_points(2))
def test_distance_from_center(data):
    _, (a, y) = data
    assert np.linalg.norm(MobiusMap(BallPoint(a))(y)) == pytest.approx(rho_ball(a, y), abs=1e-12)


@given(dim_and_points(3))
def test_isometry(data):
    _, (a, x, y) = data
    phi = MobiusMap(BallPoint(a))
    assert rho_ball(phi(x), phi(y)) == pytest.approx(rho_ball(x, y), abs=1e-7)


def test_jacobian_matches_finite_differences():
    rng = derive_rng(2, "jac")
    for n in (1, 2, 5):
        for _ in range(40):
            a, y = random_ball(rng, n, 1, 0.95)[0], random_ball(rng, n, 1, 0.95)[0]
            v = random_directions(rng, n, 1)[0]
            u = random_unitary(rng, n)
            phi = MobiusMap(BallPoint(a), u)
            h = 1e-6
            fd = (phi(y + h * v) - phi(y - h * v)) / (2 * h)
            jv = phi.jacobian(y) @ v
            assert np.linalg.norm(fd - jv) <= 1e-6 * np.linalg.norm(jv)


def test_jacobian_is_complex_linear():
    phi = MobiusMap(BallPoint.of(0.4, 0.1j))
    y, v = np.array([0.1, -0.3]), np.array([0.2, 0.5j])
    h = 1e-6
    fd = (phi(y + 1j * h * v) - phi(y - 1j * h * v)) / (2 * h)
    assert np.allclose(fd, 1j * phi.jacobian(y) @ v, atol=1e-8)


def test_deriv0_closed_form():
    a = np.array([0.3, 0.4j, 0.1])
    na = np.vdot(a, a).real
    s = np.sqrt(1 - na)
    P = np.outer(a, a.conj()) / na
    Q = np.eye(3) - P
    assert np.allclose(deriv0(MobiusMap(BallPoint(a))), -(s * Q + s**2 * P), atol=1e-14)


def test_derivative_identity():
    rng = derive_rng(3, "didentity")
    for n in (1, 2, 5, 16):
        for c in uniform_ball(rng, n, 50):
            phi = MobiusMap(BallPoint(c))
            assert np.abs(deriv_at(phi, c) @ deriv0(phi) - np.eye(n)).max() <= 1e-9


def test_inverse_derivative_norm_formula():
    rng = derive_rng(4, "inv-deriv")
    for n in (1, 3):
        a = random_ball(rng, n, 1, 0.95)[0]
        w = random_directions(rng, n, 1)[0]
        direct = np.linalg.norm(np.linalg.solve(deriv0(MobiusMap(BallPoint(a))), w)) ** 2
        assert inv_deriv0_norm_sq(a, w) == pytest.approx(direct, rel=1e-10)


def test_projections():
    a, y = np.array([1.0, 1j]) * 0.5, np.array([0.2, 0.3])
    p, q = project_P(a, y), project_Q(a, y)
    assert np.allclose(p + q, y)
    assert abs(np.vdot(a, q)) < 1e-15
    assert np.allclose(project_P(np.zeros(2), y), 0)


def test_unitary_postcomposition():
    rng = derive_rng(5, "unit")
    u = random_unitary(rng, 3)
    a = BallPoint(random_ball(rng, 3, 1, 0.9)[0])
    y = random_ball(rng, 3, 1, 0.9)[0]
    phi, psi = MobiusMap(a), MobiusMap(a, u)
    assert np.allclose(psi(y), u @ phi(y))
    assert np.allclose(psi.preimage(psi(y)), y)
    with pytest.raises(ValueError):
        MobiusMap(a, np.ones((3, 3)))


def test_defect_matches_norm():
    phi = MobiusMap(BallPoint.of(0.6, 0.2j))
    y = np.array([0.3, -0.4])
    assert phi.defect(y) == pytest.approx(1 - np.linalg.norm(phi(y)) ** 2, rel=1e-12)


def test_schwarz_quotient_is_one_for_automorphisms():
    rng = derive_rng(6, "bc")
    for n in (1, 2, 5):
        a = random_ball(rng, n, 1, 0.95)[0]
        x, w = random_ball(rng, n, 200), random_directions(rng, n, 200)
        q = quotient_BC(MobiusMap(BallPoint(a)), x, w)
        assert np.allclose(q, 1.0, atol=1e-9)


def test_bc_parts_for_identity_like_map():
    phi = MobiusMap(BallPoint.zeros(2))
    x, w = np.array([0.5, 0.0]), np.array([0.0, 1.0])
    b, c = bc_parts(phi, x, w)
    assert b == pytest.approx(c) and c == pytest.approx(1 / np.sqrt(0.75))
    with pytest.raises(ValueError):
        quotient_BC(phi, x, np.zeros(2))


@pytest.mark.parametrize("r", [1e-156, 1e-320])
def test_tiny_centre_is_close_to_minus_identity(r):
    phi = MobiusMap(BallPoint.of(r * 1j, 0.0))
    y = np.array([0.1, 0.2])
    assert np.allclose(phi.jacobian(y), -np.eye(2), atol=1e-12)
    assert np.allclose(project_P(np.array([r, 0.0]), y), [0.1, 0.0], rtol=1e-15)

import math

import pytest

import mcflab


def test_constants():
    p = mcflab.derive_constants(4, 4)
    assert p.alpha == pytest.approx(-2.0)
    assert p.lambda_k == pytest.approx(2.5)
    assert p.sigma_k == pytest.approx(5 / 6)
    assert p.mu == pytest.approx(0.5)
    assert mcflab.admissible_for_some_a(p)
    assert not mcflab.admissible_for_some_a(mcflab.derive_constants(4, 2))


def test_errors_carry_code():
    with pytest.raises(mcflab.McfError) as info:
        mcflab.derive_constants(3, 4)
    assert info.value.args[1] == "DomainError"
    assert isinstance(info.value, ValueError)


def test_sphere_curvature():
    R, r = 1.3, 0.4
    q = math.sqrt(R * R - r * r)
    c = mcflab.curvature(5, r, q, -r / q, -R * R / q**3)
    assert c.H == pytest.approx(-9 / R, rel=1e-10)
    assert c.A2 == pytest.approx(9 / R**2, rel=1e-10)


def test_minimal_profile():
    mp = mcflab.integrate_profile(4, 1.0, 100.0)
    assert mp.Q[0] == 1.0
    assert all(x > 0 for x in mp.Q2)
    assert all(u > 0 for u in mp.u0())
    assert mp.alpha_fit == pytest.approx(-2.0, rel=0.05)


def test_bessel_and_propagation():
    z = 3.7
    closed = math.sqrt(2 / (math.pi * z)) * math.sinh(z)
    assert mcflab.bessel_I(0.5, z) == pytest.approx(closed, rel=1e-12)
    p = mcflab.derive_constants(4, 2)
    out = mcflab.propagate(p.mu, 1.0, lambda rho: rho ** (p.mu + 0.5), p.mu + 0.5, [0.5, 1.0, 4.0])
    for r, v in zip([0.5, 1.0, 4.0], out):
        assert v == pytest.approx(r ** (p.mu + 0.5), rel=1e-6)


def test_cylinder_flow():
    tr = mcflab.evolve("cylinder", 4, T=1.0, rmax=3.0, nodes=60, horizon=0.5)
    assert tr["stop_reason"] == "horizon"
    q = tr["snapshots"][-1]["Q"][0]
    assert q == pytest.approx(math.sqrt(6 * 0.5), rel=1e-5)


def test_supersolution():
    p = mcflab.derive_constants(4, 4)
    s = mcflab.supersolution(p, 1.0)
    assert s.C1 == pytest.approx(51.0)
    assert mcflab.supersolution_residual_at(s, 20.0, 0.5, 1.0) >= 0


def test_acceptance_criterion():
    res = mcflab.run_criterion(8)
    assert res["pass"], res["failures"]

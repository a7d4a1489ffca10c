import math

import pytest

from sturmjumps.oscillation import (
    AtJumpAmbiguity,
    PhaseError,
    count_negative,
    phase,
    start_point,
)
from sturmjumps.potential import Potential, Regularity
from sturmjumps.spectra_oracle import count_matrix


def test_constant_potential_phase_is_linear(v_one):
    res = phase(v_one, 2.5)
    assert res.theta_b == pytest.approx(2.5 * math.pi, rel=1e-12)
    assert res.count == 2
    assert res.theta_b > 0.0
    assert res.steps > 0


def test_exactly_at_jump_excludes_zero_eigenvalue(v_one):
    # theta(b) = 3*pi: the third zero sits at x = b, so N = 2
    res = phase(v_one, 3.0)
    assert res.theta_b == pytest.approx(3.0 * math.pi, rel=1e-12)
    assert res.count == 2


def test_scaled_constant_potential(v_four):
    res = phase(v_four, 2.0)
    assert res.theta_b == pytest.approx(4.0, rel=1e-12)
    assert count_negative(v_four, 2.0) == math.ceil(4.0 / math.pi) - 1 == 1


def test_no_negative_eigenvalues_below_threshold(v_one):
    assert count_negative(v_one, 0.5) == 0


def test_count_matches_matrix_oracle_linear(v_linear):
    assert count_negative(v_linear, 20.0) == count_matrix(v_linear, 20.0, 20000)


def test_count_matches_matrix_oracle_sine(v_sin):
    assert count_negative(v_sin, 40.0) == count_matrix(v_sin, 40.0, 20000)


def test_phase_monotone_in_lambda(v_sin):
    thetas = [phase(v_sin, lam).theta_b for lam in (1.0, 2.0, 5.0, 17.0, 60.0)]
    assert all(b > a for a, b in zip(thetas, thetas[1:]))


def test_tolerance_convergence(v_sin):
    rtol = 1e-8
    t1 = phase(v_sin, 35.0, rtol=rtol).theta_b
    t2 = phase(v_sin, 35.0, rtol=rtol / 2.0).theta_b
    assert abs(t1 - t2) < 10.0 * rtol * t1


def test_at_jump_ambiguity_raised(v_one):
    with pytest.raises(AtJumpAmbiguity) as err:
        count_negative(v_one, 3.0)
    assert err.value.theta_b == pytest.approx(3.0 * math.pi, rel=1e-12)


def test_invalid_arguments(v_one):
    with pytest.raises(ValueError):
        phase(v_one, -1.0)
    with pytest.raises(ValueError):
        phase(v_one, 1.0, rtol=0.0)


def test_negative_potential_fails_cleanly():
    p = Potential.from_formula("sin(x)", 0.0, 6.0)
    with pytest.raises(PhaseError, match="fell"):
        phase(p, 5.0)


# -- singular endpoint handling ----------------------------------------------


def test_start_point_regular_endpoint_needs_no_offset():
    p = Potential.from_formula(
        "1+x", 0.0, 1.0, regularity=Regularity.CONJECTURE, gamma_a=0.0, gamma_b=0.0
    )
    assert start_point(p, 10.0) == 0.0
    assert start_point(p, 10.0, end="b") == 1.0


def test_start_point_offset_scale(v_linear):
    x0 = start_point(v_linear, 100.0, delta_tol=1e-10)
    assert 0.0 < x0 <= 1e-4
    # the offset criterion itself: lambda^2 V(delta) delta^2 <= delta_tol
    assert 100.0**2 * x0 * x0 * x0 <= 1e-10 * 1.0001


def test_start_point_only_for_conjecture_class(v_one):
    with pytest.raises(ValueError):
        start_point(v_one, 10.0)


def test_offset_self_convergence_linear(v_linear):
    # shrinking the offset tolerance (hence the offset) leaves theta(b) put
    t1 = phase(v_linear, 100.0, rtol=1e-12, delta_tol=1e-10).theta_b
    t2 = phase(v_linear, 100.0, rtol=1e-12, delta_tol=1.25e-11).theta_b
    assert abs(t1 - t2) < 1e-8


def test_offset_self_convergence_rational(v_rational):
    # the right-endpoint correction is exact at jumps and count-accurate
    # elsewhere, so the invariant across offset sizes is the count
    c1 = count_negative(v_rational, 50.0, rtol=1e-11, delta_tol=1e-10)
    c2 = count_negative(v_rational, 50.0, rtol=1e-11, delta_tol=1.25e-11)
    assert c1 == c2


def test_offset_self_convergence_at_jump(v_rational):
    from sturmjumps.jumps import find_jump

    r1 = find_jump(v_rational, 12, delta_tol=1e-10)
    r2 = find_jump(v_rational, 12, delta_tol=1.25e-11)
    assert r1.lambda_n == pytest.approx(r2.lambda_n, rel=1e-7)


def test_randomized_oracle_equivalence(v_sin):
    import random

    rng = random.Random(7)
    ok = 0
    for _ in range(10):
        lam = rng.uniform(5.0, 30.0)
        res = phase(v_sin, lam, rtol=1e-10)
        t = res.theta_b / math.pi
        if abs(t - round(t)) < 0.05:
            continue  # too close to a jump for the coarse mesh
        assert count_negative(v_sin, lam) == count_matrix(v_sin, lam, 4000)
        ok += 1
    assert ok >= 7

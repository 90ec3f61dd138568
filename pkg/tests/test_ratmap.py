"""Construction and sphere evaluation of the iteration maps."""

import math

import numpy as np
import pytest

from halleydyn.errors import DegenerateMap, Indeterminate, NotFixed
from halleydyn.polycore import AffineMap, Polynomial, find_roots
from halleydyn.ratmap import (
    INF,
    RationalMap,
    chebyshev_halley_of,
    conjugate_rotation,
    degree_census,
    eval_sphere,
    fixed_points,
    free_critical_points,
    halley_of,
    is_infinity,
    konig_of,
    local_degree_at,
    make_reduced,
    multiplier_at,
    poles,
    scaling_check,
)

CUBIC_ODD = Polynomial.make([0, -1, 0, 1])       # z(z^2-1)
QUARTIC = Polynomial.make([0, -1, 0, 0, 1])      # z(z^3-1)


def normalized(c):
    a = np.array(c, dtype=complex)
    return a / a[-1]


def test_halley_quadratic_closed_form():
    h = halley_of(Polynomial.make([-1, 0, 1]))
    # z(z^2+3) / (3z^2+1)
    assert np.allclose(normalized(h.num.coeffs), normalized([0, 3, 0, 1]))
    assert np.allclose(normalized(h.den.coeffs), normalized([1, 0, 3]))
    assert abs(h(2.0) - 14.0 / 13.0) < 1e-14


def test_halley_degenerate_single_root():
    with pytest.raises(DegenerateMap):
        halley_of(Polynomial.make([-1, 3, -3, 1]))  # (z-1)^3


def test_konig_n3_equals_halley():
    for p in (CUBIC_ODD, Polynomial.make([2, 0, 1, 1])):
        h = halley_of(p)
        k = konig_of(p, 3)
        assert np.allclose(normalized(k.num.coeffs), normalized(h.num.coeffs))
        assert np.allclose(normalized(k.den.coeffs), normalized(h.den.coeffs))


def test_konig_n2_is_newton():
    # Newton for z^2-1 is (z^2+1)/(2z)
    k = konig_of(Polynomial.make([-1, 0, 1]), 2)
    assert np.allclose(normalized(k.num.coeffs), normalized([1, 0, 1]))
    assert np.allclose(normalized(k.den.coeffs), normalized([0, 2]))


def test_chebyshev_sigma_zero_value():
    g = chebyshev_halley_of(Polynomial.make([-1, 0, 1]), 0.0)
    assert abs(g(2.0) - 71.0 / 64.0) < 1e-12


def test_chebyshev_half_equals_halley_pointwise():
    rng = np.random.default_rng(2)
    for p in (CUBIC_ODD, QUARTIC):
        h = halley_of(p)
        g = chebyshev_halley_of(p, 0.5)
        for _ in range(40):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            hv = eval_sphere(h, z)
            gv = eval_sphere(g, z)
            if is_infinity(hv) or is_infinity(gv) or abs(hv) > 1e4:
                continue
            assert abs(gv - hv) <= 1e-9 * max(1.0, abs(hv))


def test_degree_census_matches_construction():
    rng = np.random.default_rng(23)
    for _ in range(20):
        roots = []
        for _ in range(60):
            cand = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            if all(abs(cand - r) > 0.7 for r in roots):
                roots.append(cand)
            if len(roots) == 3:
                break
        mults = [int(rng.integers(1, 3)) for _ in roots]
        if len(roots) < 2 or sum(mults) < 2:
            continue
        p = Polynomial.from_roots([r for r, m in zip(roots, mults) for _ in range(m)])
        census = degree_census(p)
        assert halley_of(p).degree == census.predicted_degree


def test_fixed_point_set_identity():
    # roots, non-root critical points, and INF; nothing else
    p = CUBIC_ODD
    h = halley_of(p)
    expected = [-1, 0, 1, 1 / math.sqrt(3), -1 / math.sqrt(3)]
    got = fixed_points(h)
    finite = [z for z in got if not is_infinity(z)]
    assert any(is_infinity(z) for z in got)
    assert len(finite) == len(expected)
    for e in expected:
        assert min(abs(z - e) for z in finite) < 1e-9


def test_multiplier_predictions():
    # multiple root k: (k-1)/(k+1); non-root critical of multiplicity l:
    # 1 + 2/l; infinity: (d+1)/(d-1) for d = deg p
    p = Polynomial.make([0, 1, -2, 1])  # z(z-1)^2
    h = halley_of(p)
    assert abs(multiplier_at(h, 0.0)) < 1e-12
    assert abs(multiplier_at(h, 1.0) - 1.0 / 3.0) < 1e-9
    assert abs(multiplier_at(h, 1.0 / 3.0) - 3.0) < 1e-9
    assert abs(multiplier_at(h, INF) - 2.0) < 1e-6


def test_multiplier_rejects_non_fixed():
    h = halley_of(Polynomial.make([-1, 0, 1]))
    with pytest.raises(NotFixed):
        multiplier_at(h, 0.5)


def test_extraneous_weighted_mean_two_roots():
    # roots a (mult k) and b (mult m) give one extraneous fixed point at
    # (a*m + b*k) / (k + m)
    a, b, k, m = 2.0, -1.0, 3, 2
    p = Polynomial.from_roots([a] * k + [b] * m)
    h = halley_of(p)
    target = (a * m + b * k) / (k + m)
    finite = [z for z in fixed_points(h) if not is_infinity(z)]
    extr = [z for z in finite if min(abs(z - a), abs(z - b)) > 1e-6]
    assert len(extr) == 1
    assert abs(extr[0] - target) < 1e-9


def test_local_degrees_on_sphere():
    h = halley_of(CUBIC_ODD)
    assert local_degree_at(h, 0.0) == 3
    assert local_degree_at(h, 1.0) == 3
    assert local_degree_at(h, 1 / math.sqrt(3)) == 1
    assert local_degree_at(h, INF) == 1


def test_real_coefficients_commute_with_conjugation():
    rng = np.random.default_rng(31)
    p = Polynomial.make([3, -1, 0, 2, 1])
    h = halley_of(p)
    for _ in range(30):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        a = eval_sphere(h, z.conjugate())
        b = eval_sphere(h, z)
        if is_infinity(a) or is_infinity(b):
            continue
        assert abs(a - b.conjugate()) <= 1e-10 * max(1.0, abs(b))


@pytest.mark.parametrize("n", [3, 7])
def test_rotation_equivariance(n):
    p = Polynomial.make([0, -1] + [0] * (n - 1) + [1])  # z(z^n - 1)
    h = halley_of(p)
    lam = complex(math.cos(2 * math.pi / n), math.sin(2 * math.pi / n))
    rng = np.random.default_rng(n)
    for _ in range(25):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        a = eval_sphere(h, lam * z)
        b = eval_sphere(h, z)
        if is_infinity(a) or is_infinity(b):
            continue
        assert abs(a - lam * b) <= 1e-9 * max(1.0, abs(b))


def test_conjugate_rotation_fixes_symmetric_map():
    n = 3
    p = Polynomial.make([0, -1] + [0] * (n - 1) + [1])
    h = halley_of(p)
    lam = complex(math.cos(2 * math.pi / n), math.sin(2 * math.pi / n))
    g = conjugate_rotation(h, lam)
    assert np.allclose(normalized(g.num.coeffs), normalized(h.num.coeffs))
    assert np.allclose(normalized(g.den.coeffs), normalized(h.den.coeffs))


def test_scaling_covariance():
    p = Polynomial.make([-1, 0, 1])
    assert scaling_check(p, AffineMap(2.0), 0.25)
    assert scaling_check(CUBIC_ODD, AffineMap(1j, 0.5), 2.0 - 1j)


def test_eval_sphere_at_infinity_and_pole():
    h = halley_of(Polynomial.make([-1, 0, 1]))
    assert is_infinity(eval_sphere(h, INF))  # deg num > deg den
    # den 3z^2+1 vanishes at +- i/sqrt(3); numerator does not
    pole = 1j / math.sqrt(3.0)
    assert is_infinity(eval_sphere(h, pole))


def test_eval_sphere_huge_argument():
    h = halley_of(Polynomial.make([-1, 0, 1]))
    z = 1e200
    v = eval_sphere(h, z)
    # H(z) ~ z/3 at large |z| for the quadratic map
    assert not is_infinity(v)
    assert abs(v / z - 1.0 / 3.0) < 1e-6


def test_eval_sphere_unreduced_raises():
    shared = Polynomial.make([-1, 1])  # z - 1
    r = RationalMap(Polynomial.make([0, 1]) * shared, shared, reduced=False)
    with pytest.raises(Indeterminate):
        eval_sphere(r, 1.0)


def test_make_reduced_cancels_shared_factor():
    num = Polynomial.make([0, 1]) * Polynomial.make([-1, 1])
    den = Polynomial.make([-1, 1]) * Polynomial.make([2, 1])
    r = make_reduced(num, den)
    assert r.num.degree == 1 and r.den.degree == 1
    assert abs(r(0.0)) < 1e-14
    assert abs(r(1.0) - 1.0 / 3.0) < 1e-12


def test_poles_of_octic():
    p = Polynomial.make([0, -1] + [0] * 6 + [1])  # z(z^7-1)
    h = halley_of(p)
    real_poles = [c.location for c in poles(h)
                  if abs(c.location.imag) < 1e-9]
    assert len(real_poles) == 1
    assert abs(real_poles[0].real + (1.0 / 6.0) ** (1.0 / 7.0)) < 1e-9


def test_free_critical_points_match_known_pair():
    h = halley_of(CUBIC_ODD)
    roots = find_roots(CUBIC_ODD)
    free = free_critical_points(h, roots)
    locs = sorted((c.location for c in free), key=lambda z: z.imag)
    assert len(locs) == 2
    s = 1.0 / math.sqrt(6.0)
    assert abs(locs[0] + 1j * s) < 1e-8
    assert abs(locs[1] - 1j * s) < 1e-8

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qeclab.numerics import ConsistencyError, lu_det, min_eigenvalue, psd_check
from qeclab.matrices import (
    LINES,
    build_a,
    det_a,
    det_poly,
    det_values,
    falsify_infinite,
    infinite_psd,
    is_psd_a,
    psd_threshold_t,
    real_roots_check,
    threshold_by_bisection,
)
from qeclab.polynomials import _t_of_angle, s_poly, t_threshold, w_poly
from qeclab.verify import random_rational

F = Fraction
SCALED_EXAMPLE = [[1, 2, 2, 2, 2], [2, 5, 6, 6, 6], [2, 6, 9, 10, 10], [2, 6, 10, 13, 14], [2, 6, 10, 14, 17]]


def test_build_examples():
    assert build_a(1, 0, 0).entries.tolist() == [[1]]
    assert build_a(2, 0, 0).entries.tolist() == [[1, 1], [1, 2]]
    m = build_a(5, F(-1, 2), F(-1, 4))
    assert m.exact
    assert [[4 * x for x in row] for row in m.entries.tolist()] == SCALED_EXAMPLE


def test_build_float_and_errors():
    m = build_a(3, 0.5, -0.25)
    assert not m.exact
    assert m.to_float()[2, 2] == pytest.approx(3.25)
    with pytest.raises(ValueError):
        build_a(math.inf, 0, 0)
    with pytest.raises(ValueError):
        build_a(0, 0, 0)


def test_det_examples():
    assert det_a(2, 0, 0) == 1
    assert det_a(2, F(-1, 4), F(-1, 4)) == F(3, 16)
    assert det_a(2, 0, F(-1, 4)) == F(5, 16)
    with pytest.raises(ValueError):
        det_a(math.inf, 0, 0)


def test_det_on_diagonal_line_is_w():
    for n in range(1, 12):
        for t in (F(-1, 4), F(2, 3), F(-7, 5)):
            assert det_a(n, t, t) == w_poly(n)(t)


def test_det_exact_vs_lu(rng):
    for n in range(1, 9):
        for _ in range(15):
            s, t = random_rational(rng, -3, 3), random_rational(rng, -3, 3)
            assert lu_det(build_a(n, s, t)) == det_a(n, s, t)


def test_det_float_vs_lu(rng):
    for n in range(1, 61, 3):
        for _ in range(10):
            s, t = rng.uniform(-3, 3, size=2)
            ref = lu_det(build_a(n, float(s), float(t)))
            assert abs(det_a(n, float(s), float(t)) - ref) <= 1e-8 * max(abs(ref), 1e-300)


def test_det_values_broadcasts():
    s = np.array([0.0, 1.0])
    t = np.array([[0.0], [0.5]])
    out = det_values(3, s, t)
    assert out.shape == (2, 2)
    assert out[1, 1] == pytest.approx(float(det_poly(1, 3)(F(1, 2))))


@pytest.mark.parametrize(
    "n, s, t, expected",
    [
        (1, 0, F(-1, 2), True),
        (3, _t_of_angle(math.pi / 4), _t_of_angle(math.pi / 4), True),
        (2, 0, -0.45, False),
    ],
)
def test_is_psd_examples(n, s, t, expected):
    assert is_psd_a(n, s, t) is expected
    assert is_psd_a(n, s, t, method="eigen") is expected
    assert is_psd_a(n, s, t, method="both") is expected


def test_is_psd_rejects_bad_input():
    with pytest.raises(ValueError):
        is_psd_a(math.inf, 0, 0)
    with pytest.raises(ValueError):
        is_psd_a(2, 0, 0, method="magic")


def test_criterion_false_at_or_below_threshold():
    # below t_3 = -1/3, W_2 < 0, so a very negative s makes det positive anyway
    n, t = 3, F(-1, 2)
    assert w_poly(2)(t) < 0
    assert det_poly(-10, n)(t) > 0
    assert not is_psd_a(n, -10, t)
    assert not is_psd_a(n, -10.0, float(t), method="eigen")


def test_criterion_vs_eigen_outside_band(rng):
    checked = 0
    for _ in range(600):
        n = int(rng.integers(1, 25))
        s, t = rng.uniform(-2, 2), rng.uniform(-0.7, 1)
        lam = min_eigenvalue(build_a(n, s, t))
        if abs(lam) <= 1e-8:
            continue
        assert is_psd_a(n, s, t, method="criterion") == (lam > 0)
        assert is_psd_a(n, s, t, method="both") == (lam > 0)
        checked += 1
    assert checked > 550


def test_both_raises_on_disagreement(monkeypatch):
    import qeclab.matrices as mm

    monkeypatch.setattr(mm, "_criterion", lambda *a: False)
    with pytest.raises(ConsistencyError):
        is_psd_a(3, 1, 1, method="both")


fr = st.fractions(min_value=-2, max_value=2, max_denominator=30)


@given(st.integers(1, 10), st.integers(0, 9), fr, fr, st.fractions(0, 1, max_denominator=30),
       st.fractions(0, 1, max_denominator=30))
def test_monotone_in_s_t_and_n(n1, dn, s1, t1, ds, dt):
    assume(is_psd_a(n1, s1, t1))
    n2 = max(1, n1 - dn)
    assert is_psd_a(n2, s1 + ds, t1 + dt)


@pytest.mark.parametrize(
    "line, n, expected",
    [("s=t", 1, -0.5), ("s=-1/2", 1, -0.5), ("s=2t", 1, -1 / 3)],
)
def test_threshold_examples(line, n, expected):
    assert psd_threshold_t(n, line) == pytest.approx(expected, abs=1e-15)


def test_threshold_unknown_line():
    with pytest.raises(ValueError):
        psd_threshold_t(3, "s=3t")


_MEMBER = {"s=t": (2, 1), "s=-1/2": (1, F(1, 2)), "s=0": (1, 1), "s=2t": (3, 1)}


@pytest.mark.parametrize("line", list(LINES))
def test_line_determinant_is_special_member(line):
    # det A_n(s(t), t) as a polynomial in t is S_n(a, b; t) for the line's (a, b)
    s_of_t, _ = LINES[line]
    for n in range(1, 8):
        for t in (F(-2, 7), F(1, 3), F(-5, 2)):
            assert det_a(n, s_of_t(t), t) == s_poly(*_MEMBER[line], n)(t)


@pytest.mark.parametrize("line", list(LINES))
def test_threshold_is_largest_root_on_line(line):
    for n in range(1, 33):
        p = s_poly(*_MEMBER[line], n)
        bound = F(psd_threshold_t(n, line))
        delta = F(1, 10**11)
        # exact sign change across the bound, and positive all the way up
        assert p(bound - delta) < 0 < p(bound + delta)
        assert all(p(bound + k * F(1, 8)) > 0 for k in range(1, 40))
        if n >= 2:
            assert bound > F(t_threshold(n))
        if 2 <= n <= 10:
            roots = np.sort(np.roots([float(c) for c in reversed(p.coeffs)]).real)
            assert roots[-2] < t_threshold(n)


@pytest.mark.parametrize("line", list(LINES))
def test_threshold_flip_and_bisection(line):
    s_of_t, _ = LINES[line]
    for n in (1, 2, 3, 5, 8, 13):
        bound = psd_threshold_t(n, line)
        lo, hi = bound - 5e-8, bound + 5e-8
        assert is_psd_a(n, s_of_t(lo), lo) is False
        assert is_psd_a(n, s_of_t(hi), hi) is True
        assert threshold_by_bisection(n, line) == pytest.approx(bound, abs=1e-9)


@pytest.mark.parametrize(
    "s, t, expected",
    [(F(-1, 2), F(-1, 4), True), (-0.51, -0.25, False), (0, -0.26, False), (-1, 0, True), (-2, 0, False)],
)
def test_infinite_examples(s, t, expected):
    assert infinite_psd(s, t) is expected


def test_infinite_region_inside_and_outside(rng):
    inside = outside = 0
    while inside < 40 or outside < 40:
        s, t = rng.uniform(-2, 2), rng.uniform(-0.6, 1)
        if infinite_psd(s, t) and inside < 40:
            if 1 + 4 * t > 0 and 1 + 2 * s + math.sqrt(1 + 4 * t) > 0:
                assert all(is_psd_a(n, s, t, method="eigen") for n in (1, 2, 7, 50, 200))
                inside += 1
        elif not infinite_psd(s + 1e-3, t + 1e-3) and outside < 40:
            witness = falsify_infinite(s, t)
            assert witness is not None
            assert witness[0] <= 500
            outside += 1


def test_falsify_returns_none_inside():
    assert falsify_infinite(0.0, 0.0, n_max=100) is None
    assert falsify_infinite(-0.5, -0.25, n_max=100) is None


def test_scaled_example_is_psd():
    assert psd_check(build_a(5, F(-1, 2), F(-1, 4)))


@pytest.mark.parametrize(
    "s, n, roots",
    [(0, 1, [-1]), (F(-1, 2), 1, [-0.5]), (0, 2, [(-3 - math.sqrt(5)) / 2, (-3 + math.sqrt(5)) / 2])],
)
def test_real_roots_examples(s, n, roots):
    assert real_roots_check(s, n) == pytest.approx(roots, abs=1e-12)


def test_real_roots_random(rng):
    for _ in range(20):
        s = random_rational(rng, -3, 3)
        n = int(rng.integers(1, 20))
        roots = real_roots_check(s, n)
        assert len(roots) == n
        assert all(isinstance(r, float) for r in roots)

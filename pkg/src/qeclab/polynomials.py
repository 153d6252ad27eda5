"""The polynomial family S_n(a, b; t).

S_0 = 1, S_1 = a t + b and S_n = (1 + 2t) S_{n-1} - t^2 S_{n-2}. The special
member W_n = S_n(2, 1; .) has binomial coefficients C(2n - k + 1, k) (OEIS
A172431).
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from math import comb

import numpy as np

from .numerics import RationalPoly, as_rational

__all__ = [
    "SPECIAL_CASES",
    "s_poly",
    "s_poly_binomial",
    "s_eval",
    "s_eval_closed",
    "w_poly",
    "w_eval_closed",
    "special_leading",
    "s_roots_special",
    "t_threshold",
    "check_t2n_identity",
    "t2n_defect",
    "sign_pattern",
]

# (a, b) -> angle of the k-th root, k = 1..n; root = -1 / (2 + 2 cos(angle))
SPECIAL_CASES = {
    (Fraction(2), Fraction(1)): lambda k, n: k * math.pi / (n + 1),
    (Fraction(1), Fraction(1, 2)): lambda k, n: (2 * k - 1) * math.pi / (2 * n),
    (Fraction(1), Fraction(1)): lambda k, n: 2 * k * math.pi / (2 * n + 1),
    (Fraction(3), Fraction(1)): lambda k, n: (2 * k - 1) * math.pi / (2 * n + 1),
}


def _t_of_angle(theta: float) -> float:
    # 2 + 2cos(x) == 4cos^2(x/2); the right side keeps precision near x = pi
    return -1.0 / (4.0 * math.cos(theta / 2.0) ** 2)


def s_poly(a, b, n: int) -> RationalPoly:
    """Exact coefficients of S_n(a, b; t) from the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = as_rational(a), as_rational(b)
    prev: list[Fraction] = [Fraction(1)]
    if n == 0:
        return RationalPoly(prev)
    cur: list[Fraction] = [b, a]
    for _ in range(2, n + 1):
        nxt = [Fraction(0)] * (len(cur) + 2)
        for k, c in enumerate(cur):
            nxt[k] += c
            nxt[k + 1] += 2 * c
        for k, c in enumerate(prev):
            nxt[k + 2] -= c
        prev, cur = cur, nxt
    return RationalPoly(cur)


def s_poly_binomial(a, b, n: int) -> RationalPoly:
    """S_n(a, b; t) from its binomial-sum representation (n >= 1)."""
    if n < 1:
        raise ValueError("the binomial-sum form needs n >= 1")
    a, b = as_rational(a), as_rational(b)
    first = RationalPoly(comb(2 * n - k - 1, k) for k in range(n))
    second = RationalPoly([0, 0] + [comb(2 * n - k - 3, k) for k in range(n - 1)])
    return RationalPoly([b, a]) * first - second


def s_eval(a, b, n: int, t):
    """Float evaluation of S_n(a, b; t) by the recurrence; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    a, b = float(a), float(b)
    prev = np.ones_like(t)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = a * t + b
    p, q = 1.0 + 2.0 * t, t * t
    for _ in range(2, n + 1):
        prev, cur = cur, p * cur - q * prev
    return cur if cur.ndim else float(cur)


def s_eval_closed(a, b, n: int, t: float) -> float:
    """S_n(a, b; t) from the square-root closed form.

    For 1 + 4t < 0 the square root is imaginary and the two bracketed terms
    are complex conjugates; the real part is returned. Within 1e-13 of
    t = -1/4 the limiting value (4nb - na - n + 1) / 4^n is used.
    """
    a, b, t = float(a), float(b), float(t)
    if abs(t + 0.25) <= 1e-13:
        return (4 * n * b - n * a - n + 1) / 4.0 ** n
    r = cmath.sqrt(1 + 4 * t)
    c = 2 * b - 1 + 2 * (a - 1) * t
    v_plus, v_minus = 1 + 2 * t + r, 1 + 2 * t - r
    value = ((c + r) * v_plus ** n - (c - r) * v_minus ** n) / (2 ** (n + 1) * r)
    return value.real


def w_poly(n: int) -> RationalPoly:
    """W_n(t) = sum_k C(2n - k + 1, k) t^k."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return RationalPoly(comb(2 * n - k + 1, k) for k in range(n + 1))


def w_eval_closed(n: int, t: float) -> float:
    t = float(t)
    if abs(t + 0.25) <= 1e-13:
        return (n + 1) / 4.0 ** n
    r = cmath.sqrt(1 + 4 * t)
    value = ((1 + 2 * t + r) ** (n + 1) - (1 + 2 * t - r) ** (n + 1)) / (2 ** (n + 1) * r)
    return value.real


def _case_key(case) -> tuple[Fraction, Fraction]:
    key = (as_rational(case[0]), as_rational(case[1]))
    if key not in SPECIAL_CASES:
        raise ValueError(f"no closed-form roots known for (a, b) = {case!r}")
    return key


def special_leading(case, n: int) -> int:
    """Leading coefficient a n - n + 1 of S_n for one of the special cases."""
    a, _ = _case_key(case)
    lead = a * n - n + 1
    return int(lead)


def s_roots_special(case, n: int) -> list[float]:
    """The n real roots of S_n(a, b; .) for (a, b) in SPECIAL_CASES, ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    angle = SPECIAL_CASES[_case_key(case)]
    return sorted(_t_of_angle(angle(k, n)) for k in range(1, n + 1))


def t_threshold(n: int) -> float:
    """-inf for n = 1, else -1 / (2 + 2 cos(pi / n))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return -math.inf
    return _t_of_angle(math.pi / n)


def t2n_defect(a, b, n: int) -> RationalPoly:
    """S_n(2,1) S_n(a,b) - S_{n-1}(2,1) S_{n+1}(a,b) - t^{2n}; zero iff the identity holds."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = s_poly(2, 1, n) * s_poly(a, b, n) - s_poly(2, 1, n - 1) * s_poly(a, b, n + 1)
    return lhs - RationalPoly.monomial(2 * n)


def check_t2n_identity(a, b, n: int) -> bool:
    return t2n_defect(a, b, n).is_zero()


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sign_pattern(n: int, t: float, guard: float = 1e-12) -> tuple[int, int]:
    """Signs of (W_{n-1}(t), W_n(t)), evaluated exactly at the float ``t``.

    Raises ValueError when ``t`` is within ``guard`` of a root of either
    polynomial, where the sign is not meaningful.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    near = [r for m in (n - 1, n) if m >= 1 for r in s_roots_special((2, 1), m)]
    if any(abs(t - r) <= guard for r in near):
        raise ValueError(f"t={t!r} is within {guard} of a threshold; sign is ambiguous")
    x = as_rational(t)
    return _sign(w_poly(n - 1)(x)), _sign(w_poly(n)(x))

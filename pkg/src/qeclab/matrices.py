"""The matrix family A_n(s, t) = [min(i, j) + s + t * delta_ij], i, j = 1..n.

"PSD" below means all eigenvalues nonnegative. det A_n(s, t) = S_n(1, s + 1; t),
and for finite n the matrix is PSD iff t > t_n and that determinant is >= 0.
For n = infinity it is PSD iff 1 + 4t >= 0 and 1 + 2s + sqrt(1 + 4t) >= 0.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .numerics import (
    ConsistencyError,
    RationalPoly,
    SymMatrix,
    as_rational,
    bisect_predicate,
    default_psd_tol,
    min_eigenvalue,
)
from .polynomials import _t_of_angle, s_poly, t_threshold

__all__ = [
    "LINES",
    "build_a",
    "det_poly",
    "det_a",
    "det_values",
    "boundary_tol",
    "is_psd_a",
    "psd_threshold_t",
    "threshold_by_bisection",
    "infinite_psd",
    "falsify_infinite",
    "real_roots_check",
]


def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational, np.integer)) and not isinstance(x, bool)


def build_a(n: int, s, t) -> SymMatrix:
    """A_n(s, t); exact when both s and t are int/Fraction."""
    if n == math.inf:
        raise ValueError("A_inf cannot be materialised; use infinite_psd")
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    n = int(n)
    idx = np.arange(1, n + 1)
    mins = np.minimum.outer(idx, idx)
    if _is_exact(s) and _is_exact(t):
        s, t = as_rational(s), as_rational(t)
        rows = [[Fraction(int(mins[i, j])) + s + (t if i == j else 0) for j in range(n)] for i in range(n)]
        return SymMatrix(rows, exact=True)
    return SymMatrix(mins + float(s) + float(t) * np.eye(n), exact=False)


def det_poly(s, n: int) -> RationalPoly:
    """det A_n(s, t) as an exact polynomial in t, i.e. S_n(1, s + 1; t)."""
    return s_poly(1, as_rational(s) + 1, n)


def det_a(n: int, s, t):
    """det A_n(s, t) = S_n(1, s + 1; t).

    Exact Fraction for rational (s, t); otherwise the float three-term recurrence.
    """
    if n == math.inf:
        raise ValueError("the infinite matrix has no determinant")
    if _is_exact(s) and _is_exact(t):
        return det_poly(s, n)(as_rational(t))
    return float(det_values(n, s, t))


def det_values(n: int, s, t):
    """Vectorised float det A_n(s, t) via the three-term recurrence (broadcasts s, t)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    prev = np.ones(np.broadcast(s, t).shape)
    cur = t + s + 1.0
    if n == 1:
        return cur
    p, q = 1.0 + 2.0 * t, t * t
    for _ in range(2, n + 1):
        prev, cur = cur, p * cur - q * prev
    return cur


def boundary_tol(s, t) -> float:
    return 1e-12 * max(1.0, abs(float(s)), abs(float(t)))


def _criterion(n: int, s, t, tol) -> bool:
    # lambda_min(A) >= -tol  <=>  A + tol*I = A_n(s, t + tol) is PSD
    shifted = as_rational(t) + as_rational(tol)
    if n > 1 and shifted <= as_rational(t_threshold(n)):
        return False
    return det_poly(s, n)(shifted) >= 0


def is_psd_a(n: int, s, t, method: str = "criterion", tol: float | None = None) -> bool:
    """Whether A_n(s, t) is PSD.

    ``criterion`` decides t + tol > t_n and det A_n(s, t + tol) >= 0 in exact
    arithmetic, which is equivalent to lambda_min >= -tol. ``eigen`` runs
    ``psd_check`` on the materialised matrix. ``both`` runs the two and raises
    ConsistencyError if they disagree while lambda_min is outside the eigen
    tolerance band; inside the band the criterion verdict is returned.
    """
    if n == math.inf:
        raise ValueError("use infinite_psd for n = inf")
    if method == "criterion":
        return _criterion(n, s, t, boundary_tol(s, t) if tol is None else tol)
    if method == "eigen":
        m = build_a(n, s, t)
        band = default_psd_tol(m) if tol is None else tol
        return min_eigenvalue(m) >= -band
    if method == "both":
        crit = _criterion(n, s, t, boundary_tol(s, t))
        m = build_a(n, s, t)
        band = default_psd_tol(m) if tol is None else tol
        lam = min_eigenvalue(m)
        if abs(lam) > band and crit != (lam > 0):
            raise ConsistencyError(
                f"PSD verdicts disagree for A_{n}({s}, {t}): criterion={crit}, lambda_min={lam:.3e}"
            )
        return crit
    raise ValueError(f"unknown method {method!r}")


# line name -> (s as a function of t, angle giving the threshold for size n)
LINES = {
    "s=t": (lambda t: t, lambda n: math.pi / (n + 1)),
    "s=-1/2": (lambda t: -0.5 if isinstance(t, float) else Fraction(-1, 2), lambda n: math.pi / (2 * n)),
    "s=0": (lambda t: 0.0 if isinstance(t, float) else Fraction(0), lambda n: 2 * math.pi / (2 * n + 1)),
    "s=2t": (lambda t: 2 * t, lambda n: math.pi / (2 * n + 1)),
}


def _line(line: str):
    try:
        return LINES[line]
    except KeyError:
        raise ValueError(f"unknown line {line!r}; expected one of {sorted(LINES)}") from None


def psd_threshold_t(n: int, line: str) -> float:
    """Smallest t with A_n(s(t), t) PSD along one of the four lines, closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _, angle = _line(line)
    return _t_of_angle(angle(n))


def threshold_by_bisection(n: int, line: str, method: str = "eigen", tol: float = 1e-12,
                           psd_tol: float | None = 0.0, bracket=(-2.0, 0.0)) -> float:
    """Locate the PSD threshold along a line by bisection on is_psd_a."""
    s_of_t, _ = _line(line)
    return bisect_predicate(
        lambda t: is_psd_a(n, s_of_t(t), t, method=method, tol=psd_tol), *bracket, tol=tol
    )


def infinite_psd(s, t) -> bool:
    """1 + 4t >= 0 and 1 + 2s + sqrt(1 + 4t) >= 0, decided exactly."""
    s, t = as_rational(s), as_rational(t)
    disc = 1 + 4 * t
    if disc < 0:
        return False
    c = 1 + 2 * s
    # c + sqrt(disc) >= 0  <=>  c >= 0 or c^2 <= disc
    return c >= 0 or c * c <= disc


_LADDER = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384)


def falsify_infinite(s: float, t: float, n_max: int = 500, rel: float = 1e-10):
    """Search for a finite witness that A_inf(s, t) is not PSD.

    Returns ``(n, lambda_min)`` for the first n on an escalating ladder with
    lambda_min(A_n) < -rel * max(1, max|entry|), or None if none up to n_max.
    """
    for n in [k for k in _LADDER if k < n_max] + [n_max]:
        m = build_a(n, float(s), float(t))
        lam = min_eigenvalue(m)
        if lam < -rel * max(1.0, m.max_abs()):
            return n, lam
    return None


def real_roots_check(s, n: int, rel: float = 1e-8) -> list[float]:
    """Roots of t -> det A_n(s, t), obtained as minus the eigenvalues of A_n(s, 0).

    Each root is checked against the exact polynomial: |p(r)| <= rel * sum|c_k||r|^k.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = np.linalg.eigvalsh(build_a(n, float(as_rational(s)), 0.0).to_float())
    roots = sorted(float(-m) for m in mu)
    p = det_poly(s, n)
    for r in roots:
        if abs(float(p(as_rational(r)))) > rel * p.magnitude(r):
            raise ConsistencyError(f"t={r!r} is not a root of det A_{n}({s}, t)")
    return roots

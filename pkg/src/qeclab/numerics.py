"""Shared numerical kernels: symmetric matrices, eigensolvers, determinants,
PSD tests, root bracketing and exact rational polynomials.

Rationals are ``fractions.Fraction``; everything exact in this package is built
on top of it.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "ConvergenceError",
    "BracketError",
    "ConsistencyError",
    "SymMatrix",
    "RationalPoly",
    "as_rational",
    "jacobi_eigen",
    "sym_eigen",
    "min_eigenvalue",
    "lu_det",
    "default_psd_tol",
    "psd_check",
    "find_root",
    "bisect_predicate",
]


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration cap."""


class BracketError(ValueError):
    """A root bracket does not enclose a sign change."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def as_rational(x) -> Fraction:
    """Exact conversion; floats convert to the binary fraction they store."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"cannot convert {x!r} to a rational")
        return Fraction(float(x))
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


# ---------------------------------------------------------------------------
# Symmetric matrices
# ---------------------------------------------------------------------------


class SymMatrix:
    """Dense symmetric matrix, either float64 or exact (object array of Fraction).

    Symmetry is checked exactly at construction.
    """

    __slots__ = ("entries", "exact")

    def __init__(self, entries, exact: bool | None = None):
        raw = np.array(entries, dtype=object)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {raw.shape}")
        if exact is None:
            exact = any(isinstance(x, Fraction) for x in raw.flat)
        if exact:
            arr = np.empty(raw.shape, dtype=object)
            for idx, x in np.ndenumerate(raw):
                arr[idx] = as_rational(x)
        else:
            arr = raw.astype(float)
        if not (arr == arr.T).all():
            raise ValueError("matrix is not symmetric")
        self.entries = arr
        self.exact = bool(exact)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij):
        return self.entries[ij]

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.n == other.n and bool((self.entries == other.entries).all())

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"SymMatrix(n={self.n}, {kind})"

    def to_float(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_float())))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.to_float()))

    def trace(self):
        return sum(self.entries[i, i] for i in range(self.n))


def _as_array(M) -> np.ndarray:
    if isinstance(M, SymMatrix):
        return M.to_float()
    return np.asarray(M, dtype=float)


def jacobi_eigen(a, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||a||_F``. Returns ``(w, V)`` with ``w`` ascending and
    orthonormal eigenvectors in the columns of ``V``.
    """
    a = np.array(_as_array(a), dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = tol * max(np.linalg.norm(a), np.finfo(float).tiny)

    for sweep in itertools.count():
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sym_eigen(M, method: str = "lapack"):
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` uses the
    in-house cyclic Jacobi solver.
    """
    a = _as_array(M)
    if method == "lapack":
        try:
            w, v = np.linalg.eigh(a)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
        return w, v
    if method == "jacobi":
        return jacobi_eigen(a)
    raise ValueError(f"unknown eigen method {method!r}")


def min_eigenvalue(M) -> float:
    a = _as_array(M)
    try:
        return float(np.linalg.eigvalsh(a)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def lu_det(M):
    """Determinant by Gaussian elimination with pivoting.

    Exact input (an exact SymMatrix or rows containing Fractions) gives a
    Fraction; anything else is eliminated in float64 with partial pivoting.
    """
    if isinstance(M, SymMatrix) and M.exact:
        return _det_exact([list(row) for row in M.entries])
    rows = M.entries if isinstance(M, SymMatrix) else M
    if any(isinstance(x, Fraction) for x in np.asarray(rows, dtype=object).flat):
        return _det_exact([[as_rational(x) for x in row] for row in rows])
    return _det_float(np.array(rows, dtype=float))


def _det_exact(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        piv = m[col][col]
        det *= piv
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / piv
                row_r, row_c = m[r], m[col]
                for j in range(col + 1, n):
                    row_r[j] -= factor * row_c[j]
    return det


def _det_float(a: np.ndarray) -> float:
    a = a.copy()
    n = a.shape[0]
    det = 1.0
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            return 0.0
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det *= a[col, col]
        factors = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(factors, a[col, col:])
    return float(det)


def default_psd_tol(M) -> float:
    a = _as_array(M)
    return 1e-9 * a.shape[0] * max(1.0, float(np.max(np.abs(a))))


def psd_check(M, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue is >= -tol (nonnegative-eigenvalue convention)."""
    if tol is None:
        tol = default_psd_tol(M)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return min_eigenvalue(M) >= -tol


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of a continuous ``f`` on a sign-changing bracket ``[lo, hi]`` (Brent)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (math.isfinite(flo) and math.isfinite(fhi)) or flo * fhi > 0:
        raise BracketError(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} do not bracket a root")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Smallest x in [lo, hi] (to within tol) where a monotone predicate turns True.

    Requires ``pred(lo)`` False and ``pred(hi)`` True.
    """
    if pred(lo) or not pred(hi):
        raise BracketError(f"predicate must be False at {lo!r} and True at {hi!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Exact polynomials
# ---------------------------------------------------------------------------


class RationalPoly:
    """Dense univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "RationalPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "RationalPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == RationalPoly([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        m = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coeff(k) + other.coeff(k) for k in range(m))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            c = as_rational(other)
            return RationalPoly(c * x for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Horner evaluation. Exact for Fraction/int arguments."""
        if isinstance(x, (int, Rational, np.integer)):
            x = as_rational(x)
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def eval_float(self, x: float) -> float:
        """Correctly rounded value at a float point (exact evaluation, then rounding)."""
        return float(self(as_rational(x)))

    def magnitude(self, x) -> float:
        """sum |c_k| |x|^k, the natural error scale for evaluating at x."""
        ax = abs(float(x))
        return float(sum(abs(float(c)) * ax ** k for k, c in enumerate(self.coeffs)))

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_from_roots(roots: Sequence[float], leading: float = 1.0) -> Callable[[float], float]:
    """Float evaluator for leading * prod(t - r)."""
    roots = np.asarray(roots, dtype=float)

    def evaluate(t: float) -> float:
        return float(leading * np.prod(t - roots))

    return evaluate

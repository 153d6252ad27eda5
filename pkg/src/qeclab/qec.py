"""Quadratic embedding constants.

QEC(G) is the maximum of f^T D f over vectors with sum(f) = 0 and |f| = 1, D the
distance matrix. For the path P_n it equals -1 / (1 + cos(pi / n)).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, distance_matrix, path_graph
from .matrices import is_psd_a
from .numerics import ConsistencyError, SymMatrix, bisect_predicate, find_root, sym_eigen

log = logging.getLogger(__name__)

__all__ = [
    "QecReport",
    "ExtremalSums",
    "CSV_HEADER",
    "hyperplane_basis",
    "qec_numeric",
    "qec_path_closed",
    "qec_path_bisection",
    "lambda_extremes",
    "lambda_path",
    "theta_residual",
    "theta_star_roots",
    "theta_star",
    "path_extremal_vector",
    "verify_extremal_sums",
    "qec_limit_check",
    "qec_report",
]


def hyperplane_basis(n: int) -> np.ndarray:
    """Orthonormal basis (Helmert columns) of {f in R^n : sum f = 0}, shape (n, n-1)."""
    q = np.zeros((n, n - 1))
    for k in range(1, n):
        norm = math.sqrt(k * (k + 1))
        q[:k, k - 1] = 1.0 / norm
        q[k, k - 1] = -k / norm
    return q


def _fix_sign(f: np.ndarray) -> np.ndarray:
    for x in f:
        if abs(x) > 1e-12:
            return f if x > 0 else -f
    return f


def qec_numeric(g: Graph | SymMatrix, method: str = "lapack") -> tuple[float, np.ndarray]:
    """QEC of a finite connected graph and a unit, zero-sum vector attaining it."""
    d = g if isinstance(g, SymMatrix) else distance_matrix(g)
    n = d.n
    if n < 2:
        raise ValueError("QEC needs at least two vertices (the constraint set is empty for n = 1)")
    q = hyperplane_basis(n)
    b = q.T @ d.to_float() @ q
    w, v = sym_eigen(SymMatrix(0.5 * (b + b.T)), method=method)
    f = _fix_sign(q @ v[:, -1])
    return float(w[-1]), f


def qec_path_closed(n: int) -> float:
    if n < 2:
        raise ValueError("n must be >= 2")
    return -1.0 / (1.0 + math.cos(math.pi / n))


def qec_path_bisection(n: int, tol: float = 1e-12, method: str = "eigen") -> float:
    """Minimal t in [-2, 0] with A_{n-1}(t/2, t/2) PSD, by bisection."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return bisect_predicate(
        lambda t: is_psd_a(n - 1, t / 2, t / 2, method=method, tol=0.0), -2.0, 0.0, tol=tol
    )


def lambda_extremes(d: SymMatrix) -> tuple[float, float]:
    """(lambda_1, lambda_2): the two largest eigenvalues of a distance matrix."""
    w = np.linalg.eigvalsh(d.to_float())
    return float(w[-1]), float(w[-2])


def theta_residual(n: int, theta: float) -> float:
    """n sin(theta/2) sin(n theta/2) + cos(theta/2) cos(n theta/2).

    Zero exactly where tan(theta/2) tan(n theta/2) = -1/n, without the poles.
    """
    a, b = theta / 2.0, n * theta / 2.0
    return n * math.sin(a) * math.sin(b) + math.cos(a) * math.cos(b)


def theta_star_roots(n: int, subdivisions: int = 64) -> list[float]:
    """All roots in (0, pi) of the tangent equation, descending.

    Intervals between consecutive poles (2k+1) pi / n of tan(n theta / 2) are
    walked from pi downwards and each is scanned on a uniform subgrid.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("theta* is defined for odd n >= 3")
    # the residual is nonzero at every pole, so pole endpoints never hide a root
    edges = [0.0] + [(2 * k + 1) * math.pi / n for k in range((n - 1) // 2 + 1)]
    h = lambda x: theta_residual(n, x)  # noqa: E731
    roots: list[float] = []
    for lo, hi in reversed(list(zip(edges[:-1], edges[1:]))):
        grid = np.linspace(lo, hi, subdivisions + 1)
        vals = [h(x) for x in grid]
        for k in range(subdivisions - 1, -1, -1):
            if vals[k + 1] == 0.0:
                roots.append(float(grid[k + 1]))
            elif vals[k] * vals[k + 1] < 0:
                roots.append(find_root(h, grid[k], grid[k + 1], tol=1e-15))
    return sorted({r for r in roots if 0.0 < r < math.pi}, reverse=True)


def theta_star(n: int) -> float:
    """Maximal solution in (0, pi) of tan(theta/2) tan(n theta/2) = -1/n, n odd."""
    roots = theta_star_roots(n)
    if not roots:
        raise ConsistencyError(f"no sign change of the theta equation found for n={n}")
    log.debug("theta equation for n=%d: %d roots in (0, pi)", n, len(roots))
    return roots[0]


def lambda_path(n: int, atol: float = 1e-8) -> tuple[float, float]:
    """lambda_1, lambda_2 of D(P_n), checked against the known closed forms of lambda_2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    lam1, lam2 = lambda_extremes(distance_matrix(path_graph(n)))
    if n % 2 == 0:
        expected = -1.0 / (1.0 + math.cos(math.pi / n))
    else:
        expected = -1.0 / (1.0 - math.cos(theta_star(n)))
    if abs(lam2 - expected) > atol:
        raise ConsistencyError(f"lambda_2(P_{n}) = {lam2!r} but the closed form gives {expected!r}")
    return lam1, lam2


def path_extremal_vector(n: int) -> tuple[np.ndarray, np.ndarray]:
    """x_i = (-1)^i sin((2i - 1) pi / (2n)) and its unit-norm rescaling x * sqrt(2/n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    i = np.arange(1, n + 1)
    x = (-1.0) ** i * np.sin((2 * i - 1) * np.pi / (2 * n))
    return x, x * math.sqrt(2.0 / n)


@dataclass(frozen=True)
class ExtremalSums:
    n: int
    total: float
    square_sum: float
    weighted: float
    deviation: float


def verify_extremal_sums(n: int) -> ExtremalSums:
    x, _ = path_extremal_vector(n)
    i = np.arange(n)
    dist = np.abs(i[:, None] - i[None, :]).astype(float)
    total = float(np.sum(x))
    square_sum = float(np.sum(x * x))
    weighted = float(x @ dist @ x)
    deviation = max(
        abs(total),
        abs(square_sum - n / 2.0),
        abs(weighted - qec_path_closed(n) * n / 2.0),
    )
    return ExtremalSums(n, total, square_sum, weighted, deviation)


def qec_limit_check(n_max: int) -> np.ndarray:
    """QEC(P_n) for n = 2..n_max, which increases to -1/2."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    n = np.arange(2, n_max + 1)
    return -1.0 / (1.0 + np.cos(np.pi / n))


CSV_HEADER = "n,qec_numeric,qec_closed,qec_bisection,lambda1,lambda2,theta_star,max_delta"


def _fmt(x) -> str:
    return "" if x is None else f"{x:.12g}"


@dataclass
class QecReport:
    graph_id: str
    n: int
    qec_numeric: float
    lambda1: float
    lambda2: float
    extremal_vector: tuple[float, ...]
    method_deltas: dict[str, float] = field(default_factory=dict)
    qec_closed: float | None = None
    qec_bisection: float | None = None
    theta_star: float | None = None

    @property
    def max_delta(self) -> float:
        return max(self.method_deltas.values(), default=0.0)

    def to_text(self) -> str:
        lines = [
            f"graph: {self.graph_id}",
            f"n: {self.n}",
            f"qec_numeric: {_fmt(self.qec_numeric)}",
            f"lambda1: {_fmt(self.lambda1)}",
            f"lambda2: {_fmt(self.lambda2)}",
        ]
        if self.qec_closed is not None:
            lines.append(f"qec_closed: {_fmt(self.qec_closed)}")
        if self.qec_bisection is not None:
            lines.append(f"qec_bisection: {_fmt(self.qec_bisection)}")
        if self.theta_star is not None:
            lines.append(f"theta_star: {_fmt(self.theta_star)}")
        lines.append("extremal_vector: " + " ".join(_fmt(x) for x in self.extremal_vector))
        for name in sorted(self.method_deltas):
            lines.append(f"delta[{name}]: {self.method_deltas[name]:.3e}")
        lines.append(f"max_delta: {self.max_delta:.3e}")
        return "\n".join(lines) + "\n"

    def csv_row(self) -> str:
        return ",".join([
            str(self.n),
            _fmt(self.qec_numeric),
            _fmt(self.qec_closed),
            _fmt(self.qec_bisection),
            _fmt(self.lambda1),
            _fmt(self.lambda2),
            _fmt(self.theta_star),
            _fmt(self.max_delta),
        ])


def qec_report(g: Graph, graph_id: str | None = None, bisect_tol: float = 1e-12,
               jacobi_max_n: int = 80) -> QecReport:
    """Compute every available quantity for ``g`` and the deltas between routes.

    Paths (detected structurally) additionally get the closed form, the
    bisection value, theta* for odd n and the explicit extremal vector check.
    """
    d = distance_matrix(g)
    value, f = qec_numeric(d)
    lam1, lam2 = lambda_extremes(d)
    deltas = {"quadratic_form": abs(float(f @ d.to_float() @ f) - value)}
    if g.n <= jacobi_max_n:
        deltas["jacobi_vs_lapack"] = abs(qec_numeric(d, method="jacobi")[0] - value)
    if lam2 - 1e-8 > value or value >= lam1:
        raise ConsistencyError(f"lambda_2 <= QEC < lambda_1 violated: {lam2!r}, {value!r}, {lam1!r}")

    report = QecReport(
        graph_id=graph_id or f"graph:{g.n}",
        n=g.n,
        qec_numeric=value,
        lambda1=lam1,
        lambda2=lam2,
        extremal_vector=tuple(float(x) for x in f),
        method_deltas=deltas,
    )
    if g == path_graph(g.n):
        closed = qec_path_closed(g.n)
        report.qec_closed = closed
        report.qec_bisection = qec_path_bisection(g.n, tol=bisect_tol)
        deltas["numeric_vs_closed"] = abs(value - closed)
        deltas["bisection_vs_closed"] = abs(report.qec_bisection - closed)
        _, unit = path_extremal_vector(g.n)
        deltas["extremal_vector_vs_closed"] = abs(float(unit @ d.to_float() @ unit) - closed)
        if g.n % 2 == 1 and g.n >= 3:
            report.theta_star = theta_star(g.n)
            deltas["theta_star_vs_lambda2"] = abs(-1.0 / (1.0 - math.cos(report.theta_star)) - lam2)
        else:
            deltas["lambda2_vs_closed"] = abs(lam2 - closed)
    return report

"""Self-verification suites run by ``qeclab verify``.

Each suite computes one identity or inequality in two independent ways and
reports the worst deviation against its tolerance. Passing ``tol`` overrides
every suite's tolerance (``tol=0`` is a useful negative control: exact suites
still pass, floating ones fail).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import graphs, matrices, polynomials, qec
from .numerics import ConsistencyError, as_rational, lu_det

__all__ = ["SuiteResult", "SUITES", "run_suites", "seed_from_env", "random_rational"]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    deviation: float
    tolerance: float
    checks: int

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<48s} max_dev={self.deviation:.3e} "
                f"tol={self.tolerance:.1e} checks={self.checks}")


def seed_from_env(default: int = 0) -> int:
    return int(os.environ.get("QECLAB_SEED", default))


def random_rational(rng: np.random.Generator, lo: float, hi: float, max_den: int = 64) -> Fraction:
    den = int(rng.integers(1, max_den + 1))
    num = int(rng.integers(math.ceil(lo * den), math.floor(hi * den) + 1))
    return Fraction(num, den)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _det_exact(n_max, rng):
    dev, checks = 0.0, 0
    for n in range(1, min(n_max, 12) + 1):
        for _ in range(10):
            s, t = random_rational(rng, -3, 3), random_rational(rng, -3, 3)
            diff = lu_det(matrices.build_a(n, s, t)) - matrices.det_a(n, s, t)
            dev = max(dev, abs(float(diff)))
            checks += 1
    return dev, checks, 0.0


def _det_float(n_max, rng):
    dev, checks = 0.0, 0
    for n in range(1, n_max + 1):
        for _ in range(5):
            s, t = rng.uniform(0, 3), rng.uniform(-0.2, 3)
            dev = max(dev, _rel(lu_det(matrices.build_a(n, s, t)), matrices.det_a(n, s, t)))
            checks += 1
    return dev, checks, 1e-8


def _leading_and_binomial(n_max, rng):
    bad, checks = 0, 0
    for n in range(0, n_max + 1):
        a, b = random_rational(rng, -3, 3), random_rational(rng, -3, 3)
        p = polynomials.s_poly(a, b, n)
        bad += p.degree > n or p.coeff(n) != a * n - n + 1
        if n >= 1:
            bad += p != polynomials.s_poly_binomial(a, b, n)
        bad += polynomials.w_poly(n) != polynomials.s_poly(2, 1, n)
        checks += 3
    return float(bad), checks, 0.0


def _decomposition(n_max, rng):
    bad, checks = 0, 0
    for n in range(1, n_max + 1):
        s = random_rational(rng, -3, 3)
        lhs = polynomials.s_poly(1, s + 1, n)
        rhs = polynomials.s_poly(1, 1, n) + polynomials.s_poly(2, 1, n - 1) * s
        bad += lhs != rhs
        checks += 1
    return float(bad), checks, 0.0


def _closed_form(n_max, rng):
    dev, checks = 0.0, 0
    ts = [-2.0, -0.7, -0.3, -0.25 - 1e-7, -0.25, -0.25 + 1e-7, -0.2, 0.0, 0.5, 3.0]
    for n in range(0, n_max + 1):
        a, b = float(random_rational(rng, -3, 3)), float(random_rational(rng, -3, 3))
        p = polynomials.s_poly(a, b, n)
        for t in ts:
            exact = p.eval_float(t)
            dev = max(dev, abs(polynomials.s_eval_closed(a, b, n, t) - exact) / max(p.magnitude(t), 1e-300))
            checks += 1
    return dev, checks, 1e-9


def _t2n(n_max, rng):
    bad, checks = 0, 0
    for n in range(1, n_max + 1):
        for _ in range(3):
            a, b = random_rational(rng, -3, 3), random_rational(rng, -3, 3)
            bad += not polynomials.check_t2n_identity(a, b, n)
            checks += 1
    return float(bad), checks, 0.0


def _factorizations(n_max, rng):
    dev, checks = 0.0, 0
    for case in polynomials.SPECIAL_CASES:
        for n in range(1, n_max + 1):
            p = polynomials.s_poly(*case, n)
            roots = np.array(polynomials.s_roots_special(case, n))
            lead = polynomials.special_leading(case, n)
            for t in rng.uniform(-1.5, 1.0, size=5):
                exact = p.eval_float(t)
                dev = max(dev, _rel(lead * float(np.prod(t - roots)), exact))
                checks += 1
    return dev, checks, 1e-9


def _sign_pattern(n_max, rng):
    bad, checks = 0, 0
    for n in range(1, n_max + 1):
        lo, hi = polynomials.t_threshold(n), polynomials.t_threshold(n + 1)
        lo = max(lo, hi - 1.0)
        for t in np.linspace(lo, hi, 7)[1:-1]:
            bad += polynomials.sign_pattern(n, float(t)) != (1, -1)
            checks += 1
        for t in (hi + 1e-6, hi + 0.5):
            bad += polynomials.sign_pattern(n, t) != (1, 1)
            checks += 1
    return float(bad), checks, 0.0


def _threshold_lines(n_max, rng):
    dev, checks = 0.0, 0
    for line in matrices.LINES:
        for n in range(1, n_max + 1):
            closed = matrices.psd_threshold_t(n, line)
            dev = max(dev, abs(matrices.threshold_by_bisection(n, line) - closed))
            checks += 1
    return dev, checks, 1e-9


def _infinite_region(n_max, rng):
    bad, checks = 0, 0
    ns = sorted({1, 2, n_max, 2 * n_max, 8 * n_max})
    while checks < 40:
        s, t = rng.uniform(-2, 2), rng.uniform(-0.6, 1.0)
        inside = matrices.infinite_psd(s, t)
        if inside and (1 + 4 * t <= 0 or 1 + 2 * s + math.sqrt(1 + 4 * t) <= 0):
            continue
        if inside:
            bad += not all(matrices.is_psd_a(n, s, t, method="eigen") for n in ns)
        elif not matrices.infinite_psd(s + 1e-3, t + 1e-3):
            bad += matrices.falsify_infinite(s, t) is None
        else:
            continue
        checks += 1
    return float(bad), checks, 0.0


def _qec_paths(n_max, rng):
    dev, checks = 0.0, 0
    for n in range(2, n_max + 1):
        closed = qec.qec_path_closed(n)
        dev = max(dev, abs(qec.qec_numeric(graphs.path_graph(n))[0] - closed))
        dev = max(dev, abs(qec.qec_path_bisection(n) - closed))
        checks += 2
    return dev, checks, 1e-8


def _lambda2_parity(n_max, rng):
    dev, checks, bad = 0.0, 0, 0
    for n in range(2, n_max + 1):
        _, lam2 = qec.lambda_extremes(graphs.distance_matrix(graphs.path_graph(n)))
        closed = qec.qec_path_closed(n)
        if n % 2 == 0:
            dev = max(dev, abs(lam2 - closed))
        else:
            bad += not closed - lam2 > 1e-12
        checks += 1
    return dev + bad, checks, 1e-8


def _theta_star(n_max, rng):
    dev, checks = 0.0, 0
    for n in range(3, n_max + 1, 2):
        th = qec.theta_star(n)
        _, lam2 = qec.lambda_extremes(graphs.distance_matrix(graphs.path_graph(n)))
        dev = max(dev, abs(-1 / (1 - math.cos(th)) - lam2), abs(math.tan(th / 2) * math.tan(n * th / 2) + 1 / n))
        checks += 1
    return dev, checks, 1e-8


def _extremal(n_max, rng):
    dev = max(qec.verify_extremal_sums(n).deviation for n in range(2, n_max + 1))
    return dev, n_max - 1, 1e-10


def _limit(n_max, rng):
    seq = qec.qec_limit_check(max(n_max, 3))
    bad = int(not np.all(np.diff(seq) > 0)) + int(not np.all(seq <= -0.5))
    return float(bad), len(seq), 0.0


def _real_roots(n_max, rng):
    bad, checks = 0, 0
    for n in range(1, n_max + 1):
        s = random_rational(rng, -3, 3)
        try:
            matrices.real_roots_check(s, n)
        except ConsistencyError:
            bad += 1
        checks += 1
    return float(bad), checks, 0.0


def _qec_bounds(n_max, rng):
    bad, checks = 0, 0
    gs = [graphs.complete_graph(k) for k in range(2, n_max + 1)]
    gs += [graphs.cycle_graph(k) for k in range(3, n_max + 1)]
    gs += [graphs.star_graph(k) for k in range(2, n_max + 1)]
    gs += [graphs.random_connected_graph(int(rng.integers(2, n_max + 1)), 0.3, rng) for _ in range(10)]
    for g in gs:
        d = graphs.distance_matrix(g)
        value, _ = qec.qec_numeric(d)
        lam1, lam2 = qec.lambda_extremes(d)
        bad += not (lam2 - 1e-8 <= value < lam1)
        checks += 1
    return float(bad), checks, 0.0


SUITES: dict[str, Callable] = {
    "determinant identity, exact": _det_exact,
    "determinant identity, float vs LU": _det_float,
    "leading coefficient and binomial form": _leading_and_binomial,
    "S_n(1,s+1) = S_n(1,1) + s S_{n-1}(2,1)": _decomposition,
    "square-root closed form vs recurrence": _closed_form,
    "t^(2n) identity": _t2n,
    "four root factorizations": _factorizations,
    "sign pattern of W_{n-1}, W_n": _sign_pattern,
    "four PSD threshold lines (bisection)": _threshold_lines,
    "infinite-n PSD region": _infinite_region,
    "QEC(P_n): numeric and bisection vs closed": _qec_paths,
    "lambda_2(P_n) vs QEC(P_n), even/odd": _lambda2_parity,
    "theta* vs lambda_2(P_n), odd n": _theta_star,
    "extremal vector sums": _extremal,
    "QEC(P_n) increasing, <= -1/2": _limit,
    "real roots of det A_n(s, .)": _real_roots,
    "lambda_2 <= QEC < lambda_1 on assorted graphs": _qec_bounds,
}


def run_suites(n_max: int, tol: float | None = None, seed: int | None = None,
               only: list[str] | None = None) -> list[SuiteResult]:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    results = []
    for name, fn in SUITES.items():
        if only and name not in only:
            continue
        dev, checks, default_tol = fn(n_max, rng)
        results.append(SuiteResult(name, float(dev), default_tol if tol is None else tol, checks))
    return results

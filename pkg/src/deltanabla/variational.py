"""Weighted delta-nabla variational problems on finite time scales.

A problem extremizes a weighted sum of a delta integral of
L_delta(t, y^sigma, y^Delta) and a nabla integral of
L_nabla(t, y^rho, y^nabla) over trajectories with fixed endpoint values.
On a finite scale the functional is a smooth function of the interior
trajectory values, so stationary points are found by a damped Newton
method on the gradient, and both integral forms of the Euler-Lagrange
condition can be evaluated exactly as "deviation from constancy"
residuals.  Jointly convex integrands with nonnegative weights upgrade a
stationary point to a global minimizer; a sampled Hessian check issues
that certificate.

The machinery is written for an arbitrary finite list of weighted terms;
the two-term delta-nabla problem is the m = 2 case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    EvaluationError,
    ScaleMismatchError,
)
from . import expressions
from .timescale import (
    DomainTag,
    GridFunction,
    TimeScale,
    delta_derivative,
    nabla_derivative,
)

FD_STEP = 1e-6  # central-difference step factor, times max(1, |x|)


def _fd_step(x: float) -> float:
    return FD_STEP * max(1.0, abs(x))


class Lagrangian:
    """An integrand L(t, y, v) with partial derivatives in slots 2 and 3.

    Partials are analytic when the Lagrangian comes from a parsed
    expression (or is given explicit derivative callables) and fall back
    to central finite differences otherwise; ``source`` records which.
    """

    __slots__ = ("_fn", "_d2", "_d3", "_expr", "source", "text")

    def __init__(
        self,
        fn: Callable[[float, float, float], float],
        d2: Callable[[float, float, float], float] | None = None,
        d3: Callable[[float, float, float], float] | None = None,
        source: str | None = None,
        _expr=None,
        text: str | None = None,
        allow_fd: bool = True,
    ):
        if not callable(fn):
            raise ConfigurationError("Lagrangian needs a callable integrand")
        self._fn = fn
        self._expr = _expr
        self.text = text
        if d2 is None and not allow_fd:
            raise ConfigurationError("partial derivatives unavailable and finite differences disabled")
        self._d2 = d2
        self._d3 = d3
        self.source = source or ("analytic" if d2 is not None else "numeric")

    @classmethod
    def from_expression(cls, src: str) -> "Lagrangian":
        """Parse an expression over t, y, v and differentiate it symbolically."""
        tree = expressions.parse(src)
        fn = expressions.compile_expr(tree)
        d2 = expressions.compile_expr(expressions.differentiate(tree, "y"))
        d3 = expressions.compile_expr(expressions.differentiate(tree, "v"))
        return cls(fn, d2, d3, source="analytic", _expr=tree, text=src)

    @classmethod
    def from_callables(
        cls,
        fn: Callable[[float, float, float], float],
        d2: Callable[[float, float, float], float] | None = None,
        d3: Callable[[float, float, float], float] | None = None,
    ) -> "Lagrangian":
        return cls(fn, d2, d3)

    def _guard(self, raw: Callable, t: float, y: float, v: float, what: str) -> float:
        try:
            out = raw(t, y, v)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            if self._expr is not None and what == "L":
                expressions.evaluate(self._expr, t, y, v)  # raises with detail
            raise EvaluationError(f"{what}({t!r}, {y!r}, {v!r}): {exc}") from None
        if not math.isfinite(out):
            raise EvaluationError(f"{what}({t!r}, {y!r}, {v!r}) is not finite")
        return out

    def __call__(self, t: float, y: float, v: float) -> float:
        return self._guard(self._fn, t, y, v, "L")

    def d2(self, t: float, y: float, v: float) -> float:
        """Partial derivative with respect to the second slot."""
        if self._d2 is not None:
            return self._guard(self._d2, t, y, v, "d2")
        h = _fd_step(y)
        return (self(t, y + h, v) - self(t, y - h, v)) / (2.0 * h)

    def d3(self, t: float, y: float, v: float) -> float:
        """Partial derivative with respect to the third slot."""
        if self._d3 is not None:
            return self._guard(self._d3, t, y, v, "d3")
        h = _fd_step(v)
        return (self(t, y, v + h) - self(t, y, v - h)) / (2.0 * h)


@dataclass(frozen=True)
class Term:
    """One weighted integral term: delta or nabla kind."""

    weight: float
    lagrangian: Lagrangian
    kind: str  # "delta" or "nabla"

    def __post_init__(self):
        if self.kind not in ("delta", "nabla"):
            raise ValueError(f"kind must be 'delta' or 'nabla', got {self.kind!r}")


class TermSumProblem:
    """Extremize a finite sum of weighted delta/nabla integral terms with
    fixed endpoint values y(a) = alpha, y(b) = beta."""

    def __init__(self, scale: TimeScale, terms: Sequence[Term], alpha: float, beta: float):
        if len(scale) < 3:
            raise DomainError("the scale needs at least one interior point")
        terms = tuple(terms)
        if not terms or all(term.weight == 0.0 for term in terms):
            raise DomainError("all term weights vanish; nothing to extremize")
        self.scale = scale
        self.terms = terms
        self.alpha = float(alpha)
        self.beta = float(beta)

    @property
    def active_terms(self) -> tuple[Term, ...]:
        return tuple(term for term in self.terms if term.weight != 0.0)


class DeltaNablaProblem(TermSumProblem):
    """The two-term problem: gamma1 times the delta term plus gamma2 times
    the nabla term."""

    def __init__(
        self,
        scale: TimeScale,
        gamma1: float,
        gamma2: float,
        L_delta: Lagrangian,
        L_nabla: Lagrangian,
        alpha: float,
        beta: float,
    ):
        if gamma1 == 0.0 and gamma2 == 0.0:
            raise DomainError("gamma1 and gamma2 cannot vanish simultaneously")
        self.gamma1 = float(gamma1)
        self.gamma2 = float(gamma2)
        self.L_delta = L_delta
        self.L_nabla = L_nabla
        super().__init__(
            scale,
            [Term(gamma1, L_delta, "delta"), Term(gamma2, L_nabla, "nabla")],
            alpha,
            beta,
        )


# ---------------------------------------------------------------------------
# Functional evaluation
# ---------------------------------------------------------------------------


def _check_scales(p: TermSumProblem, y: GridFunction) -> None:
    if y.scale != p.scale:
        raise ScaleMismatchError("trajectory scale differs from the problem scale")


def _term_sum(term: Term, ts: TimeScale, y: np.ndarray) -> float:
    """Weighted integral of one term along the trajectory values y."""
    p = ts.points
    gaps = ts.gaps()
    L = term.lagrangian
    total = 0.0
    if term.kind == "delta":
        for i in range(len(p) - 1):
            total += gaps[i] * L(p[i], y[i + 1], (y[i + 1] - y[i]) / gaps[i])
    else:
        for i in range(1, len(p)):
            total += gaps[i - 1] * L(p[i], y[i - 1], (y[i] - y[i - 1]) / gaps[i - 1])
    return term.weight * total


def objective(p: TermSumProblem, y: GridFunction) -> float:
    """Value of the functional at an arbitrary trajectory on the problem's
    scale (boundary values need not match the problem's)."""
    _check_scales(p, y)
    return sum(_term_sum(term, p.scale, y.values) for term in p.active_terms)


def _term_partials(term: Term, ts: TimeScale, y: np.ndarray):
    """Arrays of partial-derivative values along the trajectory.

    For a delta term, index i in 0..M-1 evaluates at
    (t_i, y^sigma(t_i), y^Delta(t_i)); for a nabla term, index i in 1..M at
    (t_i, y^rho(t_i), y^nabla(t_i)) with slot 0 unused.
    """
    p = ts.points
    gaps = ts.gaps()
    L = term.lagrangian
    M = len(p) - 1
    if term.kind == "delta":
        p2 = np.empty(M)
        p3 = np.empty(M)
        for i in range(M):
            args = (p[i], y[i + 1], (y[i + 1] - y[i]) / gaps[i])
            p2[i] = L.d2(*args)
            p3[i] = L.d3(*args)
        return p2, p3
    p2 = np.zeros(M + 1)
    p3 = np.zeros(M + 1)
    for i in range(1, M + 1):
        args = (p[i], y[i - 1], (y[i] - y[i - 1]) / gaps[i - 1])
        p2[i] = L.d2(*args)
        p3[i] = L.d3(*args)
    return p2, p3


def el_residual_1(p: TermSumProblem, y: GridFunction) -> GridFunction:
    """First Euler-Lagrange form, as deviation from constancy on the scale
    minus its minimum.

    Each delta term contributes d3 at rho(t) minus the delta integral of d2
    up to rho(t); each nabla term contributes d3 at t minus the nabla
    integral of d2 up to t.  At an extremizer the sum is constant, so the
    mean-subtracted values vanish.
    """
    _check_scales(p, y)
    ts = p.scale
    gaps = ts.gaps()
    M = len(ts) - 1
    F = np.zeros(M)  # index j-1 holds the value at t_j, j = 1..M
    for term in p.active_terms:
        p2, p3 = _term_partials(term, ts, y.values)
        if term.kind == "delta":
            # prefix[k] = integral over [a, t_k)
            prefix = np.concatenate([[0.0], np.cumsum(gaps * p2)])
            for j in range(1, M + 1):
                F[j - 1] += term.weight * (p3[j - 1] - prefix[j - 1])
        else:
            prefix = np.concatenate([[0.0], np.cumsum(gaps * p2[1:])])
            for j in range(1, M + 1):
                F[j - 1] += term.weight * (p3[j] - prefix[j])
    return GridFunction(ts.truncated(DomainTag.KAPPA_SUB), F - np.mean(F))


def el_residual_2(p: TermSumProblem, y: GridFunction) -> GridFunction:
    """Second Euler-Lagrange form, mean-subtracted, on the scale minus its
    maximum.

    Delta terms contribute d3 at t minus the delta integral of d2 up to t;
    nabla terms contribute d3 at sigma(t) minus the nabla integral of d2 up
    to sigma(t).
    """
    _check_scales(p, y)
    ts = p.scale
    gaps = ts.gaps()
    M = len(ts) - 1
    F = np.zeros(M)  # index j holds the value at t_j, j = 0..M-1
    for term in p.active_terms:
        p2, p3 = _term_partials(term, ts, y.values)
        if term.kind == "delta":
            prefix = np.concatenate([[0.0], np.cumsum(gaps * p2)])
            for j in range(M):
                F[j] += term.weight * (p3[j] - prefix[j])
        else:
            prefix = np.concatenate([[0.0], np.cumsum(gaps * p2[1:])])
            for j in range(M):
                F[j] += term.weight * (p3[j + 1] - prefix[j + 1])
    return GridFunction(ts.truncated(DomainTag.KAPPA), F - np.mean(F))


def first_variation(p: TermSumProblem, y: GridFunction, eta: GridFunction) -> float:
    """Derivative at 0 of epsilon -> objective(y + epsilon * eta), assembled
    from the partials (d2 against the shifted eta, d3 against its derivative)."""
    _check_scales(p, y)
    _check_scales(p, eta)
    ts = p.scale
    gaps = ts.gaps()
    ev = eta.values
    M = len(ts) - 1
    total = 0.0
    for term in p.active_terms:
        p2, p3 = _term_partials(term, ts, y.values)
        acc = 0.0
        if term.kind == "delta":
            for i in range(M):
                acc += gaps[i] * (p2[i] * ev[i + 1] + p3[i] * (ev[i + 1] - ev[i]) / gaps[i])
        else:
            for i in range(1, M + 1):
                acc += gaps[i - 1] * (p2[i] * ev[i - 1] + p3[i] * (ev[i] - ev[i - 1]) / gaps[i - 1])
        total += term.weight * acc
    return total


def gradient(p: TermSumProblem, y: GridFunction) -> np.ndarray:
    """Gradient of the functional with respect to the interior trajectory
    values; stationarity of these is exactly constancy of both
    Euler-Lagrange forms."""
    _check_scales(p, y)
    ts = p.scale
    gaps = ts.gaps()
    M = len(ts) - 1
    g = np.zeros(M - 1)
    for term in p.active_terms:
        p2, p3 = _term_partials(term, ts, y.values)
        for j in range(1, M):
            if term.kind == "delta":
                g[j - 1] += term.weight * (gaps[j - 1] * p2[j - 1] + p3[j - 1] - p3[j])
            else:
                g[j - 1] += term.weight * (gaps[j] * p2[j + 1] - p3[j + 1] + p3[j])
    return g


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------


class Certificate(str, Enum):
    NONE = "none"
    GLOBAL_MIN = "global-min"
    GLOBAL_MAX = "global-max"
    LOCAL_ONLY = "local-only"


@dataclass
class Solution:
    """A stationary trajectory with diagnostics.

    ``residual_el1`` and ``residual_el2`` are the max-abs of the two
    mean-subtracted Euler-Lagrange forms; ``converged`` is true exactly
    when both are within the solve tolerance.
    """

    y: GridFunction
    objective: float
    residual_el1: float
    residual_el2: float
    certificate: Certificate
    iterations: int
    converged: bool


def linear_interpolant(p: TermSumProblem) -> GridFunction:
    """Straight line between (a, alpha) and (b, beta); the default start."""
    ts = p.scale
    frac = (ts.points - ts.a) / (ts.b - ts.a)
    return GridFunction(ts, p.alpha + (p.beta - p.alpha) * frac)


def _assemble(p: TermSumProblem, interior: np.ndarray) -> GridFunction:
    vals = np.concatenate([[p.alpha], interior, [p.beta]])
    return GridFunction(p.scale, vals)


def solve(
    p: TermSumProblem,
    tol: float = 1e-10,
    max_iter: int = 200,
    init: GridFunction | None = None,
) -> Solution:
    """Find a stationary trajectory by damped Newton on the gradient.

    The Hessian is taken by central differences of the gradient; steps
    backtrack on the gradient norm.  Non-convergence is reported in the
    returned Solution, never raised.  The certificate is filled by
    ``certify`` when the residuals meet the tolerance.
    """
    if init is None:
        x = linear_interpolant(p).values[1:-1].copy()
    else:
        _check_scales(p, init)
        x = init.values[1:-1].copy()

    n = x.size
    gtol = tol / (2.0 * max(1, n))
    iterations = 0
    g = gradient(p, _assemble(p, x))
    for _ in range(max_iter):
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= gtol:
            break
        H = np.empty((n, n))
        for j in range(n):
            h = _fd_step(x[j])
            xp = x.copy()
            xm = x.copy()
            xp[j] += h
            xm[j] -= h
            H[:, j] = (gradient(p, _assemble(p, xp)) - gradient(p, _assemble(p, xm))) / (2.0 * h)
        H = 0.5 * (H + H.T)
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            step = -g
        # backtrack on the gradient norm
        lam = 1.0
        accepted = False
        while lam >= 2.0**-30:
            x_trial = x + lam * step
            g_trial = gradient(p, _assemble(p, x_trial))
            if float(np.max(np.abs(g_trial))) < gnorm * (1.0 - 1e-4 * lam):
                x, g = x_trial, g_trial
                accepted = True
                break
            lam *= 0.5
        iterations += 1
        if not accepted:
            break

    y = _assemble(p, x)
    r1 = float(np.max(np.abs(el_residual_1(p, y).values)))
    r2 = float(np.max(np.abs(el_residual_2(p, y).values)))
    converged = max(r1, r2) <= tol
    sol = Solution(
        y=y,
        objective=objective(p, y),
        residual_el1=r1,
        residual_el2=r2,
        certificate=Certificate.NONE,
        iterations=iterations,
        converged=converged,
    )
    if converged:
        sol.certificate = certify(p, sol)
    return sol


# ---------------------------------------------------------------------------
# Optimality certificates
# ---------------------------------------------------------------------------


def _hessian_2x2(L: Lagrangian, t: float, y: float, v: float) -> tuple[float, float, float]:
    """Symmetrized (d2y2, d2yv, d2v2) by central differences of the partials."""
    hy = _fd_step(y)
    hv = _fd_step(v)
    h_yy = (L.d2(t, y + hy, v) - L.d2(t, y - hy, v)) / (2.0 * hy)
    h_yv = (L.d2(t, y, v + hv) - L.d2(t, y, v - hv)) / (2.0 * hv)
    h_vy = (L.d3(t, y + hy, v) - L.d3(t, y - hy, v)) / (2.0 * hy)
    h_vv = (L.d3(t, y, v + hv) - L.d3(t, y, v - hv)) / (2.0 * hv)
    return h_yy, 0.5 * (h_yv + h_vy), h_vv


def _eig_range_2x2(a: float, b: float, c: float) -> tuple[float, float]:
    mid = 0.5 * (a + c)
    rad = math.hypot(0.5 * (a - c), b)
    return mid - rad, mid + rad


def _sample_box(values: np.ndarray, inflate: float) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) * (1.0 + inflate)
    if half == 0.0:
        half = 1.0
    return mid - half, mid + half


def certify(
    p: TermSumProblem,
    sol: Solution,
    inflate: float = 0.5,
    grid_points: int = 21,
    eig_tol: float = 1e-9,
) -> Certificate:
    """Sample-based joint-convexity certificate for a stationary solution.

    Samples the (y, v) Hessian of every active integrand over a box around
    the trajectory (range inflated by ``inflate``) at every scale point.
    All Hessians positive semidefinite with nonnegative weights certifies a
    global minimizer; the negative-semidefinite analogue a global
    maximizer; anything else, or any negative weight, gives local-only.
    The check samples; it is evidence, not a proof.
    """
    if not sol.converged:
        return Certificate.NONE
    actives = p.active_terms
    if any(term.weight < 0.0 for term in actives):
        return Certificate.LOCAL_ONLY

    y_vals = sol.y.values
    v_vals = np.concatenate(
        [delta_derivative(sol.y).values, nabla_derivative(sol.y).values]
    )
    y_lo, y_hi = _sample_box(y_vals, inflate)
    v_lo, v_hi = _sample_box(v_vals, inflate)
    ys = np.linspace(y_lo, y_hi, grid_points)
    vs = np.linspace(v_lo, v_hi, grid_points)

    min_eig = math.inf
    max_eig = -math.inf
    for term in actives:
        for t in p.scale.points:
            for yy in ys:
                for vv in vs:
                    a, b, c = _hessian_2x2(term.lagrangian, float(t), float(yy), float(vv))
                    lo, hi = _eig_range_2x2(a, b, c)
                    min_eig = min(min_eig, lo)
                    max_eig = max(max_eig, hi)
    if min_eig >= -eig_tol:
        return Certificate.GLOBAL_MIN
    if max_eig <= eig_tol:
        return Certificate.GLOBAL_MAX
    return Certificate.LOCAL_ONLY


# ---------------------------------------------------------------------------
# Weak-local-minimizer probe
# ---------------------------------------------------------------------------


def norm_1_inf(y: GridFunction) -> float:
    """Sum of the sup norms of y^sigma, y^rho, y^Delta, y^nabla, each taken
    over the interior points."""
    ts = y.scale
    if len(ts) < 3:
        raise DomainError("the norm needs at least one interior point")
    vals = y.values
    M = len(ts) - 1
    sup_sigma = float(np.max(np.abs(vals[2 : M + 1])))
    sup_rho = float(np.max(np.abs(vals[0 : M - 1])))
    dvals = delta_derivative(y).values
    nvals = nabla_derivative(y).values
    sup_delta = float(np.max(np.abs(dvals[1:M])))
    sup_nabla = float(np.max(np.abs(nvals[0 : M - 1])))
    return sup_sigma + sup_rho + sup_delta + sup_nabla


def local_min_probe(
    p: TermSumProblem,
    sol: Solution,
    n_trials: int = 1000,
    delta: float = 0.1,
    seed: int = 0,
    slack: float = 1e-12,
) -> bool:
    """Random-perturbation check that sol.y is a weak local minimizer.

    Draws admissible variations vanishing at both endpoints, scales each
    into the delta-ball of the trajectory norm, and requires the objective
    not to drop by more than ``slack``.
    """
    rng = np.random.default_rng(seed)
    base = objective(p, sol.y)
    ts = p.scale
    n_int = len(ts) - 2
    for _ in range(n_trials):
        eta_vals = np.zeros(len(ts))
        eta_vals[1:-1] = rng.standard_normal(n_int)
        eta = GridFunction(ts, eta_vals)
        size = norm_1_inf(eta)
        if size == 0.0:
            continue
        eps = rng.uniform(0.0, 1.0) * delta / (2.0 * size)
        trial = objective(p, GridFunction(ts, sol.y.values + eps * eta_vals))
        if trial < base - slack:
            return False
    return True

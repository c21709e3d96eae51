"""Finite time scales and the delta/nabla calculus on them.

A time scale is represented by its finite, strictly increasing set of points
t_0 < t_1 < ... < t_M.  On such a set every delta and nabla derivative is an
exact difference quotient and every integral is a finite weighted sum, so the
classical identities (integration by parts, derivative and integral
conversions, endpoint splitting, the fundamental theorem) hold exactly and
can be checked numerically to machine precision.

Conventions: sigma(b) = b and rho(a) = a at the endpoints, hence mu(b) = 0
and nu(a) = 0.  Truncated domains are ordinary time scales again: the delta
derivative of f lives on the scale with the last point removed, the nabla
derivative on the scale with the first point removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError


class DomainTag(Enum):
    """Named truncations of a time scale.

    FULL is the scale itself; KAPPA drops the maximum (domain of the delta
    derivative), KAPPA_SUB drops the minimum (domain of the nabla
    derivative), KAPPA_BOTH drops both, and the SQUARED variants apply the
    same truncation twice (domains of second-order quantities).
    """

    FULL = (0, 0)
    KAPPA = (0, 1)
    KAPPA_SUB = (1, 0)
    KAPPA_BOTH = (1, 1)
    KAPPA_SQUARED = (0, 2)
    KAPPA_SUB_SQUARED = (2, 0)

    @property
    def drop_left(self) -> int:
        return self.value[0]

    @property
    def drop_right(self) -> int:
        return self.value[1]


class TimeScale:
    """A finite strictly increasing set of real time points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[float]):
        pts = np.asarray(list(points), dtype=float)
        if pts.ndim != 1 or pts.size < 1:
            raise DomainError("a time scale needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise DomainError("time scale points must be finite")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise DomainError("time scale points must be strictly increasing")
        pts.setflags(write=False)
        self.points = pts

    @classmethod
    def sampled_interval(cls, a: float, b: float, n: int) -> "TimeScale":
        """Uniform n-point sampling of the real interval [a, b].

        This is the only bridge to genuinely continuous domains: a dense
        interval is replaced by a uniform grid, which models the interval
        with O((b - a)/n) error in the integrals and derivatives.
        """
        if n < 2:
            raise DomainError("sampled_interval needs n >= 2")
        if not b > a:
            raise DomainError("sampled_interval needs a < b")
        return cls(np.linspace(a, b, n))

    # -- basic queries ----------------------------------------------------

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return int(self.points.size)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        inner = ", ".join(f"{t:g}" for t in self.points[:6])
        if len(self) > 6:
            inner += f", ... ({len(self)} points)"
        return f"TimeScale({{{inner}}})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeScale):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.all(self.points == other.points)
        )

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def index(self, t: float) -> int:
        """Index of t in the point set; exact comparison, no tolerance."""
        i = int(np.searchsorted(self.points, t))
        if i < len(self) and self.points[i] == t:
            return i
        raise DomainError(f"t={t!r} is not a point of {self!r}")

    def __contains__(self, t: float) -> bool:
        i = int(np.searchsorted(self.points, t))
        return i < len(self) and self.points[i] == t

    # -- jump operators and graininess ------------------------------------

    def sigma(self, t: float) -> float:
        """Forward jump: the next point of the scale, with sigma(b) = b."""
        i = self.index(t)
        return float(self.points[min(i + 1, len(self) - 1)])

    def rho(self, t: float) -> float:
        """Backward jump: the previous point, with rho(a) = a."""
        i = self.index(t)
        return float(self.points[max(i - 1, 0)])

    def mu(self, t: float) -> float:
        """Forward graininess mu(t) = sigma(t) - t (zero at b)."""
        i = self.index(t)
        if i == len(self) - 1:
            return 0.0
        return float(self.points[i + 1] - self.points[i])

    def nu(self, t: float) -> float:
        """Backward graininess nu(t) = t - rho(t) (zero at a)."""
        i = self.index(t)
        if i == 0:
            return 0.0
        return float(self.points[i] - self.points[i - 1])

    # -- truncations -------------------------------------------------------

    def truncated(self, tag: DomainTag) -> "TimeScale":
        """The time scale restricted to the domain named by ``tag``.

        A truncation only removes an endpoint while more than one point
        remains (a one-point scale is its own truncation, matching
        sigma(b) = b and rho(a) = a).
        """
        pts = self.points
        for _ in range(tag.drop_right):
            if pts.size >= 2:
                pts = pts[:-1]
        for _ in range(tag.drop_left):
            if pts.size >= 2:
                pts = pts[1:]
        return TimeScale(pts)

    def domain_points(self, tag: DomainTag) -> np.ndarray:
        return self.truncated(tag).points

    @property
    def interior_points(self) -> np.ndarray:
        """Points strictly between a and b."""
        return self.points[1:-1]

    def gaps(self) -> np.ndarray:
        """Consecutive point spacings, length len(self) - 1."""
        return np.diff(self.points)


class GridFunction:
    """Real values attached to the points of a time scale."""

    __slots__ = ("scale", "values")

    def __init__(self, scale: TimeScale, values: Iterable[float]):
        vals = np.array(values, dtype=float)
        if vals.shape != scale.points.shape:
            raise DomainError(
                f"expected {len(scale)} values for {scale!r}, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function values must be finite")
        vals.setflags(write=False)
        self.scale = scale
        self.values = vals

    @classmethod
    def sample(cls, scale: TimeScale, fn: Callable[[float], float]) -> "GridFunction":
        return cls(scale, [fn(float(t)) for t in scale.points])

    @classmethod
    def constant(cls, scale: TimeScale, c: float) -> "GridFunction":
        return cls(scale, np.full(len(scale), float(c)))

    def value_at(self, t: float) -> float:
        return float(self.values[self.scale.index(t)])

    def __repr__(self) -> str:
        return f"GridFunction({self.scale!r}, {np.array2string(self.values, precision=6)})"

    # Pointwise vector-space operations, used throughout the variational code.

    def _check_same_scale(self, other: "GridFunction") -> None:
        if self.scale != other.scale:
            raise DomainError("grid functions live on different scales")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_scale(other)
        return GridFunction(self.scale, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_scale(other)
        return GridFunction(self.scale, self.values - other.values)

    def __mul__(self, c: float) -> "GridFunction":
        return GridFunction(self.scale, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.scale, -self.values)


# ---------------------------------------------------------------------------
# Derivatives, shifts, integrals
# ---------------------------------------------------------------------------


def _require_two_points(ts: TimeScale, what: str) -> None:
    if len(ts) < 2:
        raise DomainError(f"{what} needs a scale with at least two points")


def delta_derivative(f: GridFunction) -> GridFunction:
    """Forward difference quotient (f(sigma(t)) - f(t)) / mu(t).

    The result lives on the scale with the last point removed; asking it
    for a value at b raises a DomainError.
    """
    _require_two_points(f.scale, "delta_derivative")
    d = np.diff(f.values) / f.scale.gaps()
    return GridFunction(f.scale.truncated(DomainTag.KAPPA), d)


def nabla_derivative(f: GridFunction) -> GridFunction:
    """Backward difference quotient (f(t) - f(rho(t))) / nu(t), on the scale
    with the first point removed."""
    _require_two_points(f.scale, "nabla_derivative")
    d = np.diff(f.values) / f.scale.gaps()
    return GridFunction(f.scale.truncated(DomainTag.KAPPA_SUB), d)


def shift_sigma(f: GridFunction) -> GridFunction:
    """The composite f(sigma(t)); total, since sigma(b) = b."""
    v = f.values
    return GridFunction(f.scale, np.concatenate([v[1:], v[-1:]]))


def shift_rho(f: GridFunction) -> GridFunction:
    """The composite f(rho(t)); total, since rho(a) = a."""
    v = f.values
    return GridFunction(f.scale, np.concatenate([v[:1], v[:-1]]))


def delta_integral(f: GridFunction, lo: float | None = None, hi: float | None = None) -> float:
    """Sum of mu(t) * f(t) over [lo, hi) intersected with the scale.

    Exact on finite scales; defaults to the full range [a, b].
    """
    _require_two_points(f.scale, "delta_integral")
    ts = f.scale
    i_lo = 0 if lo is None else ts.index(lo)
    i_hi = len(ts) - 1 if hi is None else ts.index(hi)
    if i_lo > i_hi:
        raise DomainError("integration range has lo > hi")
    return float(np.sum(ts.gaps()[i_lo:i_hi] * f.values[i_lo:i_hi]))


def nabla_integral(f: GridFunction, lo: float | None = None, hi: float | None = None) -> float:
    """Sum of nu(t) * f(t) over (lo, hi] intersected with the scale."""
    _require_two_points(f.scale, "nabla_integral")
    ts = f.scale
    i_lo = 0 if lo is None else ts.index(lo)
    i_hi = len(ts) - 1 if hi is None else ts.index(hi)
    if i_lo > i_hi:
        raise DomainError("integration range has lo > hi")
    return float(np.sum(ts.gaps()[i_lo:i_hi] * f.values[i_lo + 1 : i_hi + 1]))


# ---------------------------------------------------------------------------
# Dubois-Reymond lemma as an executable probe
# ---------------------------------------------------------------------------


def hat_variation(ts: TimeScale, interior_index: int) -> GridFunction:
    """The variation that is 1 at one interior point and 0 elsewhere.

    These hats span every variation vanishing at both endpoints, so testing
    a linear condition against all of them tests it against the whole class.
    """
    if not 1 <= interior_index <= len(ts) - 2:
        raise DomainError(f"index {interior_index} is not interior to {ts!r}")
    v = np.zeros(len(ts))
    v[interior_index] = 1.0
    return GridFunction(ts, v)


def variation_constraint_matrix(ts: TimeScale, kind: str) -> np.ndarray:
    """Matrix of the linear functionals f -> integral of f * eta' over the
    hat-variation basis.

    Row j holds the coefficients of the j-th hat variation against the
    values of f on the derivative's domain (the scale minus b for "delta",
    minus a for "nabla").  The lemma's finite-scale content is that the
    null space of this matrix is exactly the constants.
    """
    if len(ts) < 3:
        raise DomainError("no interior points, so no admissible variations")
    n_interior = len(ts) - 2
    n_domain = len(ts) - 1
    rows = []
    for j in range(1, n_interior + 1):
        eta = hat_variation(ts, j)
        row = []
        for k in range(n_domain):
            unit = np.zeros(n_domain)
            unit[k] = 1.0
            row.append(_variation_integral(ts, unit, eta, kind))
        rows.append(row)
    return np.array(rows)


def _variation_integral(ts: TimeScale, f_domain: np.ndarray, eta: GridFunction, kind: str) -> float:
    """Integral of f * eta^Delta (delta kind) or f * eta^nabla (nabla kind),
    with f given by its values on the corresponding derivative domain."""
    if kind == "delta":
        eta_d = delta_derivative(eta)
        product = GridFunction(ts, np.append(f_domain * eta_d.values, 0.0))
        return delta_integral(product)
    if kind == "nabla":
        eta_d = nabla_derivative(eta)
        product = GridFunction(ts, np.concatenate([[0.0], f_domain * eta_d.values]))
        return nabla_integral(product)
    raise ValueError(f"kind must be 'delta' or 'nabla', got {kind!r}")


@dataclass(frozen=True)
class DuboisReymondReport:
    """Outcome of probing the Dubois-Reymond lemma on one grid function."""

    kind: str
    integrals: np.ndarray
    all_vanish: bool
    constant: bool
    witness: str | None


def dubois_reymond_probe(f: GridFunction, kind: str, tol: float = 1e-10) -> DuboisReymondReport:
    """Check the Dubois-Reymond lemma constructively.

    Computes the integral of f against the derivative of every hat
    variation vanishing at the endpoints.  If all of them vanish, the lemma
    forces f to be constant on the derivative's domain; a non-constant f
    passing all integrals would falsify this implementation (not the
    lemma) and is reported through ``witness``.
    """
    ts = f.scale
    if len(ts) < 3:
        raise DomainError("no interior points, so no admissible variations")
    if kind == "delta":
        domain_values = f.values[:-1]
    elif kind == "nabla":
        domain_values = f.values[1:]
    else:
        raise ValueError(f"kind must be 'delta' or 'nabla', got {kind!r}")

    integrals = np.array(
        [
            _variation_integral(ts, domain_values, hat_variation(ts, j), kind)
            for j in range(1, len(ts) - 1)
        ]
    )
    scale = max(1.0, float(np.max(np.abs(domain_values))))
    all_vanish = bool(np.max(np.abs(integrals)) <= tol * scale)
    spread = float(np.max(domain_values) - np.min(domain_values))
    constant = spread <= tol * scale

    witness = None
    if all_vanish and not constant:
        witness = (
            "all variation integrals vanish but values spread by "
            f"{spread:.3e}; implementation inconsistent"
        )
    elif not all_vanish:
        j = int(np.argmax(np.abs(integrals)))
        t_j = ts.points[j + 1]
        witness = f"variation at t={t_j:g} gives integral {integrals[j]:.3e}"
    return DuboisReymondReport(kind, integrals, all_vanish, constant, witness)

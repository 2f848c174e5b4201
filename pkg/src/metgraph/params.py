"""Closed-form tuning and feasibility calculus for shell-based reconstruction.

Symbols follow the usual shape parameters of an embedded metric graph:
``b`` shortest edge, ``alpha`` smallest angle (radians), ``tau`` local reach,
``xi`` global reach and ``sigma`` tube radius. All functions are pure.

The constants of the tubular sample-size bound are unknown in closed form and
are taken from the caller (default 1, which is *not* a calibrated value).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

_ACOS_TOL = 1e-12
_BISECT_RTOL = 1e-10


class InfeasibleParameters(ValueError):
    """Raised when parameters fall outside the domain of a formula."""


@dataclass(frozen=True)
class ShapeParams:
    b: float
    alpha: float
    tau: float
    xi: float
    sigma: float = 0.0

    def __post_init__(self):
        if not (self.b > 0 and self.tau > 0 and self.xi > 0):
            raise InfeasibleParameters("b, tau and xi must be positive")
        if not 0 < self.alpha <= math.pi:
            raise InfeasibleParameters("alpha must lie in (0, pi]")
        if self.sigma < 0:
            raise InfeasibleParameters("sigma must be non-negative")

    @property
    def sigma_max(self) -> float:
        """Largest tube radius for which the inner tube faces still meet."""
        return self.tau * (1.0 - math.cos(self.alpha / 2))

    def with_sigma(self, sigma: float) -> "ShapeParams":
        return replace(self, sigma=sigma)

    def scaled(self, c: float) -> "ShapeParams":
        return ShapeParams(self.b * c, self.alpha, self.tau * c, self.xi * c, self.sigma * c)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FeasibilityReport:
    delta: float
    alpha_prime: float
    r: float
    p11: float
    f_value: float
    cond9_ok: bool
    cond10_ok: bool
    cond15_ok: bool
    max_delta: float

    @property
    def ok(self) -> bool:
        return self.cond9_ok and self.cond10_ok

    def to_dict(self) -> dict:
        return asdict(self)


def alpha_prime(alpha: float, tau: float, sigma: float) -> float:
    """Angle between the inner faces of two radius-``tau`` tubes of radius ``sigma``.

    Uses the half-angle form ``2*acos(tau*cos(alpha/2)/(tau - sigma))``, which
    is algebraically identical to ``pi - acos((2(tau-s)^2 - 4 tau^2 cos^2(alpha/2))
    / (2 (tau-s)^2))`` but does not lose digits near ``sigma = 0``.
    """
    if sigma < 0 or tau <= 0:
        raise InfeasibleParameters("need tau > 0 and sigma >= 0")
    if sigma >= tau:
        raise InfeasibleParameters(f"sigma={sigma} must be below tau={tau}")
    k = tau * math.cos(alpha / 2) / (tau - sigma)
    if k > 1 + _ACOS_TOL:
        raise InfeasibleParameters(
            f"sigma={sigma} exceeds tau*(1-cos(alpha/2))={tau * (1 - math.cos(alpha / 2))}"
        )
    return 2.0 * math.acos(min(k, 1.0))


def _ap(p: ShapeParams) -> float:
    return alpha_prime(p.alpha, p.tau, p.sigma)


def _vertex_offset(p: ShapeParams, ap: float) -> float:
    # |x - s|: shift of the inner-face apex away from the true vertex
    return p.tau * math.sin(p.alpha / 2) - (p.tau - p.sigma) * math.sin(ap / 2)


def _require_open_angle(ap: float) -> None:
    if ap <= 0.0:
        raise InfeasibleParameters("alpha' = 0: noise level closes the vertex angle")


def shell_inner_radius(delta: float, params: ShapeParams) -> float:
    ap = _ap(params)
    _require_open_angle(ap)
    return delta / 2 + params.sigma + _vertex_offset(params, ap) + delta / (2 * math.sin(ap / 4))


def expansion_radius(delta: float, params: ShapeParams) -> float:
    ap = _ap(params)
    _require_open_angle(ap)
    r = shell_inner_radius(delta, params)
    return delta / 2 + _vertex_offset(params, ap) + (r + delta) / math.sin(ap / 2)


def _edge_budget(p: ShapeParams, use_b: bool = False) -> float:
    # use_b=True reads min(b, alpha*tau) as plain b (neuron-example reading)
    return p.b if use_b else min(p.b, p.alpha * p.tau)


def f_bound(params: ShapeParams, *, edge_length: float | None = None) -> float:
    """Upper bound on ``delta`` from the edge-point budget along the shortest edge.

    ``edge_length`` overrides ``min(b, alpha*tau)``; only used to compare
    readings of the published neuron example.
    """
    p = params
    ap = _ap(p)
    _require_open_angle(ap)
    s2, s4 = math.sin(ap / 2), math.sin(ap / 4)
    m = _edge_budget(p) if edge_length is None else edge_length
    num = (
        (p.tau - p.sigma) * math.sin((m - (p.alpha - ap) * p.tau) / (2 * p.tau))
        - _vertex_offset(p, ap) * (1 + 2 / s2)
        - 2 * p.sigma / s2
    )
    den = 1 + 3 / s2 + 1 / (s2 * s4)
    return num / den


def cond9(delta: float, params: ShapeParams) -> bool:
    r = shell_inner_radius(delta, params)
    return 0 < r + delta < params.xi - 2 * params.sigma


def cond10(delta: float, params: ShapeParams, f_value: float | None = None) -> bool:
    f = f_bound(params) if f_value is None else f_value
    return 0 < delta < f


def _tube_first_branch(p: ShapeParams, ap: float) -> float:
    # sign of the (tau - sigma) sin(alpha'/2) term taken from the combined
    # feasibility condition; it is what r + delta < xi - 2 sigma rearranges to
    num = p.xi - 3 * p.sigma - p.tau * math.sin(p.alpha / 2) + (p.tau - p.sigma) * math.sin(ap / 2)
    return num / (1.5 + 1 / (2 * math.sin(ap / 4)))


def tube_feasibility(params: ShapeParams) -> bool:
    """True iff the combined noise condition ``0 < min{..., f}`` holds."""
    try:
        ap = _ap(params)
        if ap <= 0.0:
            return False
        return min(_tube_first_branch(params, ap), f_bound(params)) > 0
    except InfeasibleParameters:
        return False


def max_feasible_delta(params: ShapeParams, *, edge_length: float | None = None) -> float:
    """Supremum of ``delta`` passing both reconstruction conditions, by bisection.

    Returns a value on the feasible side of the boundary, or 0 when no
    positive ``delta`` works.
    """
    f = f_bound(params, edge_length=edge_length)
    if f <= 0:
        return 0.0

    def feasible(d: float) -> bool:
        return cond9(d, params) and 0 < d < f

    lo, hi = 0.0, f
    while hi - lo > _BISECT_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def check_reconstruction_conditions(delta: float, params: ShapeParams) -> FeasibilityReport:
    ap = _ap(params)
    _require_open_angle(ap)
    f = f_bound(params)
    return FeasibilityReport(
        delta=delta,
        alpha_prime=ap,
        r=shell_inner_radius(delta, params),
        p11=expansion_radius(delta, params),
        f_value=f,
        cond9_ok=delta > 0 and cond9(delta, params),
        cond10_ok=cond10(delta, params, f),
        cond15_ok=tube_feasibility(params),
        max_delta=max_feasible_delta(params),
    )


def delta_noiseless_branches(params: ShapeParams) -> tuple[float, float]:
    """The two terms inside the noiseless ``delta`` selection (before halving)."""
    if params.sigma != 0:
        raise InfeasibleParameters("noiseless delta requires sigma = 0")
    a, tau = params.alpha, params.tau
    s2, s4 = math.sin(a / 2), math.sin(a / 4)
    first = params.xi * 2 * s4 / (3 * s4 + 1)
    second = tau * s2 * s4 / (s2 * s4 + 3 * s4 + 1) * math.sin(_edge_budget(params) / (2 * tau))
    return first, second


def delta_noiseless(params: ShapeParams) -> float:
    return 0.5 * min(delta_noiseless_branches(params))


def delta_tubular(params: ShapeParams, c0: float = 0.9) -> float:
    if not 0 < c0 < 1:
        raise InfeasibleParameters("c0 must lie in (0, 1)")
    if not tube_feasibility(params):
        raise InfeasibleParameters("noise level violates the combined feasibility condition")
    ap = _ap(params)
    return c0 * min(_tube_first_branch(params, ap), f_bound(params))


def auto_delta(params: ShapeParams, c0: float = 0.9) -> float:
    """Default scale: the noiseless selection at ``sigma = 0``, else the tubular one."""
    return delta_noiseless(params) if params.sigma == 0 else delta_tubular(params, c0)


def sigma_feasible_bound(params: ShapeParams) -> float:
    """Supremum of ``sigma`` for which :func:`tube_feasibility` holds (bisection)."""
    p0 = params.with_sigma(0.0)
    if not tube_feasibility(p0):
        return 0.0
    lo, hi = 0.0, params.sigma_max
    while hi - lo > _BISECT_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if tube_feasibility(params.with_sigma(mid)):
            lo = mid
        else:
            hi = mid
    return lo


def sample_size_noiseless(graph_length: float, a: float, delta: float, lam: float) -> int:
    """Sample size making a draw ``delta/2``-dense with probability ``>= 1 - lam``
    when the density along the graph is at least ``a``."""
    if graph_length <= 0 or a <= 0 or delta <= 0 or lam <= 0:
        raise ValueError("all arguments must be positive")
    if lam >= 1:
        raise ValueError("lam must be below 1")
    n = 4 * graph_length / (a * delta) * (math.log(8 * graph_length / delta) + math.log(1 / lam))
    return math.ceil(n)


def sample_size_tubular(graph_length: float, tau: float, sigma: float, delta: float,
                        lam: float, c_prime_d: float = 1.0) -> int:
    """Tubular-noise counterpart of :func:`sample_size_noiseless`.

    ``c_prime_d`` is a dimension-dependent constant with no known value; the
    default of 1 only fixes the shape of the curve.
    """
    if graph_length <= 0 or tau <= 0 or delta <= 0 or lam <= 0 or c_prime_d <= 0:
        raise ValueError("graph_length, tau, delta, lam and c_prime_d must be positive")
    if lam >= 1:
        raise ValueError("lam must be below 1")
    if not 0 <= sigma < min(3 * tau / 16, delta / 8):
        raise ValueError("need 0 <= sigma < min(3 tau / 16, delta / 8)")
    n = (tau * graph_length / (c_prime_d * delta * (tau - 8 * sigma))
         * (math.log(16 * graph_length / delta) + math.log(1 / lam)))
    return math.ceil(n)

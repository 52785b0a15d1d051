"""Zippers on [0,1], the address-preserving transfer map, and the p2 solver.

A two-parameter Cantor set on the unit interval is generated by the maps
``x -> p1*x`` and ``x -> p2*x + 1 - p2``.  Filling the middle gap with a third
affine map gives a three-interval zipper with nodes ``{0, p1, 1-p2, 1}``; the
order isomorphism onto the uniform zipper with nodes ``{0, 1/3, 2/3, 1}``
restricts to an address-preserving homeomorphism between the Cantor set and
the middle-third set.  Evaluating that homeomorphism (a devil's-staircase
relative) is what both the transfer map and the parameter solver run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .addresses import Address, PeriodicTail, shift_address


class ExcludedTail(ValueError):
    """The all-ones tail is outside the solvable family."""


class AdmissibilityViolation(ValueError):
    """The solved parameters violate 2*p1 + p2 < 1."""


class NoSignChange(RuntimeError):
    """Defensive: the bisection bracket failed to straddle a root."""


class ToleranceUnreachable(RuntimeError):
    """Cell widths underflow before the requested tolerance is met."""


@dataclass(frozen=True)
class CantorPair:
    """Contraction ratios of a two-map Cantor set on [0,1]."""

    p1: float
    p2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p1 < 1.0 and 0.0 < self.p2 < 1.0 and self.p1 + self.p2 < 1.0):
            raise ValueError(f"need 0 < p1, 0 < p2, p1 + p2 < 1, got ({self.p1}, {self.p2})")


MIDDLE_THIRD = CantorPair(1.0 / 3.0, 1.0 / 3.0)


@dataclass(frozen=True)
class Zipper:
    """Three increasing affine maps joining consecutive nodes of [0,1].

    The node list is ``{0, p1, 1-p2, 1}`` and every map preserves
    orientation (the all-zero signature).
    """

    nodes: tuple[float, float, float, float]

    @staticmethod
    def from_pair(pair: CantorPair) -> "Zipper":
        return Zipper((0.0, pair.p1, 1.0 - pair.p2, 1.0))

    @property
    def widths(self) -> tuple[float, float, float]:
        n = self.nodes
        return (n[1] - n[0], n[2] - n[1], n[3] - n[2])

    def locate(self, x: float) -> int:
        """Cell index of ``x``; boundary points resolve to the upper cell."""

        if x < self.nodes[1]:
            return 0
        if x < self.nodes[2]:
            return 1
        return 2

    def pull_back(self, x: float, cell: int) -> float:
        lo = self.nodes[cell]
        w = self.widths[cell]
        return (x - lo) / w


def cantor_value(addr: Address, pair: CantorPair, depth: int) -> tuple[float, float]:
    """Truncated evaluation of an address over {1,2} in the Cantor set.

    Digit 1 applies ``x -> p1*x`` and digit 2 applies ``x -> p2*x + 1 - p2``,
    innermost first, from seed 0.  The true point lies within
    ``max(p1, p2)**depth`` of the returned value.
    """

    if depth < 1:
        raise ValueError("depth must be positive")
    if not addr.alphabet() <= {1, 2}:
        raise ValueError(f"address {addr.text()} is not over the alphabet {{1,2}}")
    x = 0.0
    for i in range(depth - 1, -1, -1):
        if addr.digit(i) == 1:
            x = pair.p1 * x
        else:
            x = pair.p2 * x + (1.0 - pair.p2)
    return x, max(pair.p1, pair.p2) ** depth


_MAX_TRANSFER_STEPS = 100_000


def zipper_transfer(x: float, source: CantorPair, target: CantorPair, tol: float) -> float:
    """Order isomorphism between two three-interval zippers, evaluated at ``x``.

    Follows the cell itinerary of ``x`` in the source zipper and replays it in
    the target zipper until the target cell is narrower than ``tol``.  The
    endpoints map exactly; the result is monotone nondecreasing in ``x``.
    """

    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    src = Zipper.from_pair(source)
    dst = Zipper.from_pair(target)
    lo = 0.0
    width = 1.0
    cur = x
    for _ in range(_MAX_TRANSFER_STEPS):
        if width <= tol:
            break
        cell = src.locate(cur)
        cur = src.pull_back(cur, cell)
        if cur <= 0.0:
            cur = 0.0
        elif cur >= 1.0:
            cur = 1.0
        lo = lo + width * dst.nodes[cell]
        width = width * dst.widths[cell]
        if width == 0.0 or not math.isfinite(lo):
            raise ToleranceUnreachable(f"target cell width underflowed before reaching tol={tol}")
        if cur == 0.0:
            return lo
        if cur == 1.0:
            return lo + width
    else:
        raise ToleranceUnreachable(f"no convergence to tol={tol} within {_MAX_TRANSFER_STEPS} steps")
    return min(max(lo + width * cur, 0.0), 1.0)


def _middle_third_target(tail: Address, precision: float) -> float:
    """Value of the address ``1 . tail`` in the middle-third Cantor set."""

    depth = max(8, int(math.ceil(math.log(precision) / math.log(1.0 / 3.0))) + 2)
    horizon = tail.horizon
    if horizon is not None:
        depth = min(depth, horizon + 1)
    full = Address((1,) + tail.prefix, tail.tail)
    value, _ = cantor_value(full, MIDDLE_THIRD, depth)
    return value


def solve_p2(p1: float, tail: Address, tol: float = 1e-10) -> float:
    """Find p2 so that the third contact point lands on the address ``31 . tail``.

    The third vertex of the equilateral contact triangle built on ``p1`` and
    ``1 + p2*e^{2i*pi/3}`` projects through the top corner map onto the base
    interval at ``1 - p2/p1``.  Requiring that projection to carry the Cantor
    address ``1 . tail`` pins p2 as the root of

        g(p2) = phi_{p1,p2}(1 - p2/p1) - t*,

    where phi is the transfer onto the middle-third zipper and t* is the
    middle-third value of ``1 . tail``.  g is continuous but staircase-like,
    so the root is bracketed and bisected rather than Newton-stepped.
    """

    if not (0.0 < p1 < 0.5):
        raise ValueError(f"p1 must lie in (0, 1/2), got {p1}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if not tail.alphabet() <= {1, 2}:
        raise ValueError(f"tail {tail.text()} is not over the alphabet {{1,2}}")
    canon = tail.canonical()
    if isinstance(canon.tail, PeriodicTail) and canon.prefix == () and canon.tail.period == (1,):
        raise ExcludedTail("the constant tail 111... is excluded")

    phi_tol = min(tol * 1e-2, 1e-12)
    t_star = _middle_third_target(tail, phi_tol)
    if t_star <= 0.0:
        raise ExcludedTail("tail evaluates to the excluded endpoint 0")

    def g(p2: float) -> float:
        pair = CantorPair(p1, p2)
        return zipper_transfer(1.0 - p2 / p1, pair, MIDDLE_THIRD, phi_tol) - t_star

    lo, hi = 1e-12, p1
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0.0 >= g_hi):
        raise NoSignChange(f"no sign change on ({lo}, {hi}]: g(lo)={g_lo}, g(hi)={g_hi}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-15:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    p2 = 0.5 * (lo + hi)
    residual = abs(g(p2))
    if residual >= tol:
        raise ToleranceUnreachable(f"bisection stalled with residual {residual} >= tol {tol}")
    if 2.0 * p1 + p2 >= 1.0:
        raise AdmissibilityViolation(f"2*p1 + p2 = {2 * p1 + p2} >= 1 for p1={p1}")
    return p2


def cantor_itinerary(x: float, pair: CantorPair, digits: int) -> tuple[int, ...]:
    """Cantor digits (1/2) of ``x`` read off the zipper itinerary.

    Middle-cell visits mean ``x`` fell into a gap; they are reported as digit
    0 so callers can detect escape from the Cantor set.
    """

    z = Zipper.from_pair(pair)
    out = []
    cur = x
    for _ in range(digits):
        cell = z.locate(cur)
        out.append({0: 1, 1: 0, 2: 2}[cell])
        cur = z.pull_back(cur, cell)
        cur = min(max(cur, 0.0), 1.0)
    return tuple(out)

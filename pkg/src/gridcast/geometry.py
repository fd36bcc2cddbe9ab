"""Geometric primitives and the geographic link-weight formulas."""

import math
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Position:
    x: float
    y: float


def distance(p1: Position, p2: Position) -> float:
    """Euclidean distance between two positions."""
    return math.hypot(p1.x - p2.x, p1.y - p2.y)


def cumulative_distance(v: Position, dests) -> float:
    """Sum of distances from v to every destination position.

    dests is any iterable of positions; summation follows iteration
    order, so pass a deterministically ordered sequence.
    """
    return sum(distance(v, w) for w in dests)


def cumulative_progress(v1: Position, v2: Position, dests) -> float:
    """How much moving from v1 to v2 advances toward the destinations.

    Positive when v2 is cumulatively closer, negative when the hop
    moves away. Antisymmetric in (v1, v2).
    """
    dests = list(dests)
    return cumulative_distance(v1, dests) - cumulative_distance(v2, dests)


@dataclass(frozen=True)
class DelayScale:
    """Min-max rescaling of link delays onto [0, top].

    Makes the delay term of the composite edge weight commensurate with
    the progress term. Degenerate ranges (all delays equal) map to 0.
    """

    lo: float
    hi: float
    top: float

    def apply(self, delay: float) -> float:
        if self.hi <= self.lo:
            return 0.0
        return (delay - self.lo) / (self.hi - self.lo) * self.top


def edge_weight_f(new_cp: float, delay: float, a_coef: float, b_coef: float,
                  delay_scale: DelayScale) -> float:
    """Composite edge weight: a_coef * new_cp + b_coef * scaled delay."""
    return a_coef * new_cp + b_coef * delay_scale.apply(delay)

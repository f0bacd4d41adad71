"""Exact rational arithmetic and concave piecewise-linear functions.

Rationals are ``fractions.Fraction``: always in lowest terms with positive
denominator, arbitrary-precision integers, no rounding anywhere.

``PiecewiseLinearFn`` models the continuous piecewise-linear functions on
[-1, oo) used as reindexing functions between the two standard numberings of
a ramification filtration, together with their composites and inverses.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError, NotInvertible

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rational(value: RationalLike, den: int | None = None) -> Fraction:
    """Coerce ints / strings / fractions to an exact Fraction."""
    if den is not None:
        return Fraction(value, den)
    return Fraction(value)


class _InfinityType:
    """Marker for +infinity; never participates in arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ramislope-infinity")

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self


INFINITY = _InfinityType()


DOMAIN_START = Fraction(-1)


class PiecewiseLinearFn:
    """Continuous piecewise-linear function on [-1, oo).

    Stored as breakpoints ``b_0 = -1 < b_1 < ... < b_{k-1}`` with one segment
    slope per interval ``[b_i, b_{i+1})`` (the last interval is unbounded) and
    the anchor value at -1.  The stored form is normalized: adjacent segments
    with equal slope are merged, so equality of values implies structural
    equality.  Slopes must be nonnegative; every reindexing function this
    package constructs has strictly positive slopes and is therefore
    invertible.
    """

    __slots__ = ("breakpoints", "slopes", "anchor", "_values")

    def __init__(
        self,
        breakpoints: Sequence[RationalLike],
        slopes: Sequence[RationalLike],
        anchor: RationalLike = DOMAIN_START,
    ):
        bps = tuple(Fraction(b) for b in breakpoints)
        sls = tuple(Fraction(s) for s in slopes)
        if not bps or bps[0] != DOMAIN_START:
            raise DomainError("breakpoints must start at -1")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if len(sls) != len(bps):
            raise DomainError("need exactly one slope per segment")
        if any(s < 0 for s in sls):
            raise DomainError("segment slopes must be nonnegative")
        # merge adjacent segments of equal slope
        norm_b = [bps[0]]
        norm_s = [sls[0]]
        for b, s in zip(bps[1:], sls[1:]):
            if s == norm_s[-1]:
                continue
            norm_b.append(b)
            norm_s.append(s)
        self.breakpoints = tuple(norm_b)
        self.slopes = tuple(norm_s)
        self.anchor = Fraction(anchor)
        # value of the function at each breakpoint
        values = [self.anchor]
        for i in range(1, len(self.breakpoints)):
            step = self.slopes[i - 1] * (self.breakpoints[i] - self.breakpoints[i - 1])
            values.append(values[-1] + step)
        self._values = tuple(values)

    # -------------------------------------------------------- constructors

    @classmethod
    def identity(cls) -> "PiecewiseLinearFn":
        return cls((DOMAIN_START,), (Fraction(1),), DOMAIN_START)

    # ------------------------------------------------------------- queries

    def __call__(self, x: RationalLike) -> Fraction:
        x = Fraction(x)
        if x < DOMAIN_START:
            raise DomainError(f"{x} is below the domain start -1")
        i = self._segment_index(x)
        return self._values[i] + self.slopes[i] * (x - self.breakpoints[i])

    def _segment_index(self, x: Fraction) -> int:
        # rightmost breakpoint <= x; len(breakpoints) stays tiny, scan suffices
        i = 0
        for j in range(1, len(self.breakpoints)):
            if self.breakpoints[j] <= x:
                i = j
            else:
                break
        return i

    def right_slope_at(self, x: Fraction) -> Fraction:
        return self.slopes[self._segment_index(Fraction(x))]

    def is_concave(self) -> bool:
        return all(s1 >= s2 for s1, s2 in zip(self.slopes, self.slopes[1:]))

    def is_identity_on_initial_segment(self) -> bool:
        """True when the function agrees with x on [-1, 0]."""
        return self.anchor == DOMAIN_START and self(Fraction(0)) == 0

    def is_strictly_increasing(self) -> bool:
        return all(s > 0 for s in self.slopes)

    # ---------------------------------------------------------- structure

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearFn):
            return NotImplemented
        return (
            self.breakpoints == other.breakpoints
            and self.slopes == other.slopes
            and self.anchor == other.anchor
        )

    def __hash__(self):
        return hash((self.breakpoints, self.slopes, self.anchor))

    def __repr__(self):
        parts = ", ".join(
            f"[{b}:{s}]" for b, s in zip(self.breakpoints, self.slopes)
        )
        return f"PiecewiseLinearFn(anchor={self.anchor}, {parts})"

    # ---------------------------------------------------------- operations

    def compose(self, inner: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        """Exact composite self(inner(x)) with merged breakpoints."""
        if inner.anchor < self.breakpoints[0]:
            raise DomainError(
                "range of the inner function starts below the outer domain"
            )
        cuts = set(inner.breakpoints)
        # preimages under `inner` of the outer breakpoints
        for c in self.breakpoints:
            x = inner.preimage(c)
            if x is not None:
                cuts.add(x)
        points = sorted(cuts)
        slopes = []
        for i, x0 in enumerate(points):
            # sample strictly inside the segment to pick up the right slopes
            probe = (x0 + points[i + 1]) / 2 if i + 1 < len(points) else x0 + 1
            s_in = inner.right_slope_at(x0)
            s_out = self.right_slope_at(inner(probe))
            slopes.append(s_in * s_out)
        return PiecewiseLinearFn(points, slopes, self(inner.anchor))

    def preimage(self, y: RationalLike) -> Fraction | None:
        """Smallest x with self(x) = y, or None when y is below the range."""
        y = Fraction(y)
        if y < self.anchor:
            return None
        for i in range(len(self.breakpoints)):
            v0 = self._values[i]
            v1 = self._values[i + 1] if i + 1 < len(self._values) else None
            if v1 is not None and y >= v1:
                continue
            if self.slopes[i] == 0:
                if y == v0:
                    return self.breakpoints[i]
                return None
            return self.breakpoints[i] + (y - v0) / self.slopes[i]
        return None

    def inverse(self) -> "PiecewiseLinearFn":
        """Exact inverse; composing with it gives the identity."""
        if not self.is_strictly_increasing():
            raise NotInvertible("a zero segment slope admits no inverse")
        if self.anchor != DOMAIN_START:
            raise NotInvertible(
                "inverse only defined for functions fixing -1 (domain [-1, oo))"
            )
        return PiecewiseLinearFn(
            self._values, tuple(1 / s for s in self.slopes), DOMAIN_START
        )


# Spec-level operation names ------------------------------------------------

def pl_eval(f: PiecewiseLinearFn, x: RationalLike) -> Fraction:
    """Exact value of f at x >= -1."""
    return f(x)


def pl_compose(f: PiecewiseLinearFn, g: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """Exact composite f o g."""
    return f.compose(g)


def pl_invert(f: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """Exact inverse of a strictly increasing f with f(-1) = -1."""
    return f.inverse()


def pl_from_segments(
    segments: Iterable[tuple[RationalLike, RationalLike]],
    anchor: RationalLike = DOMAIN_START,
) -> PiecewiseLinearFn:
    """Build a function from (start, slope) pairs; first start must be -1."""
    starts, slopes = zip(*segments)
    return PiecewiseLinearFn(starts, slopes, anchor)

"""Ramification filtrations in both numberings, with reindexing functions.

The lower filtration is computed from first principles: for each
automorphism sigma the integer i(sigma) = v(sigma(u) - u) is read off the
substitution series, and G_i = {sigma : i(sigma) >= i + 1}.  The increasing
reindexing function phi (slope 1/[G_0 : G_i] past each integer i, identity
on [-1, 0]) and its inverse psi convert to the upper numbering, which is the
one compatible with quotients.  A trivial extension has jump list {0} by
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAbelian, NotSubgroup
from .exact_numerics import INFINITY, PiecewiseLinearFn, pl_invert
from .extensions import Automorphism, CoverDescription, GaloisGroup
from .series_fields import LaurentSeries


def ramification_number(cover: CoverDescription, sigma: Automorphism):
    """i(sigma) = v(sigma(u) - u); the identity gets the infinity marker."""
    if sigma.is_identity():
        return INFINITY
    sub = sigma.substitution
    u = LaurentSeries.uniformizer(cover.field, sub.abs_prec - 1)
    return (sub - u).valuation()


def _build_phi(
    jumps: list[int], chain: list[frozenset], group_order: int
) -> PiecewiseLinearFn:
    if not jumps or group_order == 1:
        return PiecewiseLinearFn.identity()
    breakpoints = [Fraction(-1)] + [Fraction(j) for j in jumps]
    slopes = [Fraction(1)]
    for t in range(1, len(jumps)):
        slopes.append(Fraction(len(chain[t]), group_order))
    slopes.append(Fraction(1, group_order))
    return PiecewiseLinearFn(breakpoints, slopes)


class RamificationFiltration:
    """Lower-numbering data of a Galois cover plus the derived upper data."""

    def __init__(self, cover: CoverDescription, group: GaloisGroup, i_values):
        self.cover = cover
        self.group = group
        self.i_values = tuple(i_values)
        finite = sorted({v for v in self.i_values if v is not INFINITY})
        if finite and finite[0] < 1:
            raise ValueError("cover is not totally ramified: some i(sigma) < 1")
        if group.order == 1:
            self.lower_jumps = [0]
            self.subgroup_chain = [frozenset({0})]
        else:
            self.lower_jumps = [v - 1 for v in finite]
            self.subgroup_chain = [
                self.subgroup_at_lower(j) for j in self.lower_jumps
            ]
        self.phi = _build_phi(self.lower_jumps, self.subgroup_chain, group.order)
        self.psi = pl_invert(self.phi)
        self.upper_jumps = [self.phi(Fraction(j)) for j in self.lower_jumps]

    # ------------------------------------------------------------- queries

    def subgroup_at_lower(self, i: int) -> frozenset:
        """G_i = {sigma : i(sigma) >= i + 1}."""
        if i <= 0:
            return frozenset(range(self.group.order))
        return frozenset(
            idx
            for idx, v in enumerate(self.i_values)
            if v is INFINITY or v >= i + 1
        )

    def group_at_upper(self, r: Fraction) -> frozenset:
        """G^r computed through psi (G_x = G_ceil(x) for real x > 0)."""
        r = Fraction(r)
        if r <= 0:
            return frozenset(range(self.group.order))
        return self.subgroup_at_lower(math.ceil(self.psi(r)))

    def group_after_upper(self, r: Fraction) -> frozenset:
        """G^{r+}: the union of G^{r'} over r' > r."""
        r = Fraction(r)
        if r < 0:
            return frozenset(range(self.group.order))
        return self.subgroup_at_lower(math.floor(self.psi(r)) + 1)

    @property
    def highest_upper_jump(self) -> Fraction:
        return max(self.upper_jumps) if self.upper_jumps else Fraction(0)

    def check_normality(self) -> bool:
        """Every G^r and G^{r+} is normal in the full group."""
        levels = {frozenset(range(self.group.order))}
        for r in self.upper_jumps:
            levels.add(self.group_at_upper(Fraction(r)))
            levels.add(self.group_after_upper(Fraction(r)))
        return all(self.group.is_normal(h) for h in levels)

    def __repr__(self):
        return (
            f"RamificationFiltration(order={self.group.order}, "
            f"lower={self.lower_jumps}, upper={[str(u) for u in self.upper_jumps]})"
        )


def lower_filtration(cover: CoverDescription, group: GaloisGroup) -> RamificationFiltration:
    """Compute i(sigma) for every element and assemble the filtration."""
    i_values = [ramification_number(cover, el) for el in group.elements]
    return RamificationFiltration(cover, group, i_values)


def herbrand_phi(filtration: RamificationFiltration) -> PiecewiseLinearFn:
    """The concave reindexing function phi (psi is stored alongside)."""
    return filtration.phi


def upper_jumps(filtration: RamificationFiltration) -> list[Fraction]:
    """The r where the upper filtration strictly drops ({0} when trivial)."""
    return list(filtration.upper_jumps)


def subgroup_filtration(
    filtration: RamificationFiltration, subgroup
) -> tuple[RamificationFiltration, tuple[int, ...]]:
    """The filtration of the subcover fixing the subfield of ``subgroup``.

    The same uniformizer measures both covers, so i(sigma) restricts; this
    realizes the compatibility of the lower numbering with subgroups.
    Returns the subgroup filtration and the index embedding into the parent.
    """
    sub_group, embed = filtration.group.restricted_to(subgroup)
    i_values = [filtration.i_values[g] for g in embed]
    return RamificationFiltration(filtration.cover, sub_group, i_values), embed


@dataclass
class CosetFiltration:
    """The induced filtration on the coset space G/H: r -> image of G^r."""

    ambient: RamificationFiltration
    subgroup: frozenset
    jumps: list[tuple[Fraction, frozenset]]  # (jump r, coset image of G^r)

    @property
    def highest_jump(self) -> Fraction:
        return max((r for r, _ in self.jumps), default=Fraction(0))

    def image_at(self, r: Fraction) -> frozenset:
        group = self.ambient.group
        return frozenset(
            group.left_coset(g, self.subgroup)
            for g in self.ambient.group_at_upper(r)
        )

    def image_after(self, r: Fraction) -> frozenset:
        group = self.ambient.group
        return frozenset(
            group.left_coset(g, self.subgroup)
            for g in self.ambient.group_after_upper(r)
        )

    def is_separated(self) -> bool:
        last = max((r for r, _ in self.jumps), default=Fraction(0))
        identity_coset = self.ambient.group.left_coset(0, self.subgroup)
        return self.image_after(last) == frozenset({identity_coset})


def coset_filtration(
    filtration: RamificationFiltration, subgroup
) -> CosetFiltration:
    """Jumps of r -> q(G^r) on the coset space G/H."""
    H = frozenset(subgroup)
    if not filtration.group.is_subgroup(H):
        raise NotSubgroup("the given element set is not a subgroup")
    result = CosetFiltration(filtration, H, [])
    candidates = sorted(set(Fraction(r) for r in filtration.upper_jumps) | {Fraction(0)})
    jumps = []
    for r in candidates:
        at = result.image_at(r)
        after = result.image_after(r)
        if after < at:
            jumps.append((r, at))
    if not jumps:
        jumps = [(Fraction(0), result.image_at(Fraction(0)))]  # trivial quotient
    result.jumps = jumps
    return result


def hasse_arf_check(filtration: RamificationFiltration) -> bool:
    """Integrality of the upper jumps; requires an abelian group."""
    if not filtration.group.is_abelian():
        raise NotAbelian("integrality check requires an abelian group")
    return all(Fraction(r).denominator == 1 for r in filtration.upper_jumps)

"""Finite covers of the trait Spec F_q[[pi]] with explicit series data.

Every cover is totally ramified over a possibly enlarged coefficient field
and is described inside the top field F_q((u)) by
  - the embedding: the series expressing pi (the base uniformizer) in u,
  - one substitution series per automorphism: the image of u.

Tame covers take u^n = pi.  Wild degree-p covers solve y^p - y = r(s) over a
base Laurent field F_q((s)) by a fixed-point computation for the pair
(t, s) as series in the new uniformizer u = y^alpha s^beta, where
t = 1/y and -alpha*m + beta*p = 1 for the break m of r:

    t = c0^(-beta) u^m (1 + rho(s))^(-beta) (1 - t^(p-1))^beta
    s = [c0 t^p (1 + rho(s)) (1 - t^(p-1))^(-1)]^X  (u t^alpha)^Y

with r = c0 s^(-m) (1 + rho) and X m + Y beta = 1.  Both relations follow by
eliminating y from y^p - y = r(s) and u = y^alpha s^beta; the solution is
verified against the defining equations before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import (
    FieldTooSmall,
    NotClosed,
    NotGalois,
    NotSubgroup,
    PrecisionExhausted,
    TameDegreeError,
    UnsupportedCompositum,
    WildBreakError,
    ZeroCoefficient,
)
from .series_fields import (
    DEFAULT_PRECISION,
    FiniteField,
    LaurentSeries,
    Substituter,
)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def minimal_tame_field(p: int, n: int) -> int:
    """Smallest q = p^d whose multiplicative group has order divisible by n."""
    if math.gcd(n, p) != 1:
        raise TameDegreeError(f"tame degree {n} is divisible by p={p}")
    q = p
    while (q - 1) % n != 0:
        q *= p
    return q


@dataclass
class Automorphism:
    """A K-automorphism given by the image of the uniformizer u."""

    substitution: LaurentSeries
    label: tuple = ()

    def is_identity(self) -> bool:
        s = self.substitution
        return (
            s.offset == 1
            and s.coeffs == (1,)
        )


@dataclass
class CoverFactor:
    """An intermediate Galois subcover M/K living inside the parent cover."""

    cover: "CoverDescription"
    group: "GaloisGroup"
    embedding: LaurentSeries      # M's uniformizer as a series in the parent u
    projection: tuple[int, ...]   # parent element index -> element of Gal(M/K)
    kernel: frozenset             # Gal(L/M) inside the parent group


class CoverDescription:
    """A finite, totally ramified cover of the base trait."""

    def __init__(
        self,
        field: FiniteField,
        embedding: LaurentSeries,
        degree: int,
        kind: str,
        recipe: tuple,
        precision: int,
        factors: tuple[CoverFactor, ...] = (),
    ):
        v = embedding.valuation()
        if v != degree:
            raise ValueError(
                f"embedding valuation {v} does not match the degree {degree}"
            )
        self.field = field
        self.embedding = embedding
        self.degree = degree
        self.kind = kind
        self.recipe = recipe
        self.precision = precision
        self.factors = factors
        self.separable = not embedding.derivative().is_zero()

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def separable_degree(self) -> int:
        return self.degree if self.separable else 1

    def __repr__(self):
        return (
            f"CoverDescription({self.kind}, degree={self.degree}, "
            f"q={self.q}, precision={self.precision})"
        )


class GaloisGroup:
    """Finite automorphism group with a fully verified composition table."""

    def __init__(self, elements: Sequence[Automorphism], table: Sequence[Sequence[int]]):
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        n = len(self.elements)
        if not self.elements[0].is_identity():
            raise NotClosed("element 0 must be the identity")
        for i in range(n):
            if sorted(self.table[i]) != list(range(n)):
                raise NotClosed("composition table row is not a permutation")
            if sorted(row[i] for row in self.table) != list(range(n)):
                raise NotClosed("composition table column is not a permutation")
            if self.table[0][i] != i or self.table[i][0] != i:
                raise NotClosed("identity does not act trivially")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise NotClosed("composition table is not associative")
        self._inverses = [0] * n
        for i in range(n):
            matches = [j for j in range(n) if self.table[i][j] == 0]
            if len(matches) != 1:
                raise NotClosed("inverses are not unique")
            self._inverses[i] = matches[0]
        self.orders = [self._order(i) for i in range(n)]

    def _order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.table[cur][i]
            k += 1
        return k

    @property
    def order(self) -> int:
        return len(self.elements)

    def compose(self, i: int, j: int) -> int:
        """Index of sigma_i o sigma_j (apply j first)."""
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self._inverses[i]

    def exponent(self) -> int:
        e = 1
        for o in self.orders:
            e = e * o // math.gcd(e, o)
        return e

    def is_abelian(self) -> bool:
        n = self.order
        return all(
            self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i)
        )

    # ----------------------------------------------------------- subgroups

    def is_subgroup(self, indices: Iterable[int]) -> bool:
        s = frozenset(indices)
        if 0 not in s:
            return False
        return all(self.table[i][j] in s for i in s for j in s)

    def subgroup_generated(self, gens: Iterable[int]) -> frozenset:
        closure = {0}
        frontier = set(gens) - closure
        closure |= frontier
        while frontier:
            new = set()
            for g in list(closure):
                for h in frontier:
                    for x in (self.table[g][h], self.table[h][g]):
                        if x not in closure:
                            new.add(x)
            closure |= new
            frontier = new
        return frozenset(closure)

    def all_subgroups(self) -> list[frozenset]:
        found = {frozenset({0}), frozenset(range(self.order))}
        singles = {self.subgroup_generated([g]) for g in range(self.order)}
        found |= singles
        for a in range(self.order):
            for b in range(a + 1, self.order):
                found.add(self.subgroup_generated([a, b]))
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def left_coset(self, g: int, sub: frozenset) -> frozenset:
        return frozenset(self.table[g][h] for h in sub)

    def left_cosets(self, sub: frozenset) -> list[frozenset]:
        seen = []
        covered = set()
        for g in range(self.order):
            if g in covered:
                continue
            c = self.left_coset(g, sub)
            seen.append(c)
            covered |= c
        return seen

    def conjugate_subgroup(self, g: int, sub: frozenset) -> frozenset:
        gi = self.inverse(g)
        return frozenset(self.table[self.table[g][h]][gi] for h in sub)

    def is_normal(self, sub: frozenset) -> bool:
        return all(self.conjugate_subgroup(g, sub) == sub for g in range(self.order))

    def restricted_to(self, indices: Iterable[int]) -> tuple["GaloisGroup", tuple[int, ...]]:
        """Materialize a subgroup as a group of its own; returns (group, embedding)."""
        sub = sorted(set(indices))
        if not self.is_subgroup(sub):
            raise NotSubgroup(f"{sub} is not closed under composition")
        pos = {g: i for i, g in enumerate(sub)}
        elements = [self.elements[g] for g in sub]
        table = [[pos[self.table[g][h]] for h in sub] for g in sub]
        return GaloisGroup(elements, table), tuple(sub)


# --------------------------------------------------------------------------
# group construction from candidate substitution series
# --------------------------------------------------------------------------

def _series_key(s: LaurentSeries, lo: int, hi: int) -> tuple:
    return tuple(s.coefficient(e) for e in range(lo, hi))


def automorphism_group(
    cover: CoverDescription, candidates: Sequence[Automorphism]
) -> GaloisGroup:
    """Close the candidates under composition and verify the group axioms.

    Raises NotGalois when fewer candidates than the separable degree are
    supplied, NotClosed when a composite matches no candidate, and
    PrecisionExhausted when two candidates cannot be told apart on the
    current window.
    """
    if len(candidates) < cover.separable_degree:
        raise NotGalois(
            f"{len(candidates)} candidates for separable degree {cover.separable_degree}"
        )
    subs = [c.substitution for c in candidates]
    composites: list[list[LaurentSeries]] = []
    substituters = [Substituter(s) for s in subs]
    for i, sub_i in enumerate(substituters):
        # verify the candidate fixes the embedded base
        image = sub_i.substitute(cover.embedding)
        if not image == cover.embedding:
            raise NotGalois(
                f"candidate {candidates[i].label} does not fix the embedding"
            )
        composites.append([sub_i.substitute(s_j) for s_j in subs])
    hi = min(
        min(s.abs_prec for s in subs),
        min(c.abs_prec for row in composites for c in row),
    )
    lo = 1
    if hi - lo < 8:
        raise PrecisionExhausted("window too small to separate automorphisms")
    keys = {}
    for idx, s in enumerate(subs):
        k = _series_key(s, lo, hi)
        if k in keys:
            raise PrecisionExhausted(
                "two automorphism candidates agree on the whole window"
            )
        keys[k] = idx
    identity_idx = keys.get(
        tuple(1 if e == 1 else 0 for e in range(lo, hi))
    )
    if identity_idx is None:
        raise NotGalois("no identity among the candidates")
    # put the identity first
    order = [identity_idx] + [i for i in range(len(subs)) if i != identity_idx]
    pos = {old: new for new, old in enumerate(order)}
    table = [[0] * len(subs) for _ in range(len(subs))]
    for i in range(len(subs)):
        for j in range(len(subs)):
            k = keys.get(_series_key(composites[i][j], lo, hi))
            if k is None:
                raise NotClosed(
                    f"composite of {candidates[i].label} and {candidates[j].label} "
                    "matches no candidate"
                )
            table[pos[i]][pos[j]] = pos[k]
    elements = [candidates[i] for i in order]
    return GaloisGroup(elements, table)


# --------------------------------------------------------------------------
# wild layer: solve y^p - y = rhs(s) over a Laurent base
# --------------------------------------------------------------------------

@dataclass
class _WildLayer:
    alpha: int
    beta: int
    break_exponent: int
    t: LaurentSeries        # 1/y as a series in the new uniformizer u
    base: LaurentSeries     # base uniformizer s as a series in u
    unit_at_base: LaurentSeries  # 1 + rho evaluated at s(u)


def _wild_layer(field: FiniteField, rhs: LaurentSeries, precision: int) -> _WildLayer:
    p = field.p
    m = -rhs.valuation()
    if m <= 0 or math.gcd(m, p) != 1:
        raise WildBreakError(f"break exponent {m} must be positive and prime to p")
    c0 = rhs.leading_coefficient()
    unit = rhs.shift(m).scalar_mul(field.inv(c0))  # 1 + rho, a unit series in s
    rho_is_zero = unit.coeffs == (1,)

    alpha = (-pow(m, -1, p)) % p
    beta = (1 + alpha * m) // p
    g, x_co, y_co = _xgcd(m, beta)
    assert g == 1, "break and beta are always coprime"

    u = LaurentSeries.uniformizer(field, precision + m + p)
    one = LaurentSeries.constant(field, 1, u.abs_prec)
    a_lead = field.pow(c0, -beta)

    def one_minus_t_pow(t):
        return one - t ** (p - 1)

    t = (u**m).scalar_mul(a_lead)
    s = None
    unit_at_s = one
    max_iter = precision + m + p + 16
    for _ in range(max_iter):
        t_new = (u**m).scalar_mul(a_lead) * (unit_at_s ** (-beta)) * (
            one_minus_t_pow(t) ** beta
        )
        s_new = (
            (t_new ** (p * x_co + alpha * y_co))
            * (unit_at_s**x_co)
            * (one_minus_t_pow(t_new) ** (-x_co))
            * (u**y_co)
        ).scalar_mul(field.pow(c0, x_co))
        stable = t_new == t and (s is not None and s_new == s)
        t = t_new
        s = s_new
        if not rho_is_zero:
            unit_at_s = unit.substitute(s)
        if stable:
            break
    else:
        raise RuntimeError("uniformizer fixed point failed to stabilize")

    # verify the defining relations on the full window
    lhs = (t**p) * rhs.substitute(s) + t ** (p - 1) - one
    if not lhs.is_zero():
        raise RuntimeError("wild layer verification failed: defining equation")
    rel = s**beta - u * t**alpha
    if not rel.is_zero():
        raise RuntimeError("wild layer verification failed: uniformizer relation")
    return _WildLayer(alpha, beta, m, t, s, unit_at_s)


def _wild_substitutions(
    field: FiniteField, layer: _WildLayer, precision: int
) -> list[LaurentSeries]:
    """Substitution series u -> u (1 + c t)^alpha for c in the prime subfield."""
    u = LaurentSeries.uniformizer(field, precision + layer.break_exponent + field.p)
    out = []
    one = LaurentSeries.constant(field, 1, u.abs_prec)
    for c in range(field.p):
        if c == 0:
            out.append(u)
        else:
            out.append(u * (one + layer.t.scalar_mul(c)) ** layer.alpha)
    return out


def _frobenius_power(s: LaurentSeries, n: int = 1) -> LaurentSeries:
    """p^n-th power of a series: Frobenius on coefficients, exponents scaled."""
    field = s.field
    scale = field.p**n
    terms = {}
    for i, c in enumerate(s.coeffs):
        terms[(s.offset + i) * scale] = field.pow(c, scale)
    return LaurentSeries.from_terms(field, terms, s.abs_prec * scale)


def _artin_schreier_reduce(rhs: LaurentSeries) -> tuple[LaurentSeries, LaurentSeries]:
    """Shift rhs by p-th powers until its polar part has break prime to p.

    Returns (reduced, w) with reduced = rhs - (w^p - w).
    """
    field = rhs.field
    p = field.p
    w = LaurentSeries.zero(field, rhs.abs_prec)
    current = rhs
    while True:
        v = current.valuation_lower_bound()
        if current.is_zero() or v >= 0:
            raise UnsupportedCompositum(
                "Artin-Schreier datum reduces to an unramified extension"
            )
        if (-v) % p != 0:
            return current, w
        c = current.leading_coefficient()
        step = LaurentSeries.from_terms(
            field, {v // p: field.pth_root(c)}, current.abs_prec
        )
        w = w + step
        current = current - (_frobenius_power(step) - step)


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------

def _check_base(p: int, q: int) -> FiniteField:
    field = FiniteField.of_order(q)
    if field.p != p:
        raise ValueError(f"q={q} is not a power of p={p}")
    return field


def make_trivial(p: int, q: int, precision: int = DEFAULT_PRECISION):
    """The identity cover."""
    field = _check_base(p, q)
    u = LaurentSeries.uniformizer(field, precision)
    cover = CoverDescription(
        field, u, 1, "trivial", ("trivial", p, q), precision
    )
    group = automorphism_group(cover, [Automorphism(u, ("id",))])
    return cover, group


def make_kummer(p: int, q: int, n: int, precision: int = DEFAULT_PRECISION):
    """Tame cover u^n = pi with the roots of unity acting."""
    field = _check_base(p, q)
    if n < 1:
        raise TameDegreeError("degree must be positive")
    if math.gcd(n, p) != 1:
        raise TameDegreeError(f"tame degree {n} is divisible by p={p}")
    if n == 1:
        return make_trivial(p, q, precision)
    zeta = field.primitive_root_of_unity(n)
    u = LaurentSeries.uniformizer(field, precision + n)
    cover = CoverDescription(
        field, u**n, n, "kummer", ("kummer", p, q, n), precision
    )
    candidates = [
        Automorphism(u.scalar_mul(field.pow(zeta, i)), ("kummer", i)) for i in range(n)
    ]
    return cover, automorphism_group(cover, candidates)


def make_artin_schreier(
    p: int, q: int, m: int, a: int, precision: int = DEFAULT_PRECISION
):
    """Wild degree-p cover defined by y^p - y = a pi^(-m), gcd(m, p) = 1."""
    field = _check_base(p, q)
    if m < 1 or m % p == 0:
        raise WildBreakError(f"break {m} must be positive and prime to p={p}")
    if a % q == 0:
        raise ZeroCoefficient("coefficient a must be nonzero")
    a = a % q
    rhs = LaurentSeries.from_terms(field, {-m: a}, precision + m + p)
    layer = _wild_layer(field, rhs, precision)
    cover = CoverDescription(
        field,
        layer.base,
        p,
        "artin_schreier",
        ("artin_schreier", p, q, m, a),
        precision,
    )
    subs = _wild_substitutions(field, layer, precision)
    candidates = [Automorphism(s, ("as", c)) for c, s in enumerate(subs)]
    return cover, automorphism_group(cover, candidates)


def make_frobenius_base_extension(
    p: int, q: int, n: int, precision: int = DEFAULT_PRECISION
):
    """The purely inseparable base map of degree p^n (no automorphisms)."""
    field = _check_base(p, q)
    u = LaurentSeries.uniformizer(field, precision + p**n)
    cover = CoverDescription(
        field,
        u ** (p**n),
        p**n,
        "inseparable_base_change",
        ("frobenius", p, q, n),
        precision,
    )
    return cover, automorphism_group(cover, [Automorphism(u, ("id",))])


def _restriction_map(
    parent_group: GaloisGroup,
    factor_embedding: LaurentSeries,
    factor_group: GaloisGroup,
) -> tuple[int, ...]:
    """For each parent automorphism, the factor automorphism it restricts to."""
    into_parent = Substituter(factor_embedding)
    factor_images = [
        into_parent.substitute(tau.substitution) for tau in factor_group.elements
    ]
    moved_images = [
        Substituter(sigma.substitution).substitute(factor_embedding)
        for sigma in parent_group.elements
    ]
    hi = min(s.abs_prec for s in factor_images + moved_images)
    lo = min(s.offset for s in factor_images)
    if hi - lo < 8:
        raise PrecisionExhausted("restriction window too small")
    keys = {}
    for idx, s in enumerate(factor_images):
        k = _series_key(s, lo, hi)
        if k in keys:
            raise PrecisionExhausted("factor automorphisms indistinguishable")
        keys[k] = idx
    projection = []
    for moved in moved_images:
        idx = keys.get(_series_key(moved, lo, hi))
        if idx is None:
            raise NotClosed("parent automorphism does not restrict to the factor")
        projection.append(idx)
    # verify the restriction is a surjective homomorphism
    n = parent_group.order
    for i in range(n):
        for j in range(n):
            lhs = projection[parent_group.table[i][j]]
            rhs = factor_group.table[projection[i]][projection[j]]
            if lhs != rhs:
                raise NotClosed("restriction map is not a homomorphism")
    if len(set(projection)) != factor_group.order:
        raise NotClosed("restriction map is not surjective")
    return tuple(projection)


def _factor_data(
    parent_cover: CoverDescription,
    parent_group: GaloisGroup,
    factor_cover: CoverDescription,
    factor_group: GaloisGroup,
    factor_embedding: LaurentSeries,
) -> CoverFactor:
    projection = _restriction_map(parent_group, factor_embedding, factor_group)
    kernel = frozenset(i for i, x in enumerate(projection) if x == 0)
    if len(kernel) * factor_group.order != parent_group.order:
        raise NotClosed("factor kernel has the wrong size")
    return CoverFactor(factor_cover, factor_group, factor_embedding, projection, kernel)


def compositum(
    pair1: tuple[CoverDescription, GaloisGroup],
    pair2: tuple[CoverDescription, GaloisGroup],
    precision: int | None = None,
):
    """Compositum of two Galois covers over the same base.

    Supported shapes: tame x tame with coprime degrees, tame x Artin-Schreier,
    and Artin-Schreier pairs with distinct breaks.
    """
    cover1, group1 = pair1
    cover2, group2 = pair2
    if cover1.field is not cover2.field:
        raise UnsupportedCompositum("covers live over different coefficient fields")
    if precision is None:
        precision = max(cover1.precision, cover2.precision)
    kinds = {"trivial": "tame", "kummer": "tame", "artin_schreier": "wild"}
    k1 = kinds.get(cover1.kind)
    k2 = kinds.get(cover2.kind)
    if k1 is None or k2 is None:
        raise UnsupportedCompositum(
            f"compositum of {cover1.kind} and {cover2.kind} covers is not supported"
        )
    if k1 == "wild" and k2 == "tame":
        return compositum(pair2, pair1, precision)
    if k1 == "tame" and k2 == "tame":
        return _compositum_tame_tame(pair1, pair2, precision)
    if k1 == "tame":
        return _compositum_tame_wild(pair1, pair2, precision)
    return _compositum_wild_wild(pair1, pair2, precision)


def _tame_degree(cover: CoverDescription) -> int:
    return 1 if cover.kind == "trivial" else cover.recipe[3]


def _compositum_tame_tame(pair1, pair2, precision: int):
    cover1, group1 = pair1
    cover2, group2 = pair2
    n1, n2 = _tame_degree(cover1), _tame_degree(cover2)
    if math.gcd(n1, n2) != 1:
        raise UnsupportedCompositum(
            f"tame degrees {n1} and {n2} share a common factor"
        )
    p, q = cover1.p, cover1.q
    n = n1 * n2
    top_cover, top_group = make_kummer(p, q, n, precision)
    u = LaurentSeries.uniformizer(cover1.field, precision + n)
    factors = (
        _factor_data(top_cover, top_group, cover1, group1, u**n2),
        _factor_data(top_cover, top_group, cover2, group2, u**n1),
    )
    top_cover.factors = factors
    top_cover.kind = "compositum"
    top_cover.recipe = ("compositum", cover1.recipe, cover2.recipe)
    return top_cover, top_group


def _compositum_tame_wild(pair1, pair2, precision: int):
    cover1, group1 = pair1
    cover2, group2 = pair2
    field = cover1.field
    p, q = cover1.p, cover1.q
    n = _tame_degree(cover1)
    _, _, _, m, a = cover2.recipe
    zeta = field.primitive_root_of_unity(n) if n > 1 else 1
    # over the tame base F_q((s)) with s^n = pi, solve y^p - y = a s^(-n m)
    rhs = LaurentSeries.from_terms(field, {-n * m: a}, precision + n * m + p)
    layer = _wild_layer(field, rhs, precision)
    s_in_u = layer.base
    embedding = s_in_u**n
    cover = CoverDescription(
        field,
        embedding,
        n * p,
        "compositum",
        ("compositum", cover1.recipe, cover2.recipe),
        precision,
    )
    wild_subs = _wild_substitutions(field, layer, precision)
    # the tame generator lifts to u -> zeta^beta u because u = y^alpha s^beta
    candidates = []
    u = LaurentSeries.uniformizer(field, precision + n * m + p)
    for i in range(n):
        scale = field.pow(zeta, i * layer.beta)
        scaled = u.scalar_mul(scale)
        scaled_sub = Substituter(scaled) if i else None
        for c in range(p):
            if i == 0:
                series = wild_subs[c]
            else:
                series = scaled_sub.substitute(wild_subs[c])
            candidates.append(Automorphism(series, ("tame_wild", i, c)))
    group = automorphism_group(cover, candidates)
    # wild subcover over the base: y also satisfies y^p - y = a pi^(-m)
    alpha2, beta2 = _normal_form_exponents(p, m)
    y_in_u = layer.t.invert()
    factor2_embed = (y_in_u**alpha2) * (embedding**beta2)
    factors = (
        _factor_data(cover, group, cover1, group1, s_in_u),
        _factor_data(cover, group, cover2, group2, factor2_embed),
    )
    cover.factors = factors
    return cover, group


def _normal_form_exponents(p: int, m: int) -> tuple[int, int]:
    alpha = (-pow(m, -1, p)) % p
    return alpha, (1 + alpha * m) // p


def _compositum_wild_wild(pair1, pair2, precision: int):
    cover1, group1 = pair1
    cover2, group2 = pair2
    m1, a1 = cover1.recipe[3], cover1.recipe[4]
    m2, a2 = cover2.recipe[3], cover2.recipe[4]
    if m1 == m2:
        raise UnsupportedCompositum(
            "Artin-Schreier covers with equal breaks are not supported"
        )
    if m1 > m2:
        swapped_cover, swapped_group = _compositum_wild_wild(pair2, pair1, precision)
        swapped_cover.factors = (swapped_cover.factors[1], swapped_cover.factors[0])
        swapped_cover.recipe = ("compositum", cover1.recipe, cover2.recipe)
        return swapped_cover, swapped_group
    field = cover1.field
    p, q = cover1.p, cover1.q
    # first storey: the smaller-break cover, fresh at the working precision
    base_cover, base_group = make_artin_schreier(p, q, m1, a1, precision)
    pi_in_u1 = base_cover.embedding
    rhs_raw = (pi_in_u1 ** (-m2)).scalar_mul(a2)
    rhs, w = _artin_schreier_reduce(rhs_raw)
    layer = _wild_layer(field, rhs, precision)
    u1_in_u = layer.base
    into_u = Substituter(u1_in_u)
    embedding = into_u.substitute(pi_in_u1)
    cover = CoverDescription(
        field,
        embedding,
        p * p,
        "compositum",
        ("compositum", cover1.recipe, cover2.recipe),
        precision,
    )
    wild_subs = _wild_substitutions(field, layer, precision)
    one = LaurentSeries.constant(field, 1, wild_subs[0].abs_prec)
    w_at_u = into_u.substitute(w)
    candidates = []
    for c1 in range(p):
        if c1 == 0:
            lift = None
        else:
            tau1 = base_group.elements[_find_wild_generator(base_group, c1)]
            sigma_u1 = into_u.substitute(tau1.substitution)
            delta = w_at_u - Substituter(sigma_u1).substitute(w)
            ratio = sigma_u1 * u1_in_u.invert()
            lift = (
                wild_subs[0]
                * ((one + delta * layer.t) ** layer.alpha)
                * (ratio**layer.beta)
            )
            lift_sub = Substituter(lift)
        for c2 in range(p):
            if c1 == 0:
                series = wild_subs[c2]
            elif c2 == 0:
                series = lift
            else:
                series = lift_sub.substitute(wild_subs[c2])
            candidates.append(Automorphism(series, ("wild_wild", c1, c2)))
    group = automorphism_group(cover, candidates)
    # embeddings of both storeys for the factor data
    alpha2, beta2 = _normal_form_exponents(p, m2)
    y2_in_u = layer.t.invert() + w_at_u
    factor2_embed = (y2_in_u**alpha2) * (embedding**beta2)
    factors = (
        _factor_data(cover, group, cover1, group1, u1_in_u),
        _factor_data(cover, group, cover2, group2, factor2_embed),
    )
    cover.factors = factors
    return cover, group


def _find_wild_generator(group: GaloisGroup, c: int) -> int:
    for i, el in enumerate(group.elements):
        if el.label == ("as", c):
            return i
    raise NotClosed(f"no Artin-Schreier element labelled {c}")


def inseparable_base_change(
    pair: tuple[CoverDescription, GaloisGroup], n: int
):
    """Base change along the degree-p^n Frobenius of the base trait.

    Returns ((E, G), (E', G')): the original cover and the cover of the new
    base K' = F_q((pi^(1/p^n))), with element lists matched index by index
    under g -> id (x) g.  All series of E' arise by taking p^n-th roots of
    coefficients; exponent patterns are unchanged.
    """
    cover, group = pair
    if n == 0:
        return (cover, group), (cover, group)
    field = cover.field

    def root_series(s: LaurentSeries) -> LaurentSeries:
        return s.map_coefficients(lambda c: field.pth_root(c, n))

    new_cover = CoverDescription(
        field,
        root_series(cover.embedding),
        cover.degree,
        "inseparable_base_change",
        ("inseparable_base_change", cover.recipe, n),
        cover.precision,
    )
    candidates = [
        Automorphism(root_series(el.substitution), el.label + ("insep", n))
        for el in group.elements
    ]
    new_group = automorphism_group(new_cover, candidates)
    return (cover, group), (new_cover, new_group)


def build_cover(recipe: tuple, precision: int = DEFAULT_PRECISION):
    """Rebuild a cover from its recipe at the requested precision."""
    kind = recipe[0]
    if kind == "trivial":
        return make_trivial(recipe[1], recipe[2], precision)
    if kind == "kummer":
        return make_kummer(recipe[1], recipe[2], recipe[3], precision)
    if kind == "artin_schreier":
        return make_artin_schreier(recipe[1], recipe[2], recipe[3], recipe[4], precision)
    if kind == "frobenius":
        return make_frobenius_base_extension(recipe[1], recipe[2], recipe[3], precision)
    if kind == "compositum":
        return compositum(
            build_cover(recipe[1], precision),
            build_cover(recipe[2], precision),
            precision,
        )
    if kind == "inseparable_base_change":
        return inseparable_base_change(build_cover(recipe[1], precision), recipe[2])[1]
    raise ValueError(f"unknown recipe kind {kind!r}")

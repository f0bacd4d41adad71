"""Finite fields F_{p^d} and truncated Laurent series with precision tracking.

Field elements are encoded as integers in [0, q): the base-p digits of the
code are the coefficients of the residue polynomial modulo a fixed monic
irreducible.  Codes 0..p-1 are the prime-subfield constants.  All field
arithmetic is table-driven and exact.

A ``LaurentSeries`` knows its coefficients on the exponent window
[offset, offset + N) and nothing beyond it; every operation propagates the
window so that no unknown coefficient is ever read.  Series products run
through an integer numpy convolution (exact in int64 for the sizes used
here, which is checked at construction).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

import numpy as np

from .errors import DomainError, FieldTooSmall, PrecisionExhausted

DEFAULT_PRECISION = 64
DEFAULT_MAX_PRECISION = 4096
SAFETY_MARGIN = 4

T = TypeVar("T")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, int(math.isqrt(n)) + 1):
        if n % q == 0:
            return False
    return True


def _poly_mul_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod is monic
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return [c % p for c in a[:dm]]


class FiniteField:
    """The field with q = p^d elements, encoded on integer codes."""

    _cache: dict[tuple[int, int], "FiniteField"] = {}

    def __new__(cls, p: int, d: int = 1):
        key = (p, d)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        cls._cache[key] = self
        self._init(p, d)
        return self

    def _init(self, p: int, d: int):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if d < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.d = d
        self.q = p**d
        self.modulus = self._find_irreducible(p, d)
        self._build_tables()

    @classmethod
    def of_order(cls, q: int) -> "FiniteField":
        for p in range(2, q + 1):
            if _is_prime(p):
                d = 0
                n = q
                while n % p == 0:
                    n //= p
                    d += 1
                if n == 1 and d >= 1:
                    return cls(p, d)
                if q % p == 0:
                    break
        raise ValueError(f"{q} is not a prime power")

    @staticmethod
    def _find_irreducible(p: int, d: int) -> tuple[int, ...]:
        """Lexicographically smallest monic irreducible of degree d over F_p."""
        if d == 1:
            return (0, 1)

        def irreducible(poly):
            # trial division by every monic polynomial of degree 1..d//2
            for deg in range(1, d // 2 + 1):
                for code in range(p**deg):
                    div = [(code // p**i) % p for i in range(deg)] + [1]
                    rem = _poly_mod(poly, div, p)
                    if not any(rem):
                        return False
            return True

        for code in range(p**d):
            poly = [(code // p**i) % p for i in range(d)] + [1]
            if irreducible(poly):
                return tuple(poly)
        raise RuntimeError("no irreducible polynomial found")  # unreachable

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, d), dtype=np.int64)
        rest = codes.copy()
        for j in range(d):
            digits[:, j] = rest % p
            rest //= p
        self._digits = digits
        self._weights = np.array([p**j for j in range(d)], dtype=np.int64)
        # rows[j] holds the digits of x^(d+j) reduced modulo the modulus
        rows = []
        if d > 1:
            x_d = [(-c) % p for c in self.modulus[:d]]
            rows.append(x_d)
            for _ in range(d - 2):
                shifted = [0] + rows[-1][:]
                top = shifted.pop()
                rows.append([(shifted[j] + top * x_d[j]) % p for j in range(d)])
        self._reduction_rows = (
            np.array(rows, dtype=np.int64) if rows else np.zeros((0, d), dtype=np.int64)
        )
        # scalar multiplication table (q is small throughout this package)
        if d == 1:
            self._mul_table = None
        else:
            prods = np.einsum("ia,jb->ijab", digits, digits)
            flat = np.zeros((q, q, 2 * d - 1), dtype=np.int64)
            for a in range(d):
                for b in range(d):
                    flat[:, :, a + b] += prods[:, :, a, b]
            self._mul_table = self._fold_and_encode(flat.reshape(q * q, 2 * d - 1)).reshape(
                q, q
            )
        # inverses, frobenius
        self._inv_table = [0] * q
        for a in range(1, q):
            b = self.pow(a, q - 2)
            self._inv_table[a] = b
        frob = [self.pow(a, p) for a in range(q)]
        self._frob_table = frob
        inv_frob = [0] * q
        for a, fa in enumerate(frob):
            inv_frob[fa] = a
        self._inv_frob_table = inv_frob

    # ------------------------------------------------------- element ops

    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        da = self._digits[a]
        db = self._digits[b]
        return int(((da + db) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.d == 1:
            return (-a) % self.p
        return int(((-self._digits[a]) % self.p) @ self._weights)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a * b) % self.p
        return int(self._mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.d == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv_table[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = 1
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def frobenius(self, a: int, n: int = 1) -> int:
        for _ in range(n % self.d if self.d > 1 else 0):
            a = self._frob_table[a]
        return a if self.d > 1 else a

    def pth_root(self, a: int, n: int = 1) -> int:
        """Inverse Frobenius: the unique b with b^(p^n) = a."""
        if self.d == 1:
            return a
        for _ in range(n % self.d):
            a = self._inv_frob_table[a]
        return a

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        order = 1
        cur = a
        while cur != 1:
            cur = self.mul(cur, a)
            order += 1
        return order

    def primitive_root_of_unity(self, n: int) -> int:
        """Smallest-coded element of exact multiplicative order n."""
        if n == 1:
            return 1
        if (self.q - 1) % n != 0:
            raise FieldTooSmall(
                f"F_{self.q} has no primitive {n}-th root of unity"
            )
        for a in range(2, self.q):
            if self.element_order(a) == n:
                return a
        raise FieldTooSmall(f"no element of order {n} in F_{self.q}")  # unreachable

    # -------------------------------------------------- vectorized kernel

    def _fold_and_encode(self, flat: np.ndarray) -> np.ndarray:
        """Reduce rows of extension-digit width 2d-1 and encode to codes."""
        d = self.d
        if d == 1:
            return flat[:, 0] % self.p
        low = flat[:, :d].copy()
        if flat.shape[1] > d:
            low += flat[:, d:] @ self._reduction_rows
        return (low % self.p) @ self._weights

    def decode_array(self, codes: np.ndarray) -> np.ndarray:
        return self._digits[codes]

    def __repr__(self):
        return f"FiniteField(p={self.p}, d={self.d})"

    def __reduce__(self):
        return (FiniteField, (self.p, self.d))


def _convolve_codes(field: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two coefficient code arrays (full convolution)."""
    d = field.d
    w = 2 * d - 1
    da = field.decode_array(a)
    db = field.decode_array(b)
    if d == 1:
        conv = np.convolve(da[:, 0], db[:, 0])
        return conv % field.p
    fa = np.zeros(len(a) * w, dtype=np.int64)
    fb = np.zeros(len(b) * w, dtype=np.int64)
    for j in range(d):
        fa[j::w] = da[:, j]
        fb[j::w] = db[:, j]
    conv = np.convolve(fa, fb)
    n_out = len(a) + len(b) - 1
    # indices past n_out*w mix digit width w-1 overflow slots; all zero
    full = conv[: n_out * w]
    return field._fold_and_encode(full.reshape(n_out, w))


class LaurentSeries:
    """Truncated Laurent series over a finite field.

    ``coeffs[i]`` is the coefficient of t^(offset + i); every exponent in
    [offset, abs_prec) outside the stored list is known to be zero; nothing
    is known from abs_prec on.  Normal form: leading and trailing stored
    coefficients are nonzero, and a series that is zero on its whole window
    has an empty list with offset == abs_prec.
    """

    __slots__ = ("field", "offset", "coeffs", "abs_prec")

    def __init__(
        self,
        field: FiniteField,
        offset: int,
        coeffs: Iterable[int],
        abs_prec: int,
    ):
        coeffs = list(coeffs)
        if offset + len(coeffs) > abs_prec:
            coeffs = coeffs[: max(0, abs_prec - offset)]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            offset += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            offset = abs_prec
        self.field = field
        self.offset = offset
        self.coeffs = tuple(int(c) for c in coeffs)
        self.abs_prec = abs_prec

    # -------------------------------------------------------- constructors

    @classmethod
    def zero(cls, field: FiniteField, abs_prec: int) -> "LaurentSeries":
        return cls(field, abs_prec, (), abs_prec)

    @classmethod
    def constant(cls, field: FiniteField, code: int, abs_prec: int) -> "LaurentSeries":
        return cls(field, 0, (code,), abs_prec)

    @classmethod
    def uniformizer(cls, field: FiniteField, precision: int = DEFAULT_PRECISION) -> "LaurentSeries":
        """The series t, carrying `precision` known coefficient slots."""
        return cls(field, 1, (1,), precision + 1)

    @classmethod
    def from_terms(
        cls, field: FiniteField, terms: Mapping[int, int], abs_prec: int
    ) -> "LaurentSeries":
        if not terms:
            return cls.zero(field, abs_prec)
        lo = min(terms)
        hi = max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(field, lo, coeffs, abs_prec)

    # ------------------------------------------------------------ queries

    @property
    def precision(self) -> int:
        """Relative precision N: coefficients known on [offset, offset + N)."""
        return self.abs_prec - self.offset

    def is_zero(self) -> bool:
        """Known-zero on the whole precision window."""
        return not self.coeffs

    def coefficient(self, exponent: int) -> int:
        if exponent >= self.abs_prec:
            raise PrecisionExhausted(
                f"coefficient of t^{exponent} is beyond precision {self.abs_prec}"
            )
        i = exponent - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def valuation(self) -> int:
        """The t-adic valuation, guarded by the safety margin."""
        if not self.coeffs:
            raise PrecisionExhausted(
                f"series vanishes on its window (abs_prec={self.abs_prec})"
            )
        if self.offset >= self.abs_prec - SAFETY_MARGIN:
            raise PrecisionExhausted(
                f"valuation {self.offset} too close to precision {self.abs_prec}"
            )
        return self.offset

    def valuation_lower_bound(self) -> int:
        return self.offset

    def leading_coefficient(self) -> int:
        if not self.coeffs:
            raise PrecisionExhausted("no nonzero coefficient on the window")
        return self.coeffs[0]

    def __eq__(self, other):
        """Agreement on the shared precision window."""
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.field is not other.field:
            return False
        hi = min(self.abs_prec, other.abs_prec)
        lo = min(self.offset, other.offset)
        for e in range(lo, hi):
            if self.coefficient(e) != other.coefficient(e):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:6]):
            if c:
                terms.append(f"{c}*t^{self.offset + i}")
        if len(self.coeffs) > 6:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(t^{self.abs_prec})>"

    # --------------------------------------------------------- arithmetic

    def _check_field(self, other: "LaurentSeries"):
        if self.field is not other.field:
            raise ValueError("series over different fields")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_field(other)
        prec = min(self.abs_prec, other.abs_prec)
        lo = min(
            self.offset if self.coeffs else prec,
            other.offset if other.coeffs else prec,
        )
        if lo >= prec:
            return LaurentSeries.zero(self.field, prec)
        out = [0] * (prec - lo)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                e = src.offset + i
                if e < prec:
                    out[e - lo] = self.field.add(out[e - lo], c)
        return LaurentSeries(self.field, lo, out, prec)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(
            self.field,
            self.offset,
            [self.field.neg(c) for c in self.coeffs],
            self.abs_prec,
        )

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_field(other)
        prec = min(
            self.offset + other.abs_prec,
            other.offset + self.abs_prec,
        )
        if not self.coeffs or not other.coeffs:
            return LaurentSeries.zero(self.field, prec)
        conv = _convolve_codes(
            self.field,
            np.array(self.coeffs, dtype=np.int64),
            np.array(other.coeffs, dtype=np.int64),
        )
        return LaurentSeries(self.field, self.offset + other.offset, conv.tolist(), prec)

    def scalar_mul(self, code: int) -> "LaurentSeries":
        if code == 0:
            return LaurentSeries.zero(self.field, self.abs_prec)
        return LaurentSeries(
            self.field,
            self.offset,
            [self.field.mul(code, c) for c in self.coeffs],
            self.abs_prec,
        )

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries(self.field, self.offset + k, self.coeffs, self.abs_prec + k)

    def truncate(self, abs_prec: int) -> "LaurentSeries":
        if abs_prec >= self.abs_prec:
            return self
        return LaurentSeries(self.field, self.offset, self.coeffs, abs_prec)

    def invert(self) -> "LaurentSeries":
        """Multiplicative inverse by Newton iteration."""
        if not self.coeffs:
            raise PrecisionExhausted("cannot invert a series that vanishes on its window")
        v = self.offset
        rel = self.abs_prec - v
        unit = self.shift(-v)  # valuation 0, constant term nonzero
        c0_inv = self.field.inv(unit.coeffs[0])
        z = LaurentSeries.constant(self.field, c0_inv, 1)
        known = 1
        while known < rel:
            known = min(2 * known, rel)
            zw = LaurentSeries(self.field, z.offset, z.coeffs, known)
            uw = unit.truncate(known)
            two = LaurentSeries.constant(self.field, self.field.add(1, 1), known)
            z = zw * (two - uw * zw)
            z = LaurentSeries(self.field, z.offset, z.coeffs, known)
        return z.shift(-v)

    def __pow__(self, n: int) -> "LaurentSeries":
        if n == 0:
            return LaurentSeries.constant(self.field, 1, self.precision)
        base = self if n > 0 else self.invert()
        n = abs(n)
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        p = self.field.p
        coeffs = []
        for i, c in enumerate(self.coeffs):
            e = self.offset + i
            coeffs.append(self.field.mul(e % p, c))
        return LaurentSeries(self.field, self.offset - 1, coeffs, self.abs_prec - 1)

    def map_coefficients(self, fn: Callable[[int], int]) -> "LaurentSeries":
        return LaurentSeries(
            self.field, self.offset, [fn(c) for c in self.coeffs], self.abs_prec
        )

    def substitute(self, t_image: "LaurentSeries") -> "LaurentSeries":
        """Replace the variable by ``t_image`` (valuation >= 1 required)."""
        return Substituter(t_image).substitute(self)


class Substituter:
    """Substitution t -> g for a fixed series g of valuation >= 1.

    Precomputes the powers of g (and of 1/g for Laurent tails) so that many
    substitutions against the same g cost one exact integer matrix product
    each.  This is the workhorse behind automorphism composition tables.
    """

    _DENSE_THRESHOLD = 8

    def __init__(self, g: LaurentSeries):
        if g.is_zero() or g.offset < 1:
            raise DomainError("substitution image must have valuation >= 1")
        self.g = g
        self.vg = g.offset
        self.field = g.field
        self._pos: list[LaurentSeries] = [g]
        self._neg: list[LaurentSeries] = []
        self._g_inv: LaurentSeries | None = None
        self._matrix: np.ndarray | None = None
        self._matrix_emax = 0
        self._matrix_hi = 0

    def _pos_power(self, n: int) -> LaurentSeries:
        while len(self._pos) < n:
            self._pos.append(self._pos[-1] * self.g)
        return self._pos[n - 1]

    def _neg_power(self, n: int) -> LaurentSeries:
        if self._g_inv is None:
            self._g_inv = self.g.invert()
        while len(self._neg) < n:
            prev = self._neg[-1] if self._neg else None
            self._neg.append(self._g_inv if prev is None else prev * self._g_inv)
        return self._neg[n - 1]

    def _ensure_matrix(self, e_max: int):
        """Digit matrix of g^1..g^e_max on the shared window [vg, abs_prec(g))."""
        if self._matrix is not None and self._matrix_emax >= e_max:
            return
        powers = [self._pos_power(e) for e in range(1, e_max + 1)]
        hi = min(p.abs_prec for p in powers)
        base = self.vg
        length = max(hi - base, 0)
        d = self.field.d
        mat = np.zeros((e_max, length, d), dtype=np.int64)
        for idx, pw in enumerate(powers):
            if not pw.coeffs:
                continue
            codes = np.array(pw.coeffs, dtype=np.int64)
            rows = self.field.decode_array(codes)
            lo = pw.offset - base
            hi_i = min(lo + len(codes), length)
            if hi_i > max(lo, 0):
                src_lo = max(0, -lo)
                mat[idx, max(lo, 0) : hi_i] = rows[src_lo : src_lo + hi_i - max(lo, 0)]
        self._matrix = mat
        self._matrix_emax = e_max
        self._matrix_hi = hi

    def _substitute_dense(self, s: LaurentSeries, e_max: int, cap: int) -> LaurentSeries:
        field = self.field
        d = field.d
        self._ensure_matrix(e_max)
        coeff_vec = np.zeros(self._matrix_emax, dtype=np.int64)
        for i, c in enumerate(s.coeffs):
            e = s.offset + i
            if c and 1 <= e <= e_max:
                coeff_vec[e - 1] = c
        digits = field.decode_array(coeff_vec)
        prod = np.einsum("ena,eb->nab", self._matrix, digits)
        length = prod.shape[0]
        flat = np.zeros((length, 2 * d - 1), dtype=np.int64)
        for a in range(d):
            for b in range(d):
                flat[:, a + b] += prod[:, a, b]
        codes = field._fold_and_encode(flat)
        prec = min(self._matrix_hi, cap)
        return LaurentSeries(field, self.vg, codes.tolist(), prec)

    def substitute(self, s: LaurentSeries) -> LaurentSeries:
        field = self.field
        # truncation of s at abs_prec becomes an error of order vg * abs_prec
        cap = self.vg * s.abs_prec
        if s.is_zero():
            return LaurentSeries.zero(field, cap)
        const_term = 0
        sparse: list[tuple[int, int]] = []
        dense_count = 0
        e_max = 0
        for i, c in enumerate(s.coeffs):
            if c == 0:
                continue
            e = s.offset + i
            if e == 0:
                const_term = c
            elif e < 0 or self.vg * e >= cap:
                if e < 0:
                    sparse.append((e, c))
                # positive exponents past the cap contribute beyond the window
            else:
                dense_count += 1
                e_max = max(e_max, e)
        acc: LaurentSeries | None = None
        prec = cap
        if dense_count >= self._DENSE_THRESHOLD:
            acc = self._substitute_dense(s, e_max, cap)
            prec = min(prec, acc.abs_prec)
        elif dense_count:
            for i, c in enumerate(s.coeffs):
                e = s.offset + i
                if c and 1 <= e and self.vg * e < cap:
                    piece = self._pos_power(e).scalar_mul(c)
                    prec = min(prec, piece.abs_prec)
                    acc = piece if acc is None else acc + piece
        for e, c in sparse:
            piece = self._neg_power(-e).scalar_mul(c)
            prec = min(prec, piece.abs_prec)
            acc = piece if acc is None else acc + piece
        if acc is None:
            acc = LaurentSeries.zero(field, prec)
        if const_term:
            acc = acc + LaurentSeries.constant(field, const_term, prec)
        return acc.truncate(min(prec, cap))


# Spec-level operation names ------------------------------------------------

def series_valuation(s: LaurentSeries) -> int:
    """t-adic valuation of s; PrecisionExhausted when unresolved."""
    return s.valuation()


def series_substitute(s: LaurentSeries, t_image: LaurentSeries) -> LaurentSeries:
    """s with its variable replaced by t_image (valuation >= 1)."""
    return s.substitute(t_image)


def series_invert(s: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse of s to the propagated precision."""
    return s.invert()


def with_adaptive_precision(
    compute: Callable[[int], T],
    initial: int = DEFAULT_PRECISION,
    cap: int = DEFAULT_MAX_PRECISION,
) -> T:
    """Run compute(precision), doubling the precision whenever it raises
    PrecisionExhausted, up to the cap; the last error propagates."""
    prec = initial
    while True:
        try:
            return compute(prec)
        except PrecisionExhausted:
            if prec >= cap:
                raise
            prec = min(2 * prec, cap)

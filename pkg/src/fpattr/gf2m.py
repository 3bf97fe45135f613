"""Arithmetic over GF(2^m) and over binary polynomials.

Binary polynomials are plain ints: bit i is the coefficient of x^i, so the
integer's binary digits read as the coefficient sequence lowest degree
first.  Field elements are ints in [0, 2^m) interpreted the same way modulo
a primitive polynomial; addition is XOR throughout (documented convention,
no operation is exposed for it).
"""

from __future__ import annotations

from dataclasses import dataclass, field


class NotPrimitiveError(ValueError):
    """The supplied modulus does not make x a generator of GF(2^m)*."""


#: Conventional primitive polynomials, one per supported extension degree.
#: Any primitive polynomial yields an equivalent code; these defaults keep
#: outputs bit-reproducible.  Construction re-verifies primitivity anyway.
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,                # x^2 + x + 1
    3: 0b1011,               # x^3 + x + 1
    4: 0b10011,              # x^4 + x + 1
    5: 0b100101,             # x^5 + x^2 + 1
    6: 0b1000011,            # x^6 + x + 1
    7: 0b10001001,           # x^7 + x^3 + 1
    8: 0b100011101,          # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,         # x^9 + x^4 + 1
    10: 0b10000001001,       # x^10 + x^3 + 1
    11: 0b100000000101,      # x^11 + x^2 + 1
    12: 0b1000001010011,     # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,    # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,   # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,  # x^15 + x + 1
    16: 0b10001000000001011, # x^16 + x^12 + x^3 + x + 1
}


def poly_degree(p: int) -> int:
    """Degree of a binary polynomial; -1 for the zero polynomial."""
    return p.bit_length() - 1


def poly_mul_gf2(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod_gf2(a: int, modulus: int) -> int:
    """Remainder of a binary polynomial modulo another."""
    if modulus == 0:
        raise ZeroDivisionError("polynomial modulus is zero")
    deg_m = poly_degree(modulus)
    deg_a = poly_degree(a)
    while deg_a >= deg_m:
        a ^= modulus << (deg_a - deg_m)
        deg_a = poly_degree(a)
    return a


def shift_reduce_mul(a: int, b: int, primitive_poly: int) -> int:
    """Field product by carry-less multiply then reduction.

    Independent of the log/antilog tables; used as the exhaustive oracle
    for the table-based product.
    """
    return poly_mod_gf2(poly_mul_gf2(a, b), primitive_poly)


@dataclass(frozen=True, slots=True)
class FieldContext:
    """GF(2^m) with log/antilog tables over a verified primitive element.

    ``antilog`` is doubled in length so products can skip one modulo;
    entries at index >= order repeat the first cycle.  ``log[0]`` is a -1
    sentinel and must never be read.
    """

    m: int
    primitive_poly: int
    order: int                       # 2^m - 1, order of the multiplicative group
    log: list[int] = field(repr=False)
    antilog: list[int] = field(repr=False)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        return self.antilog[self.order - self.log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^m)")
        if a == 0:
            return 0
        return self.antilog[self.log[a] - self.log[b] + self.order]

    def pow(self, a: int, e: int) -> int:
        """a**e for nonzero a; exponents may be negative."""
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 cannot be raised to a non-positive power")
            return 0
        return self.antilog[(self.log[a] * e) % self.order]

    def alpha_pow(self, e: int) -> int:
        """alpha**e where alpha is the primitive element (value 2)."""
        return self.antilog[e % self.order]

    def eval_poly(self, poly: int, x: int) -> int:
        """Evaluate a binary polynomial at a field element (Horner)."""
        acc = 0
        for i in range(poly_degree(poly), -1, -1):
            acc = self.mul(acc, x) ^ ((poly >> i) & 1)
        return acc


def build_field(m: int, primitive_poly: int | None = None) -> FieldContext:
    """Construct GF(2^m) tables, verifying that alpha generates the group.

    Raises NotPrimitiveError when the powers of alpha = x cycle in fewer
    than 2^m - 1 steps under the supplied modulus.
    """
    if not 2 <= m <= 16:
        raise ValueError(f"m must be in [2, 16], got {m}")
    if primitive_poly is None:
        primitive_poly = DEFAULT_PRIMITIVE_POLY[m]
    if poly_degree(primitive_poly) != m:
        raise ValueError(
            f"primitive polynomial must have degree {m}, got degree {poly_degree(primitive_poly)}"
        )

    order = (1 << m) - 1
    log = [-1] * (1 << m)
    antilog = [0] * (2 * order + 1)
    x = 1
    for i in range(order):
        if log[x] != -1:
            raise NotPrimitiveError(
                f"x generates a cycle of length {i} < {order} under {primitive_poly:#b}"
            )
        antilog[i] = x
        log[x] = i
        x <<= 1
        if x >> m:
            x ^= primitive_poly
        if x == 0:
            raise NotPrimitiveError(f"{primitive_poly:#b} is reducible (x divides it)")
    if x != 1:
        raise NotPrimitiveError(
            f"x has order > {order} is impossible; modulus {primitive_poly:#b} is not primitive"
        )
    for i in range(order, 2 * order + 1):
        antilog[i] = antilog[i - order]
    return FieldContext(m=m, primitive_poly=primitive_poly, order=order, log=log, antilog=antilog)


def conjugacy_class(e: int, ctx: FieldContext) -> list[int]:
    """The orbit of e under repeated squaring (Frobenius)."""
    conj = []
    c = e
    while c not in conj:
        conj.append(c)
        c = ctx.mul(c, c)
    return conj


def minimal_polynomial(e: int, ctx: FieldContext) -> int:
    """Lowest-degree binary polynomial with e as a root.

    Computed as the product of (x + c) over the conjugacy class of e; the
    coefficients necessarily collapse to GF(2).
    """
    if e == 0:
        raise ValueError("minimal polynomial is defined for nonzero elements only")
    coeffs = [1]  # over GF(2^m), lowest degree first
    for c in conjugacy_class(e, ctx):
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i] ^= ctx.mul(a, c)
            nxt[i + 1] ^= a
        coeffs = nxt
    poly = 0
    for i, a in enumerate(coeffs):
        if a not in (0, 1):  # cannot happen for a genuine conjugacy class
            raise AssertionError(f"non-binary coefficient {a} in minimal polynomial of {e}")
        poly |= a << i
    return poly

"""Small finite fields GF(p^e) backed by dense lookup tables.

Elements are plain ints in ``range(q)``.  The integer ``sum(c_i * p**i)``
stands for the residue class of ``sum(c_i * x**i)`` modulo the defining
polynomial, so ``0`` and ``1`` are the additive and multiplicative units and
indices ``>= p`` are proper extension elements.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

MAX_ORDER = 16

# element index in 0..q-1
FieldElement = int


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _digits(idx: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(idx % p)
        idx //= p
    return out


def _undigits(coeffs, p: int) -> int:
    idx = 0
    for c in reversed(coeffs):
        idx = idx * p + c
    return idx


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by monic den; both low-to-high coefficient lists."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    rem = [c % p for c in num[:dd]]
    return rem + [0] * (dd - len(rem))


def _is_irreducible(low_to_high: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(low_to_high) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_mod(low_to_high, divisor, p)):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree e.

    Returned high-to-low including the leading 1; candidates are ordered by
    their non-leading coefficients read from the top down.
    """
    if e == 1:
        return (1, 0)
    for tail in product(range(p), repeat=e):
        low_to_high = list(reversed(tail)) + [1]
        if _is_irreducible(low_to_high, p):
            return (1,) + tail
    raise ValueError(f"no irreducible polynomial of degree {e} over GF({p})")


class FieldSpec:
    """Arithmetic tables for GF(p^e).  Immutable once built."""

    __slots__ = ("p", "e", "q", "poly", "add_table", "mul_table", "neg_table",
                 "inv_table", "sub_table")

    def __init__(self, p: int, e: int, poly: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p ** e
        self.poly = tuple(poly)
        q = self.q
        low_to_high = list(reversed(self.poly))
        digits = [_digits(a, p, e) for a in range(q)]

        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = digits[a]
            for b in range(q):
                db = digits[b]
                add[a][b] = _undigits([(x + y) % p for x, y in zip(da, db)], p)
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] += x * y
                mul[a][b] = _undigits(_poly_mod(prod, low_to_high, p), p)

        neg = [0] * q
        inv = [0] * q
        for a in range(q):
            neg[a] = add[a].index(0)
            if a:
                inv[a] = mul[a].index(1)
        sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]

        self.add_table = tuple(tuple(r) for r in add)
        self.mul_table = tuple(tuple(r) for r in mul)
        self.sub_table = tuple(tuple(r) for r in sub)
        self.neg_table = tuple(neg)
        self.inv_table = tuple(inv)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.e == other.e and self.poly == other.poly)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.poly))

    def __reduce__(self):
        return (field_new, (self.p, self.e))

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, k: int) -> int:
        result = 1
        mul = self.mul_table
        for _ in range(k):
            result = mul[result][a]
        return result

    def is_square_order(self) -> bool:
        return self.e % 2 == 0

    def sqrt_order(self) -> int:
        if self.e % 2:
            raise ValueError(f"{self!r} has no subfield of square-root order")
        return self.p ** (self.e // 2)


@lru_cache(maxsize=None)
def field_new(p: int, e: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if e < 1 or p ** e > MAX_ORDER:
        raise ValueError(f"GF({p}^{e}) is outside the supported range q <= {MAX_ORDER}")
    return FieldSpec(p, e, least_irreducible(p, e))


def gf(q: int) -> FieldSpec:
    """Field of order q, q a prime power <= 16."""
    for p in range(2, q + 1):
        if is_prime(p):
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r == 1 and e >= 1:
                return field_new(p, e)
            if q % p == 0:
                break
    raise ValueError(f"{q} is not a prime power")


def conjugate(field: FieldSpec, a: int, sub_order: int) -> int:
    """The involution a -> a**sub_order of GF(sub_order**2)."""
    if sub_order * sub_order != field.q:
        raise ValueError(f"{field!r} is not a quadratic extension of GF({sub_order})")
    return field.pow(a, sub_order)


def conjugation_table(field: FieldSpec) -> tuple[int, ...]:
    s = field.sqrt_order()
    return tuple(field.pow(a, s) for a in range(field.q))

"""Text form of a geometry: ``FAM(n,q)[ i=<i>][ halfspin:A|B]``.

FAM is one of PG, W, Q, Q+, Q-, H.  For H the second parameter is the field
order q^2 and may be written either as a number (``H(3,4)``) or as a power
(``H(3,2^2)``); printing always uses the number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .fields import MAX_ORDER, gf, is_prime
from .grassmann import (OppositionContext, PointLineGeometry, half_spin, polar_grassmannian,
                        projective_grassmannian)
from .linalg import gaussian_binomial
from .spaces import build_projective, polar_space

FAMILY_CODES = ("PG", "W", "Q+", "Q-", "Q", "H")


class SpecError(ValueError):
    """Parse or validation failure; ``pos`` is the offending column (0-based)."""

    def __init__(self, msg: str, text: str = "", pos: int | None = None):
        self.msg = msg
        self.text = text
        self.pos = pos
        if pos is None:
            super().__init__(msg)
        else:
            super().__init__(f"{msg} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


def _prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


@dataclass(frozen=True)
class GeometrySpec:
    family: str
    n: int
    q: int
    i: int | None = None
    halfspin: str | None = None

    def __str__(self) -> str:
        out = f"{self.family}({self.n},{self.q})"
        if self.i is not None:
            out += f" i={self.i}"
        if self.halfspin is not None:
            out += f" halfspin:{self.halfspin}"
        return out

    def with_type(self, i: int | None) -> "GeometrySpec":
        return GeometrySpec(self.family, self.n, self.q, i, self.halfspin)

    def normalized(self) -> "GeometrySpec":
        """The same geometry with the default type made explicit."""
        if self.i is None and self.halfspin is None:
            return self.with_type(1)
        return self

    # ranks and orders follow from the family parameters alone
    @property
    def rank(self) -> int:
        n, fam = self.n, self.family
        if fam == "PG":
            return n
        if fam in ("W", "Q+"):
            return (n + 1) // 2
        if fam == "Q":
            return n // 2
        if fam == "Q-":
            return (n - 1) // 2
        return (n + 1) // 2

    @property
    def order(self) -> tuple[int, int]:
        """(s, t) of the polar space (lines of PG have q+1 points; t is undefined there)."""
        q, fam = self.q, self.family
        if fam == "PG":
            return q, 0
        if fam in ("W", "Q"):
            return q, q
        if fam == "Q+":
            return q, 1
        if fam == "Q-":
            return q, q * q
        root = round(q ** 0.5)
        return q, (root if self.n % 2 else root ** 3)

    @property
    def type_index(self) -> int:
        if self.halfspin is not None:
            return self.rank if self.halfspin == "A" else self.rank - 1
        return 1 if self.i is None else self.i

    def validate(self) -> "GeometrySpec":
        fam, n, q = self.family, self.n, self.q
        if fam not in FAMILY_CODES:
            raise SpecError(f"unknown family {fam!r}")
        pe = _prime_power(q) if q >= 2 else None
        if pe is None:
            raise SpecError(f"{q} is not a prime power")
        if q > MAX_ORDER:
            raise SpecError(f"field order {q} above the supported maximum {MAX_ORDER}")
        if fam == "PG":
            if n < 2:
                raise SpecError("PG(n,q) needs n >= 2")
        elif fam in ("W", "Q+", "Q-"):
            if n % 2 == 0 or n < 3:
                raise SpecError(f"{fam}(n,q) needs odd n >= 3")
            if fam == "Q-" and n < 5:
                raise SpecError("Q-(n,q) needs n >= 5 for rank >= 2")
        elif fam == "Q":
            if n % 2 or n < 4:
                raise SpecError("Q(n,q) needs even n >= 4")
        elif fam == "H":
            if pe[1] % 2:
                raise SpecError("H(n,q^2) needs a square field order")
            if n < 3:
                raise SpecError("H(n,q^2) needs n >= 3")
        r = self.rank
        if self.halfspin is not None:
            if fam != "Q+":
                raise SpecError("halfspin applies to hyperbolic quadrics Q+ only")
            if r < 3:
                raise SpecError("half-spin geometries need rank >= 3")
            if self.i is not None:
                raise SpecError("give either i=<type> or halfspin:, not both")
            if self.halfspin not in ("A", "B"):
                raise SpecError("halfspin class must be A or B")
        elif self.i is not None:
            top = n if fam == "PG" else r
            if not 1 <= self.i <= top:
                raise SpecError(f"type i={self.i} out of range 1..{top}")
            if fam == "Q+" and self.i >= r - 1:
                raise SpecError("types r-1 and r of Q+ need halfspin:A|B")
        return self

    def estimate_vertices(self) -> int:
        """Vertex count from the standard counting formulas (no construction)."""
        q = self.q
        if self.family == "PG":
            return gaussian_binomial(self.n + 1, self.type_index, q)
        s, t = self.order
        r = self.rank
        k = r if self.halfspin is not None else self.type_index
        count = Fraction(1)
        for j in range(k):
            count *= Fraction((s ** (r - j) - 1) * (s ** (r - j - 1) * t + 1), s ** (j + 1) - 1)
        if self.halfspin is not None:
            count /= 2
        return int(count)

    def build(self) -> tuple[PointLineGeometry, OppositionContext]:
        self.validate()
        f = gf(self.q)
        if self.family == "PG":
            return projective_grassmannian(build_projective(self.n, f), self.type_index - 1)
        space = polar_space(self.family, self.n, f)
        if self.halfspin is not None:
            return half_spin(space, "AB".index(self.halfspin))
        return polar_grassmannian(space, self.type_index)


_HEAD = re.compile(r"\s*(PG|W|Q\+|Q-|Q|H)\s*\(\s*")
_INT = re.compile(r"\d+")


def parse_spec(text: str) -> GeometrySpec:
    m = _HEAD.match(text)
    if not m:
        raise SpecError("expected a family PG, W, Q, Q+, Q- or H", text, len(text) - len(text.lstrip()))
    fam = m.group(1)
    pos = m.end()

    def number(pos):
        mm = _INT.match(text, pos)
        if not mm:
            raise SpecError("expected an integer", text, pos)
        return int(mm.group()), mm.end()

    n, pos = number(pos)
    pos = _skip(text, pos)
    if pos >= len(text) or text[pos] != ",":
        raise SpecError("expected ','", text, pos)
    pos = _skip(text, pos + 1)
    q_pos = pos
    q, pos = number(pos)
    if text.startswith("^", pos):
        e, pos = number(pos + 1)
        q = q ** e
    pos = _skip(text, pos)
    if pos >= len(text) or text[pos] != ")":
        raise SpecError("expected ')'", text, pos)
    pos += 1
    i = hs = None
    while True:
        pos = _skip(text, pos)
        if pos >= len(text):
            break
        if text.startswith("i=", pos):
            if i is not None:
                raise SpecError("duplicate i=", text, pos)
            i, pos = number(pos + 2)
        elif text.startswith("halfspin:", pos):
            if hs is not None:
                raise SpecError("duplicate halfspin:", text, pos)
            c = text[pos + 9:pos + 10]
            if c not in ("A", "B"):
                raise SpecError("expected A or B", text, pos + 9)
            hs = c
            pos += 10
        else:
            raise SpecError("unexpected text", text, pos)
    spec = GeometrySpec(fam, n, q, i, hs)
    try:
        return spec.validate()
    except SpecError as e:
        raise SpecError(e.msg, text, q_pos if "order" in e.msg or "prime" in e.msg else 0) from None


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] == " ":
        pos += 1
    return pos

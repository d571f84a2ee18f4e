"""Exact arithmetic in Z[zeta_p, zeta_ell] for distinct primes p and ell.

Every character value and character sum in this package lives in the ring
Z[zeta_p, zeta_ell] (p = field characteristic, ell = character order, and
ell | q - 1 forces ell != p).  Values are integer coordinate tuples on the
basis

    { zeta_p^i * zeta_ell^j : 0 <= i <= p-2, 0 <= j <= ell-2 },

which is an integral basis of Z[zeta_{p*ell}] (product of the power bases of
the two cyclotomic fields, whose discriminants are coprime).  Consequently,
tuple equality is algebraic equality and every identity check is bit-exact.

Out-of-range exponents are folded in with the relations
sum_{i=0}^{p-1} zeta_p^i = 0 and sum_{j=0}^{ell-1} zeta_ell^j = 0; for
ell = 2 this makes zeta_2 = -1 automatic, so the ring degenerates to Z with
coordinates of length (p-1).

The class also converts exponent-pair counters into ring elements: a
character-sum kernel accumulates integer counts keyed by (i mod p, j mod ell)
— an order-independent, parallel-merge-safe representation — and calls
``from_exponent_counts`` exactly once at the end.
"""

from __future__ import annotations

import cmath
import functools

from .ffield import is_prime_int


class CycRing:
    """Z[zeta_p, zeta_ell] with dense integer-tuple values."""

    def __init__(self, p: int, ell: int):
        if not (is_prime_int(p) and is_prime_int(ell)):
            raise ValueError("p and ell must be prime")
        if p == ell:
            raise ValueError("p and ell must be distinct (ell | q-1 forces this)")
        self.p = p
        self.ell = ell
        self.dim_p = p - 1
        self.dim_l = ell - 1
        self.dim = self.dim_p * self.dim_l
        self.zero = (0,) * self.dim
        self.one = self.monomial(0, 0)
        # table[u][v] = basis_u * basis_v expressed in the basis
        self._mul_table = None

    def __eq__(self, other):
        return isinstance(other, CycRing) and (other.p, other.ell) == (self.p, self.ell)

    def __hash__(self):
        return hash(("CycRing", self.p, self.ell))

    def __repr__(self):
        return f"Z[zeta_{self.p}, zeta_{self.ell}]"

    # -- construction -------------------------------------------------------

    def _vec_p(self, i: int) -> tuple:
        """zeta_p^i as integer coordinates on 1, zeta_p, ..., zeta_p^(p-2)."""
        i %= self.p
        if i < self.dim_p:
            return tuple(1 if t == i else 0 for t in range(self.dim_p))
        return (-1,) * self.dim_p

    def _vec_l(self, j: int) -> tuple:
        j %= self.ell
        if j < self.dim_l:
            return tuple(1 if t == j else 0 for t in range(self.dim_l))
        return (-1,) * self.dim_l

    def monomial(self, i: int, j: int) -> tuple:
        """zeta_p^i * zeta_ell^j in basis coordinates (any integer exponents)."""
        vp, vl = self._vec_p(i), self._vec_l(j)
        out = [0] * self.dim
        for a, ca in enumerate(vp):
            if ca:
                row = a * self.dim_l
                for b, cb in enumerate(vl):
                    if cb:
                        out[row + b] = ca * cb
        return tuple(out)

    def from_int(self, n: int) -> tuple:
        return tuple(n * c for c in self.one)

    def from_exponent_counts(self, counts) -> tuple:
        """sum over (i, j) of counts[(i, j)] * zeta_p^i * zeta_ell^j.

        ``counts`` is any mapping from exponent pairs to integers; exponents
        may be arbitrary ints (folded mod p, mod ell).
        """
        out = [0] * self.dim
        for (i, j), c in counts.items():
            if not c:
                continue
            for t, m in enumerate(self.monomial(i, j)):
                if m:
                    out[t] += c * m
        return tuple(out)

    # -- ring operations ----------------------------------------------------

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scale(self, n: int, a):
        return tuple(n * x for x in a)

    def mul_table(self):
        if self._mul_table is None:
            table = []
            for u in range(self.dim):
                iu, ju = divmod(u, self.dim_l)
                row = []
                for v in range(self.dim):
                    iv, jv = divmod(v, self.dim_l)
                    row.append(self.monomial(iu + iv, ju + jv))
                table.append(row)
            self._mul_table = table
        return self._mul_table

    def mul(self, a, b):
        table = self.mul_table()
        out = [0] * self.dim
        for u, x in enumerate(a):
            if not x:
                continue
            row = table[u]
            for v, y in enumerate(b):
                if not y:
                    continue
                prod = row[v]
                for t, m in enumerate(prod):
                    if m:
                        out[t] += x * y * m
        return tuple(out)

    def conj(self, a):
        """Complex conjugation: zeta -> zeta^(-1) on both generators."""
        out = [0] * self.dim
        for u, x in enumerate(a):
            if not x:
                continue
            iu, ju = divmod(u, self.dim_l)
            for t, m in enumerate(self.monomial(-iu, -ju)):
                if m:
                    out[t] += x * m
        return tuple(out)

    def div_int(self, a, n: int):
        """Exact division by a nonzero integer; raises if any coordinate
        fails divisibility (the identity checks rely on this)."""
        if n == 0:
            raise ZeroDivisionError("division by zero")
        out = []
        for x in a:
            if x % n:
                raise ArithmeticError(f"non-exact division of {a} by {n}")
            out.append(x // n)
        return tuple(out)

    # -- recognition and embedding ------------------------------------------

    def as_int(self, a):
        """The rational integer n with a == n, or None."""
        n = a[0]
        if a == self.from_int(n):
            return n
        return None

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def embed(self, a) -> complex:
        """Complex embedding zeta_p -> exp(2 pi i / p), zeta_ell -> exp(2 pi i / ell)."""
        out = 0j
        for u, x in enumerate(a):
            if not x:
                continue
            iu, ju = divmod(u, self.dim_l)
            out += x * cmath.exp(2j * cmath.pi * (iu / self.p + ju / self.ell))
        return out

    def abs_embed(self, a) -> float:
        return abs(self.embed(a))

    # -- serialization -------------------------------------------------------

    def serialize(self, a) -> dict:
        return {"p": self.p, "ell": self.ell, "coords": list(a)}

    def deserialize(self, obj) -> tuple:
        if (obj["p"], obj["ell"]) != (self.p, self.ell):
            raise ValueError("cyclotomic header mismatch")
        coords = tuple(int(c) for c in obj["coords"])
        if len(coords) != self.dim:
            raise ValueError("coordinate length mismatch")
        return coords


@functools.lru_cache(maxsize=None)
def cyc_ring(p: int, ell: int) -> CycRing:
    return CycRing(p, ell)

"""Dense univariate polynomials over F_p in the variable S."""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import IncompatibleCongruences, InvalidInput
from .ff_linalg import field_inv

NEG_INF = float("-inf")

# below this many coefficients in the shorter factor, schoolbook wins
KRONECKER_CROSSOVER = 24


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _school_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _kron_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    # pack coefficients into big integers, multiply, unpack
    n = min(len(a), len(b))
    k = (2 * p.bit_length() + n.bit_length() + 8) // 8
    pa = int.from_bytes(b"".join(x.to_bytes(k, "little") for x in a), "little")
    pb = int.from_bytes(b"".join(x.to_bytes(k, "little") for x in b), "little")
    length = len(a) + len(b) - 1
    raw = (pa * pb).to_bytes(k * length, "little")
    return [int.from_bytes(raw[i:i + k], "little") % p for i in range(0, k * length, k)]


def mul_coeffs(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) < KRONECKER_CROSSOVER:
        return _trim(_school_mul(a, b, p))
    return _trim(_kron_mul(a, b, p))


class UPoly:
    """Polynomial with ascending coefficient list; zero has no coefficients."""

    __slots__ = ("c", "p")

    def __init__(self, coeffs: Iterable[int], p: int):
        self.p = p
        self.c = _trim([int(x) % p for x in coeffs])

    @classmethod
    def _raw(cls, coeffs: list[int], p: int) -> "UPoly":
        # coeffs already reduced and trimmed
        obj = cls.__new__(cls)
        obj.p = p
        obj.c = coeffs
        return obj

    @classmethod
    def zero(cls, p: int) -> "UPoly":
        return cls._raw([], p)

    @classmethod
    def const(cls, a: int, p: int) -> "UPoly":
        return cls([a], p)

    @classmethod
    def var(cls, p: int) -> "UPoly":
        return cls._raw([0, 1], p)

    @classmethod
    def linear(cls, root: int, p: int) -> "UPoly":
        """The monic polynomial S - root."""
        return cls([-root, 1], p)

    @property
    def degree(self) -> int | float:
        return len(self.c) - 1 if self.c else NEG_INF

    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == [1]

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == ([other % self.p] if other % self.p else [])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, tuple(self.c)))

    def __repr__(self) -> str:
        return f"UPoly({self.c}, p={self.p})"

    def _lift(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            if other.p != self.p:
                raise InvalidInput("polynomials over different fields")
            return other
        return UPoly([other], self.p)

    def __add__(self, other) -> "UPoly":
        o = self._lift(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = (out[i] + x) % self.p
        return UPoly._raw(_trim(out), self.p)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly._raw([(-x) % self.p for x in self.c], self.p)

    def __sub__(self, other) -> "UPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "UPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "UPoly":
        if isinstance(other, int):
            a = other % self.p
            if a == 0:
                return UPoly.zero(self.p)
            return UPoly._raw([x * a % self.p for x in self.c], self.p)
        o = self._lift(other)
        return UPoly._raw(mul_coeffs(self.c, o.c, self.p), self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UPoly":
        result = UPoly.const(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other) -> tuple["UPoly", "UPoly"]:
        return divrem(self, self._lift(other))

    def __floordiv__(self, other) -> "UPoly":
        return divrem(self, self._lift(other))[0]

    def __mod__(self, other) -> "UPoly":
        return divrem(self, self._lift(other))[1]

    def __call__(self, x: int) -> int:
        return self.eval(x)

    def eval(self, x: int) -> int:
        acc = 0
        p = self.p
        for a in reversed(self.c):
            acc = (acc * x + a) % p
        return acc

    def monic(self) -> "UPoly":
        if not self.c:
            return self
        inv = field_inv(self.c[-1], self.p)
        return self * inv

    def derivative(self) -> "UPoly":
        return UPoly([i * a for i, a in enumerate(self.c)][1:], self.p)

    def shift(self, k: int) -> "UPoly":
        """Multiply by S**k."""
        if not self.c:
            return self
        return UPoly._raw([0] * k + self.c, self.p)

    def truncate(self, k: int) -> "UPoly":
        """Reduce modulo S**k."""
        return UPoly._raw(_trim(self.c[:k]), self.p)

    def to_text(self) -> str:
        return " ".join(str(a) for a in self.c) if self.c else "0"

    @classmethod
    def from_text(cls, text: str, p: int) -> "UPoly":
        parts = text.split()
        if not parts:
            raise InvalidInput("empty polynomial text")
        try:
            return cls([int(t) for t in parts], p)
        except ValueError as exc:
            raise InvalidInput(f"bad polynomial text {text!r}") from exc


def divrem(f: UPoly, g: UPoly) -> tuple[UPoly, UPoly]:
    if not g.c:
        raise ZeroDivisionError("polynomial division by zero")
    p = f.p
    db = len(g.c) - 1
    if len(f.c) <= db:
        return UPoly.zero(p), f
    if db == 0:
        inv = field_inv(g.c[0], p)
        return f * inv, UPoly.zero(p)
    rem = list(f.c)
    b = g.c
    inv = field_inv(b[-1], p)
    q = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] % p * inv % p
        q[k] = c
        if c:
            for j in range(db):
                rem[k + j] -= c * b[j]
    r = _trim([x % p for x in rem[:db]])
    return UPoly._raw(_trim(q), p), UPoly._raw(r, p)


def _series_inverse(f: UPoly, k: int) -> UPoly:
    """Inverse of f modulo S**k by Newton iteration (f(0) != 0)."""
    p = f.p
    g = UPoly.const(field_inv(f.coeff(0), p), p)
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        e = (f.truncate(prec) * g).truncate(prec)
        g = (g * (2 - e)).truncate(prec)
    return g


class Modulus:
    """A fixed nonzero modulus with precomputed data for fast reduction."""

    __slots__ = ("m", "n", "p", "_rev_inv")

    def __init__(self, m: UPoly):
        if not m.c:
            raise ZeroDivisionError("zero modulus")
        self.m = m
        self.p = m.p
        self.n = len(m.c) - 1
        self._rev_inv = None

    def reduce(self, f: UPoly) -> UPoly:
        n = self.n
        df = len(f.c) - 1
        if df < n:
            return f
        if n < KRONECKER_CROSSOVER or df >= 2 * n:
            return divrem(f, self.m)[1]
        if self._rev_inv is None:
            rev = UPoly._raw(list(reversed(self.m.c)), self.p)
            self._rev_inv = _series_inverse(rev, n)
        k = df - n + 1
        rev_f = UPoly(list(reversed(f.c))[:k], self.p)
        q_rev = (rev_f * self._rev_inv).truncate(k)
        qc = list(reversed(q_rev.c)) if q_rev.c else []
        qc = [0] * (k - len(qc)) + qc
        q = UPoly._raw(_trim(qc), self.p)
        return (f - q * self.m).truncate(n)

    def mul(self, a: UPoly, b: UPoly) -> UPoly:
        return self.reduce(a * b)

    def pow(self, a: UPoly, e: int) -> UPoly:
        result = self.reduce(UPoly.const(1, self.p))
        base = self.reduce(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result


def gcd(f: UPoly, g: UPoly) -> UPoly:
    a, b = f, g
    while b.c:
        a, b = b, divrem(a, b)[1]
    return a.monic()


def xgcd(f: UPoly, g: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Return (d, a, b) with d = gcd(f, g) monic and a*f + b*g = d."""
    p = f.p
    if not f.c and not g.c:
        raise InvalidInput("xgcd of two zero polynomials")
    r0, r1 = f, g
    s0, s1 = UPoly.const(1, p), UPoly.zero(p)
    t0, t1 = UPoly.zero(p), UPoly.const(1, p)
    while r1.c:
        q, r = divrem(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = field_inv(r0.lc(), p)
    return r0 * inv, s0 * inv, t0 * inv


def inverse_mod(a: UPoly, m: UPoly) -> UPoly:
    d, s, _ = xgcd(a % m, m)
    if not d.is_one():
        raise ZeroDivisionError("polynomial is not invertible modulo the modulus")
    return s % m


def lcm(f: UPoly, g: UPoly) -> UPoly:
    return (f * (g // gcd(f, g))).monic()


def xcrt(chi1: UPoly, chi2: UPoly, u1: UPoly, u2: UPoly) -> UPoly:
    """Combine w = u1 mod chi1 and w = u2 mod chi2 for non-coprime moduli."""
    g, a1, a2 = xgcd(chi1, chi2)
    if ((u1 - u2) % g).c:
        raise IncompatibleCongruences("residues disagree modulo gcd of the moduli")
    c1 = chi1 // g
    c2 = chi2 // g
    modulus = lcm(chi1, chi2)
    return (u2 * a1 * c1 + u1 * a2 * c2) % modulus


def pth_root(f: UPoly) -> UPoly:
    """g with g**p = f, assuming f' = 0 (Frobenius fixes F_p)."""
    return UPoly(f.c[:: f.p], f.p)


def squarefree_part(f: UPoly) -> UPoly:
    """Product of the distinct monic irreducible factors of f."""
    if not f.c:
        raise InvalidInput("squarefree part of the zero polynomial")
    f = f.monic()
    if len(f.c) == 1:
        return f
    d = f.derivative()
    if not d.c:
        return squarefree_part(pth_root(f))
    g = gcd(f, d)
    a = f // g
    # strip from g every factor already in a; what is left has multiplicity divisible by p
    b = g
    while True:
        c = gcd(b, a)
        if c.is_one():
            break
        b = b // c
    if len(b.c) == 1:
        return a
    return (a * squarefree_part(b)).monic()


def compose_mod(f: UPoly, g: UPoly, chi: UPoly | Modulus) -> UPoly:
    """f(g) reduced modulo chi, by Horner's rule."""
    mod = chi if isinstance(chi, Modulus) else Modulus(chi)
    gm = g % mod.m
    acc = UPoly.zero(f.p)
    for a in reversed(f.c):
        acc = mod.reduce(mod.mul(acc, gm) + a)
    return acc


def interp_multi(xs: Sequence[int], ys_list: Sequence[Sequence[int]], p: int) -> list[UPoly]:
    """Lagrange interpolation of several value vectors on shared nodes."""
    n = len(xs)
    if n == 0:
        raise InvalidInput("interpolation needs at least one node")
    if len(set(x % p for x in xs)) != n:
        raise InvalidInput("interpolation nodes must be distinct")
    for ys in ys_list:
        if len(ys) != n:
            raise InvalidInput("node and value counts differ")
    # master polynomial prod (S - x_i), ascending
    master = [1]
    for x in xs:
        nxt = [0] * (len(master) + 1)
        for i, a in enumerate(master):
            nxt[i + 1] += a
            nxt[i] -= a * x
        master = [c % p for c in nxt]
    acc = [[0] * n for _ in ys_list]
    for k, x in enumerate(xs):
        # synthetic division master / (S - x)
        quo = [0] * n
        carry = 0
        for i in range(n, 0, -1):
            carry = (master[i] + carry * x) % p
            quo[i - 1] = carry
        denom = 0
        for a in reversed(quo):
            denom = (denom * x + a) % p
        w = field_inv(denom, p)
        for t, ys in enumerate(ys_list):
            scale = ys[k] * w % p
            if scale:
                row = acc[t]
                for i in range(n):
                    row[i] += scale * quo[i]
    return [UPoly(row, p) for row in acc]


def interp_points(xs: Sequence[int], ys: Sequence[int], p: int) -> UPoly:
    return interp_multi(xs, [ys], p)[0]


def roots(f: UPoly, rng: random.Random | None = None) -> list[int]:
    """Distinct roots of f in F_p (equal-degree splitting)."""
    p = f.p
    if not f.c:
        raise InvalidInput("roots of the zero polynomial")
    rng = rng or random.Random(0)
    mod = Modulus(f.monic())
    x = UPoly.var(p)
    split = gcd(mod.pow(x, p) - x, f)
    out: list[int] = []
    stack = [split]
    while stack:
        g = stack.pop()
        dg = len(g.c) - 1
        if dg <= 0:
            continue
        if dg == 1:
            out.append((-g.c[0]) * field_inv(g.c[1], p) % p)
            continue
        gm = Modulus(g)
        while True:
            a = rng.randrange(p)
            w = gm.pow(UPoly([a, 1], p), (p - 1) // 2) - 1
            d = gcd(w, g)
            if 0 < len(d.c) - 1 < dg:
                stack.extend([d, g // d])
                break
    return sorted(out)

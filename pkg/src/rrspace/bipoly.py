"""Sparse bivariate polynomials over F_p.

The first variable is X (or S after a shear), the second is Y. Terms are kept
in a dict mapping (i, j) exponent pairs to nonzero residues.
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

from .errors import InvalidInput
from .ff_linalg import field_inv
from .upoly import Modulus, UPoly, interp_multi


class BiPoly:
    __slots__ = ("terms", "p", "_tdeg", "_ydeg")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable, p: int):
        self.p = p
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, int], int] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise InvalidInput("negative exponent")
            key = (int(i), int(j))
            clean[key] = (clean.get(key, 0) + int(c)) % p
        self.terms = {k: v for k, v in clean.items() if v}
        self._tdeg = max((i + j for i, j in self.terms), default=-1)
        self._ydeg = max((j for _, j in self.terms), default=-1)

    @classmethod
    def const(cls, c: int, p: int) -> "BiPoly":
        return cls({(0, 0): c}, p)

    @classmethod
    def x(cls, p: int) -> "BiPoly":
        return cls({(1, 0): 1}, p)

    @classmethod
    def y(cls, p: int) -> "BiPoly":
        return cls({(0, 1): 1}, p)

    @property
    def total_degree(self) -> int | float:
        return self._tdeg if self.terms else float("-inf")

    @property
    def y_degree(self) -> int | float:
        return self._ydeg if self.terms else float("-inf")

    @property
    def x_degree(self) -> int | float:
        return max((i for i, _ in self.terms), default=float("-inf"))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*X^{i}*Y^{j}" for (i, j), c in sorted(self.terms.items()))
        return f"BiPoly({body or '0'}, p={self.p})"

    def _lift(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        return BiPoly.const(other, self.p)

    def __add__(self, other) -> "BiPoly":
        o = self._lift(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, 0) + c
        return BiPoly(out, self.p)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.terms.items()}, self.p)

    def __sub__(self, other) -> "BiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "BiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, int):
            return BiPoly({k: c * other for k, c in self.terms.items()}, self.p)
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPoly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiPoly":
        out = BiPoly.const(1, self.p)
        for _ in range(e):
            out = out * self
        return out

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def __call__(self, x: int, y: int) -> int:
        return self.eval(x, y)

    def eval(self, x: int, y: int) -> int:
        p = self.p
        return sum(c * pow(x, i, p) * pow(y, j, p) for (i, j), c in self.terms.items()) % p

    def homogeneous_part(self, d: int) -> "BiPoly":
        return BiPoly({k: c for k, c in self.terms.items() if k[0] + k[1] == d}, self.p)

    def y_coeffs(self) -> list[UPoly]:
        """Coefficients of Y**j as polynomials in the first variable."""
        if not self.terms:
            return []
        rows: list[dict[int, int]] = [dict() for _ in range(self._ydeg + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        out = []
        for row in rows:
            coeffs = [0] * (max(row) + 1 if row else 0)
            for i, c in row.items():
                coeffs[i] = c
            out.append(UPoly(coeffs, self.p))
        return out

    def at_x(self, x: int) -> UPoly:
        """Specialize the first variable to x, giving a polynomial in Y."""
        p = self.p
        out: dict[int, int] = {}
        for (i, j), c in self.terms.items():
            out[j] = (out.get(j, 0) + c * pow(x, i, p)) % p
        size = max(out, default=-1) + 1
        return UPoly([out.get(j, 0) for j in range(size)], p)

    def partials(self) -> tuple["BiPoly", "BiPoly"]:
        fx = {(i - 1, j): i * c for (i, j), c in self.terms.items() if i > 0}
        fy = {(i, j - 1): j * c for (i, j), c in self.terms.items() if j > 0}
        return BiPoly(fx, self.p), BiPoly(fy, self.p)

    def translate(self, a: UPoly, b: UPoly, modulus: Modulus | None = None) -> dict[tuple[int, int], UPoly]:
        """Coefficients of f(X + a(S), Y + b(S)) as polynomials in S.

        Returns a dict (i, j) -> UPoly, reduced modulo ``modulus`` when given.
        """
        p = self.p
        red = (lambda f: modulus.reduce(f % modulus.m)) if modulus else (lambda f: f)
        deg = max(self._tdeg, 0)
        apow = [UPoly.const(1, p)]
        bpow = [UPoly.const(1, p)]
        for _ in range(deg):
            apow.append(red(apow[-1] * a))
            bpow.append(red(bpow[-1] * b))
        out: dict[tuple[int, int], UPoly] = {}
        for (i, j), c in self.terms.items():
            for k in range(i + 1):
                ck = c * comb(i, k)
                for m in range(j + 1):
                    w = ck * comb(j, m) % p
                    if not w:
                        continue
                    term = red(apow[i - k] * bpow[j - m]) * w
                    key = (k, m)
                    out[key] = out[key] + term if key in out else term
        return {k: v for k, v in out.items() if v}

    def to_text(self) -> str:
        return "\n".join(f"{i} {j} {c}" for (i, j), c in sorted(self.terms.items()))

    @classmethod
    def from_text_lines(cls, lines: Iterable[str], p: int) -> "BiPoly":
        terms = []
        for line in lines:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise InvalidInput(f"bad term line {line!r}; expected 'i j c'")
            try:
                i, j, c = (int(t) for t in parts)
            except ValueError as exc:
                raise InvalidInput(f"bad term line {line!r}") from exc
            terms.append(((i, j), c))
        return cls(terms, p)


def eval_pair_mod(f: BiPoly, u: UPoly, v: UPoly, chi: UPoly | Modulus) -> UPoly:
    """f(u(S), v(S)) mod chi, accumulating u^i v^j in lexicographic order."""
    mod = chi if isinstance(chi, Modulus) else Modulus(chi)
    p = f.p
    if mod.n == 0:
        return UPoly.zero(p)
    if not f.terms:
        return UPoly.zero(p)
    u = u % mod.m
    v = v % mod.m
    by_i: dict[int, list[tuple[int, int]]] = {}
    for (i, j), c in f.terms.items():
        by_i.setdefault(i, []).append((j, c))
    max_j = f._ydeg
    vpow = [UPoly.const(1, p)]
    for _ in range(max_j):
        vpow.append(mod.mul(vpow[-1], v))
    acc = [0] * mod.n
    upow = UPoly.const(1, p)
    for i in range(max(by_i) + 1):
        if i:
            upow = mod.mul(upow, u)
        for j, c in by_i.get(i, ()):
            term = mod.mul(upow, vpow[j]) if i and j else (upow if j == 0 else vpow[j])
            for k, a in enumerate(term.c):
                acc[k] += c * a
    return UPoly(acc, p)


def shear(f: BiPoly, lam: int) -> BiPoly:
    """lam**deg(f) * f((S - Y)/lam, Y), with S as the first variable."""
    p = f.p
    lam %= p
    if lam == 0:
        raise InvalidInput("shear parameter must be nonzero")
    if not f.terms:
        return f
    d = f._tdeg
    lam_pows = [1]
    for _ in range(d):
        lam_pows.append(lam_pows[-1] * lam % p)
    out: dict[tuple[int, int], int] = {}
    for (i, j), c in f.terms.items():
        scale = c * lam_pows[d - i]
        # (S - Y)^i = sum_k C(i,k) S^k (-Y)^(i-k)
        for k in range(i + 1):
            w = scale * comb(i, k)
            if (i - k) & 1:
                w = -w
            key = (k, j + i - k)
            out[key] = out.get(key, 0) + w
    return BiPoly(out, p)


def is_noether_position(q: BiPoly) -> bool:
    if q.is_zero():
        raise InvalidInput("zero polynomial")
    d = q.total_degree
    return q.y_degree == d and q.coeff(0, d) != 0


# univariate resultant and first subresultant (determinantal convention)


def uni_resultant(f: UPoly, g: UPoly) -> int:
    """Sylvester resultant of f and g with their actual degrees."""
    p = f.p
    if not f.c or not g.c:
        return 0
    sign = 1
    acc = 1
    m, n = len(f.c) - 1, len(g.c) - 1
    while True:
        if n == 0:
            return sign * acc * pow(g.c[0], m, p) % p
        if m == 0:
            return sign * acc * pow(f.c[0], n, p) % p
        if m < n:
            f, g, m, n = g, f, n, m
            if (m * n) & 1:
                sign = -sign
            continue
        r = f % g
        if not r.c:
            return 0
        k = len(r.c) - 1
        if (m * n) & 1:
            sign = -sign
        acc = acc * pow(g.c[-1], m - k, p) % p
        f, g, m, n = g, r, n, k


def uni_first_subresultant(f: UPoly, g: UPoly) -> UPoly:
    """Degree-1 subresultant of f and g with their actual degrees (both >= 1)."""
    p = f.p
    m, n = len(f.c) - 1, len(g.c) - 1
    if m < 1 or n < 1:
        raise InvalidInput("first subresultant needs both degrees >= 1")
    scale = 1
    if m < n:
        f, g, m, n = g, f, n, m
        if ((m - 1) * (n - 1)) & 1:
            scale = -1
    while True:
        if n == 1:
            if m == 1:
                # S_1 of two linear polynomials is taken as g itself
                return g * scale
            return g * (scale * pow(g.c[-1], m - 2, p))
        r = f % g
        if n == 2:
            # j = n - 1: a multiple of the remainder, whatever its degree
            if (m - 1) & 1:
                scale = -scale
            return r * (scale * pow(g.c[-1], m - 1, p))
        k = len(r.c) - 1
        if k < 1:
            return UPoly.zero(p)
        if ((m - 1) * (n - 1)) & 1:
            scale = -scale
        scale = scale * pow(g.c[-1], m - k, p) % p
        f, g, m, n = g, r, n, k


def _sres_bound(A: BiPoly, B: BiPoly) -> int:
    m, n = A._ydeg, B._ydeg
    sa = max(i for i, _ in A.terms)
    sb = max(i for i, _ in B.terms)
    naive = sa * n + sb * m
    ta, tb = A._tdeg, B._tdeg
    bezout = ta * tb - (ta - m) * (tb - n)
    return max(0, min(naive, bezout))


def _bareiss_det(M: list[list[UPoly]]) -> UPoly:
    """Fraction-free determinant over k[S]; every division is exact."""
    n = len(M)
    p = M[0][0].p
    M = [row[:] for row in M]
    sign = 1
    prev = UPoly.const(1, p)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return UPoly.zero(p)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return M[n - 1][n - 1] * sign


def _sylvester_block(ya: list[UPoly], yb: list[UPoly], j: int) -> list[list[UPoly]]:
    """Rows Y^t*A (t < n-j) and Y^t*B (t < m-j), columns by descending power of Y."""
    m, n = len(ya) - 1, len(yb) - 1
    width = m + n - j
    zero = UPoly.zero(ya[0].p)
    rows = []
    for coeffs, count in ((ya, n - j), (yb, m - j)):
        for t in range(count):
            row = [zero] * width
            for k, c in enumerate(coeffs):
                row[width - 1 - (k + count - 1 - t)] = c
            rows.append(row)
    return rows


def _determinant_route(ya: list[UPoly], yb: list[UPoly], want_res: bool, want_sub: bool) -> list[UPoly]:
    out = []
    if want_res:
        out.append(_bareiss_det(_sylvester_block(ya, yb, 0)))
    if want_sub:
        rows = _sylvester_block(ya, yb, 1)
        width = len(rows[0]) if rows else 0
        lead = width - 2
        for k in (0, 1):
            square = [r[:lead] + [r[width - 1 - k]] for r in rows]
            out.append(_bareiss_det(square) if square else UPoly.zero(ya[0].p))
    return out


def _eval_interp(A: BiPoly, B: BiPoly, want_res: bool, want_sub: bool) -> list[UPoly]:
    p = A.p
    ya, yb = A.y_coeffs(), B.y_coeffs()
    bound = _sres_bound(A, B)
    lca, lcb = ya[-1], yb[-1]
    points: list[int] = []
    s = 0
    while len(points) < bound + 1:
        if s >= p:
            # small field: too few good evaluation points, use exact determinants over k[S]
            return _determinant_route(ya, yb, want_res, want_sub)
        if lca.eval(s) and lcb.eval(s):
            points.append(s)
        s += 1
    columns: list[list[int]] = []
    if want_res:
        columns.append([])
    if want_sub:
        columns += [[], []]
    for s in points:
        fa = UPoly([c.eval(s) for c in ya], p)
        fb = UPoly([c.eval(s) for c in yb], p)
        if want_res:
            columns[0].append(uni_resultant(fa, fb))
        if want_sub:
            sub = uni_first_subresultant(fa, fb)
            columns[-2].append(sub.coeff(0))
            columns[-1].append(sub.coeff(1))
    return interp_multi(points, columns, p)


def resultant_y(A: BiPoly, B: BiPoly) -> UPoly:
    """Res_Y(A, B) in k[S], not normalized."""
    p = A.p
    if A.is_zero() or B.is_zero():
        raise InvalidInput("resultant of a zero polynomial")
    if A._ydeg == 0 and B._ydeg == 0:
        return UPoly.const(1, p)
    if B._ydeg == 0:
        return B.y_coeffs()[0] ** A._ydeg
    if A._ydeg == 0:
        return A.y_coeffs()[0] ** B._ydeg
    return _eval_interp(A, B, True, False)[0]


def first_subresultant_y(A: BiPoly, B: BiPoly) -> tuple[UPoly, UPoly]:
    if A.is_zero() or B.is_zero() or min(A._ydeg, B._ydeg) < 1:
        raise InvalidInput("first subresultant needs Y-degrees >= 1")
    a0, a1 = _eval_interp(A, B, False, True)
    return a0, a1


def resultant_and_subresultant_y(A: BiPoly, B: BiPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Res_Y(A, B) and the coefficients (a0, a1) of the first subresultant."""
    if A.is_zero() or B.is_zero() or min(A._ydeg, B._ydeg) < 1:
        raise InvalidInput("first subresultant needs Y-degrees >= 1")
    res, a0, a1 = _eval_interp(A, B, True, True)
    return res, a0, a1

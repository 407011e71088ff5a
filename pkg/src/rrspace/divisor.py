"""Primitive element representations of divisors on a plane curve.

A smooth effective divisor is stored as (lam, chi, u, v): its points are
(u(s), v(s)) for the roots s of chi, and lam*X + Y separates them.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb
from typing import Iterator

import numpy as np

from .bipoly import BiPoly, eval_pair_mod, is_noether_position, uni_resultant
from .errors import DrawFailed, InvalidInput, RRError, RetriesExhausted, SingularMatrixError
from .ff_linalg import char_poly, field_inv, solve, zeros
from .randomness import RngConfig
from .upoly import Modulus, UPoly, compose_mod, gcd, interp_points, inverse_mod, lcm, xcrt


@dataclass(frozen=True)
class SmoothDivisor:
    lam: int
    chi: UPoly
    u: UPoly
    v: UPoly

    @classmethod
    def zero(cls, p: int, lam: int = 0) -> "SmoothDivisor":
        z = UPoly.zero(p)
        return cls(lam % p, UPoly.const(1, p), z, z)

    @classmethod
    def point(cls, x: int, y: int, lam: int, p: int) -> "SmoothDivisor":
        """Single rational point (x, y) with primitive element lam*X + Y."""
        s = (lam * x + y) % p
        return cls(lam % p, UPoly.linear(s, p), UPoly.const(x, p), UPoly.const(y, p))

    @property
    def p(self) -> int:
        return self.chi.p

    @property
    def degree(self) -> int:
        return len(self.chi.c) - 1

    def is_zero(self) -> bool:
        return self.degree == 0

    def lines(self) -> list[str]:
        return [f"lambda={self.lam}", f"chi={self.chi.to_text()}",
                f"u={self.u.to_text()}", f"v={self.v.to_text()}"]


@dataclass(frozen=True)
class NodalDivisor:
    """The nodes, parametrized like a smooth divisor, plus the tangent test polynomial."""

    lam: int
    chi: UPoly
    u: UPoly
    v: UPoly
    T: UPoly

    @classmethod
    def empty(cls, p: int) -> "NodalDivisor":
        z = UPoly.zero(p)
        one = UPoly.const(1, p)
        return cls(0, one, z, z, one)

    @property
    def r(self) -> int:
        return len(self.chi.c) - 1

    def lines(self) -> list[str]:
        return [f"lambda={self.lam}", f"chi={self.chi.to_text()}", f"u={self.u.to_text()}",
                f"v={self.v.to_text()}", f"T_E={self.T.to_text()}"]


@dataclass(frozen=True)
class Curve:
    q: BiPoly
    nodal: NodalDivisor
    qx: BiPoly = field(init=False, repr=False, compare=False)
    qy: BiPoly = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.q.is_zero() or not is_noether_position(self.q):
            raise InvalidInput("curve polynomial must be monic in Y up to a scalar, with Y-degree equal to its degree")
        if self.delta < 2:
            raise InvalidInput("curve degree must be at least 2")
        genus(self.delta, self.r)
        if self.nodal.chi.p != self.p:
            raise InvalidInput("nodal data lives over a different field")
        qx, qy = self.q.partials()
        object.__setattr__(self, "qx", qx)
        object.__setattr__(self, "qy", qy)

    @classmethod
    def smooth(cls, q: BiPoly) -> "Curve":
        return cls(q, NodalDivisor.empty(q.p))

    @property
    def p(self) -> int:
        return self.q.p

    @property
    def delta(self) -> int:
        return int(self.q.total_degree)

    @property
    def r(self) -> int:
        return self.nodal.r

    @property
    def genus(self) -> int:
        return genus(self.delta, self.r)


def genus(delta: int, r: int) -> int:
    g = comb(delta - 1, 2) - r
    if g < 0:
        raise InvalidInput(f"{r} nodes is too many for a curve of degree {delta}")
    return g


def _jacobian_test(C: Curve, u: UPoly, v: UPoly, lam: int, mod: Modulus) -> UPoly:
    """q_X(u, v) - lam*q_Y(u, v) reduced modulo the divisor's chi."""
    return eval_pair_mod(C.qx, u, v, mod) - eval_pair_mod(C.qy, u, v, mod) * lam


def validate(D: SmoothDivisor, C: Curve) -> tuple[bool, str | None]:
    """Check degree bounds and Div-H1..H3; returns (ok, first failure)."""
    p = C.p
    if D.chi.p != p or D.u.p != p or D.v.p != p:
        return False, "field mismatch"
    if D.chi.is_zero() or D.chi.lc() != 1:
        return False, "chi must be monic and nonzero"
    n = D.degree
    if n == 0:
        if D.u or D.v:
            return False, "zero divisor needs u = v = 0"
        return True, None
    if D.u.degree >= n or D.v.degree >= n:
        return False, "deg u and deg v must be below deg chi"
    mod = Modulus(D.chi)
    if eval_pair_mod(C.q, D.u, D.v, mod):
        return False, "H1 violated: q(u, v) is not 0 mod chi"
    s = UPoly.var(p)
    if ((D.u * D.lam + D.v - s) % D.chi).c:
        return False, "H2 violated: lam*u + v is not S mod chi"
    if not gcd(_jacobian_test(C, D.u, D.v, D.lam, mod), D.chi).is_one():
        return False, "H3 violated: lam*X + Y is tangent or points are singular"
    return True, None


def validate_nodal(E: NodalDivisor, q: BiPoly) -> tuple[bool, str | None]:
    p = q.p
    r = E.r
    if E.chi.is_zero() or E.chi.lc() != 1:
        return False, "chi_E must be monic"
    if E.T.is_zero() or E.T.lc() != 1:
        return False, "T_E must be monic"
    if r == 0:
        if E.u or E.v or not E.T.is_one():
            return False, "empty nodal data needs u_E = v_E = 0 and T_E = 1"
        return True, None
    if E.u.degree >= r or E.v.degree >= r:
        return False, "deg u_E and deg v_E must be below r"
    if not gcd(E.chi, E.chi.derivative()).is_one():
        return False, "chi_E must be squarefree"
    mod = Modulus(E.chi)
    qx, qy = q.partials()
    for name, f in (("q", q), ("q_X", qx), ("q_Y", qy)):
        if eval_pair_mod(f, E.u, E.v, mod):
            return False, f"{name} does not vanish at the nodes"
    s = UPoly.var(p)
    if ((E.u * E.lam + E.v - s) % E.chi).c:
        return False, "lam_E*u_E + v_E is not S mod chi_E"
    a, b, c = tangent_cone(q, E.chi, E.u, E.v)
    disc = (b * b - a * c * 4) % E.chi
    if not gcd(disc, E.chi).is_one():
        return False, "a singular point has a degenerate tangent cone (not an ordinary node)"
    if E.T.degree > 2 * r:
        return False, "deg T_E exceeds 2r"
    if E.T != compute_T_E(q, E.chi, E.u, E.v):
        return False, "T_E does not match the tangent cones"
    return True, None


def tangent_cone(q: BiPoly, chi: UPoly, u: UPoly, v: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Coefficients of X^2, XY, Y^2 in q(X + u, Y + v), reduced mod chi."""
    p = q.p
    mod = Modulus(chi)
    qx, qy = q.partials()
    qxx, qxy = qx.partials()
    _, qyy = qy.partials()
    half = field_inv(2, p)
    a = eval_pair_mod(qxx, u, v, mod) * half
    b = eval_pair_mod(qxy, u, v, mod)
    c = eval_pair_mod(qyy, u, v, mod) * half
    return a, b, c


def compute_T_E(q: BiPoly, chi: UPoly, u: UPoly, v: UPoly) -> UPoly:
    """Monic Res_S(Q2(1, -lam, S), chi(S)) as a polynomial in lam."""
    p = q.p
    r = len(chi.c) - 1
    if r == 0:
        return UPoly.const(1, p)
    a, b, c = tangent_cone(q, chi, u, v)
    npts = 2 * r + 1
    if npts > p:
        raise InvalidInput("field too small to interpolate T_E")
    xs = list(range(npts))
    ys = [uni_resultant(chi, (a - b * lam + c * (lam * lam)) % chi) for lam in xs]
    T = interp_points(xs, ys, p)
    if T.is_zero():
        raise InvalidInput("degenerate tangent cone at a node")
    return T.monic()


def _mult_matrix(z: UPoly, chi: UPoly) -> np.ndarray:
    """Matrix of f -> z*f on k[S]/chi in the monomial basis."""
    p = chi.p
    n = len(chi.c) - 1
    M = zeros(n, n, p)
    col = list(z.c) + [0] * (n - len(z.c))
    low = chi.c[:n]
    for i in range(n):
        M[:len(col), i] = col
        # multiply by S and reduce by the monic chi
        top = col[-1]
        col = [0] + col[:-1]
        if top:
            col = [(x - top * y) % p for x, y in zip(col, low)]
    return M


def _power_matrix(z: UPoly, mod: Modulus) -> np.ndarray:
    """Columns z^i mod chi for i < deg chi."""
    p = mod.p
    n = mod.n
    N = zeros(n, n, p)
    w = UPoly.const(1, p)
    for i in range(n):
        N[:len(w.c), i] = w.c
        w = mod.mul(w, z)
    return N


def reparametrize(chi: UPoly, u: UPoly, v: UPoly, lam_new: int) -> tuple[UPoly, UPoly, UPoly]:
    """Core of the primitive element change, without the tangency test."""
    p = chi.p
    mod = Modulus(chi)
    z = (u * lam_new + v) % chi
    chi_new = char_poly(_mult_matrix(z, chi), p)
    N = _power_matrix(z, mod)
    n = mod.n
    rhs = zeros(n, 2, p)
    rhs[:len(u.c), 0] = u.c
    rhs[:len(v.c), 1] = v.c
    try:
        sol = solve(N, rhs, p)
    except SingularMatrixError as exc:
        raise DrawFailed("lam*X + Y does not separate the points", "not-primitive") from exc
    return chi_new, UPoly(sol[:, 0], p), UPoly(sol[:, 1], p)


def change_prim_elt(D: SmoothDivisor, lam_new: int, C: Curve) -> SmoothDivisor:
    p = C.p
    lam_new %= p
    if D.is_zero():
        return replace(D, lam=lam_new)
    if lam_new == D.lam:
        return D
    mod = Modulus(D.chi)
    if not gcd(_jacobian_test(C, D.u, D.v, lam_new, mod), D.chi).is_one():
        raise DrawFailed("new direction is tangent at a point of the divisor", "tangent")
    chi_new, u_new, v_new = reparametrize(D.chi, D.u, D.v, lam_new)
    return SmoothDivisor(lam_new, chi_new, u_new, v_new)


def change_prim_elt_nodal(E: NodalDivisor, lam_new: int) -> tuple[UPoly, UPoly, UPoly]:
    if E.r == 0 or lam_new % E.chi.p == E.lam:
        return E.chi, E.u, E.v
    return reparametrize(E.chi, E.u, E.v, lam_new)


def hensel_lifting_step(C: Curve, D: SmoothDivisor, chi_hat: UPoly) -> tuple[UPoly, UPoly]:
    """One Newton step lifting (u, v) from chi to chi_hat, where chi_hat | chi^2."""
    p = C.p
    if chi_hat.degree <= 0:
        return UPoly.zero(p), UPoly.zero(p)
    mod = Modulus(chi_hat)
    u = D.u % chi_hat
    v = D.v % chi_hat
    lam = D.lam
    qv = eval_pair_mod(C.q, u, v, mod)
    qx = eval_pair_mod(C.qx, u, v, mod)
    qy = eval_pair_mod(C.qy, u, v, mod)
    e = (u * lam + v - UPoly.var(p)) % chi_hat
    try:
        inv = inverse_mod(qx - qy * lam, chi_hat)
    except ZeroDivisionError as exc:
        raise RRError("Hensel denominator is not invertible; input breaks H3") from exc
    u_new = (u - mod.mul(qv - mod.mul(e, qy), inv)) % chi_hat
    v_new = (v - mod.mul(mod.mul(e, qx) - qv * lam, inv)) % chi_hat
    return u_new, v_new


def _lambda_candidates(D1: SmoothDivisor, D2: SmoothDivisor, rng: RngConfig, p: int) -> Iterator[int]:
    # reuse an existing primitive element first; this skips one or both changes
    seen = []
    for lam in (D1.lam, D2.lam):
        if lam not in seen:
            seen.append(lam)
            yield lam
    for _ in range(rng.retry_budget):
        yield rng.element(p)


def common_primitive(D1: SmoothDivisor, D2: SmoothDivisor, C: Curve, rng: RngConfig, routine: str):
    """Move both divisors to one primitive element; returns (lam, D1', D2', gcd of chis)."""
    last = None
    tries = 0
    for lam in _lambda_candidates(D1, D2, rng, C.p):
        tries += 1
        try:
            E1 = change_prim_elt(D1, lam, C)
            E2 = change_prim_elt(D2, lam, C)
        except DrawFailed as exc:
            last = str(exc)
            continue
        g = gcd(E1.chi, E2.chi)
        if ((E1.u - E2.u) % g).c:
            last = "two distinct points share a value of lam*X + Y"
            continue
        if ((E1.v - E2.v) % g).c:
            raise RRError("v-coordinates disagree on the common part; corrupted divisor data")
        return lam, E1, E2, g
    raise RetriesExhausted(routine, tries, last)


def add(D1: SmoothDivisor, D2: SmoothDivisor, C: Curve, rng: RngConfig) -> SmoothDivisor:
    """Representation of D1 + D2."""
    if D2.is_zero():
        return D1
    if D1.is_zero():
        return D2
    lam, E1, E2, g = common_primitive(D1, D2, C, rng, "add")
    chi_hat = E1.chi * E2.chi
    u = xcrt(E1.chi, E2.chi, E1.u, E2.u)
    v = xcrt(E1.chi, E2.chi, E1.v, E2.v)
    if g.is_one():
        return SmoothDivisor(lam, chi_hat, u, v)
    # the CRT only pins the points down modulo the lcm; one Newton step restores multiplicities
    m = lcm(E1.chi, E2.chi)
    u_hat, v_hat = hensel_lifting_step(C, SmoothDivisor(lam, m, u, v), chi_hat)
    return SmoothDivisor(lam, chi_hat, u_hat, v_hat)


def subtract(D1: SmoothDivisor, D2: SmoothDivisor, C: Curve, rng: RngConfig) -> SmoothDivisor:
    """Representation of the positive part of D1 - D2."""
    if D2.is_zero() or D1.is_zero():
        return D1
    lam, E1, E2, g = common_primitive(D1, D2, C, rng, "subtract")
    chi_hat = E1.chi // g
    if chi_hat.degree == 0:
        return SmoothDivisor.zero(C.p, lam)
    return SmoothDivisor(lam, chi_hat, E1.u % chi_hat, E1.v % chi_hat)


def equals(D1: SmoothDivisor, D2: SmoothDivisor) -> bool:
    """Whether two representations describe the same effective divisor."""
    if D1.degree != D2.degree:
        return False
    if D1.is_zero():
        return True
    chi2 = D2.chi
    mod = Modulus(chi2)
    z = (D2.u * D1.lam + D2.v) % chi2
    if char_poly(_mult_matrix(z, chi2), chi2.p) != D1.chi:
        return False
    if compose_mod(D1.u, z, mod) != D2.u % chi2:
        return False
    return compose_mod(D1.v, z, mod) == D2.v % chi2


__all__ = [
    "Curve", "NodalDivisor", "SmoothDivisor", "add", "change_prim_elt", "common_primitive", "change_prim_elt_nodal",
    "compute_T_E", "equals", "genus", "hensel_lifting_step", "reparametrize", "subtract",
    "tangent_cone", "validate", "validate_nodal",
]

"""Riemann-Roch spaces L(D+ - D-) on nodal plane curves.

The pipeline: find h vanishing on D+ and the nodes, compute its divisor,
remove D+ and add D-, then collect the numerators b of degree deg h with
(b) at least that residual divisor. The space is {b/h}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, isqrt
from typing import Iterator, Sequence

import numpy as np

from .bipoly import (BiPoly, eval_pair_mod, first_subresultant_y, resultant_and_subresultant_y,
                     resultant_y, shear)
from .divisor import (Curve, NodalDivisor, SmoothDivisor, _mult_matrix, add, change_prim_elt_nodal,
                      common_primitive, compute_T_E, subtract, tangent_cone)
from .errors import (AssumptionViolated, DrawFailed, InvalidInput, NotNodal, RetriesExhausted,
                     RRError, ZerosAtInfinity)
from .ff_linalg import char_poly, field_inv, kernel_basis, zeros
from .randomness import RngConfig
from .upoly import Modulus, UPoly, gcd, inverse_mod, squarefree_part


@dataclass
class RRBasis:
    """Common denominator h and numerators; the basis functions are b/h."""

    h: BiPoly
    numerators: list[BiPoly]
    intermediates: dict[str, SmoothDivisor] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.numerators)


# monomial spaces


def interpolation_degree(delta: int, w: int) -> int:
    """Smallest convenient d whose monomial space (deg_Y < delta) exceeds w."""
    if delta < 2 or w < 0:
        raise InvalidInput("need delta >= 2 and w >= 0")
    if comb(delta + 1, 2) <= w:
        return (2 * w + delta * (delta - 1)) // (2 * delta)
    return (isqrt(1 + 8 * w) - 1) // 2


def monomial_space_dim(d: int, delta: int) -> int:
    if d >= delta:
        return delta * (2 * d + 3 - delta) // 2
    return comb(d + 2, 2)


def monomials(d: int, delta: int) -> list[tuple[int, int]]:
    """Exponents (i, j) with i + j <= d and j < delta, ascending in graded lex (X > Y)."""
    out = [(i, t - i) for t in range(d + 1) for i in range(t + 1) if t - i < delta]
    out.sort(key=lambda e: (e[0] + e[1], e[0]))
    return out


def _evaluations(monos: Sequence[tuple[int, int]], u: UPoly, v: UPoly, chi: UPoly) -> np.ndarray:
    """Column k holds the coefficients of u^i v^j mod chi for monos[k] = (i, j)."""
    p = chi.p
    n = len(chi.c) - 1
    M = zeros(n, len(monos), p)
    if n == 0:
        return M
    mod = Modulus(chi)
    u = u % chi
    v = v % chi
    max_i = max(i for i, _ in monos)
    max_j = max(j for _, j in monos)
    vpow = [UPoly.const(1, p)]
    for _ in range(max_j):
        vpow.append(mod.mul(vpow[-1], v))
    cache: dict[tuple[int, int], UPoly] = {}
    for j in range(max_j + 1):
        cur = vpow[j]
        cache[(0, j)] = cur
        for i in range(1, max_i + 1):
            cur = mod.mul(cur, u)
            cache[(i, j)] = cur
    for k, e in enumerate(monos):
        c = cache[e].c
        M[:len(c), k] = c
    return M


def _conditions(C: Curve, D: SmoothDivisor, monos: Sequence[tuple[int, int]]) -> np.ndarray:
    E = C.nodal
    blocks = [_evaluations(monos, D.u, D.v, D.chi), _evaluations(monos, E.u, E.v, E.chi)]
    return np.concatenate(blocks, axis=0)


def _to_bipoly(vec, monos, p) -> BiPoly:
    return BiPoly({e: int(c) for e, c in zip(monos, vec) if c}, p)


def constrained_space(C: Curve, D: SmoothDivisor, d: int) -> list[BiPoly]:
    """Basis of {f : deg f <= d, deg_Y f < delta, f vanishes on D and at the nodes}."""
    monos = monomials(d, C.delta)
    M = _conditions(C, D, monos)
    if M.shape[0] == 0:
        return [BiPoly({e: 1}, C.p) for e in monos]
    return [_to_bipoly(vec, monos, C.p) for vec in kernel_basis(M, C.p)]


def random_combination(basis: Sequence[BiPoly], rng: RngConfig, p: int) -> BiPoly:
    mu = rng.nonzero_vector(len(basis), p)
    out: dict[tuple[int, int], int] = {}
    for m, b in zip(mu, basis):
        if m:
            for e, c in b.terms.items():
                out[e] = out.get(e, 0) + m * c
    return BiPoly(out, p)


def interpolate(C: Curve, D: SmoothDivisor, rng: RngConfig,
                extra_degree: int = 0) -> tuple[BiPoly, list[BiPoly]]:
    """A random h with (h) >= D + E, together with the kernel it was drawn from."""
    d = interpolation_degree(C.delta, D.degree + C.r) + extra_degree
    kernel = constrained_space(C, D, d)
    if not kernel:
        raise RRError("interpolation kernel is empty; this contradicts the dimension count")
    return random_combination(kernel, rng, C.p), kernel


def numerator_basis(C: Curve, D_num: SmoothDivisor, d: int) -> list[BiPoly]:
    return constrained_space(C, D_num, d)


# divisors of functions


def _lambda_draws(rng: RngConfig, p: int, prefer: int | None) -> Iterator[int]:
    if prefer is not None:
        yield prefer % p
    for _ in range(rng.retry_budget):
        yield rng.element(p)


def _projection_ok(C: Curve, lam: int) -> tuple[BiPoly, UPoly, UPoly, UPoly]:
    """The λ tests shared by the divisor computations; returns shear(q) and the moved nodes."""
    if lam == 0:
        raise DrawFailed("lambda = 0", "zero")
    A = shear(C.q, lam)
    if A.coeff(0, C.delta) == 0:
        raise DrawFailed("projection center lies on the curve", "center")
    if C.nodal.T.eval(lam) == 0:
        raise DrawFailed("direction is tangent at a node", "node-tangent")
    chi_e, u_e, v_e = change_prim_elt_nodal(C.nodal, lam)
    return A, chi_e, u_e, v_e


def comp_princ_div(C: Curve, h: BiPoly, rng: RngConfig, prefer: int | None = None) -> SmoothDivisor:
    """Representation of (h) - E, the affine divisor of h away from the nodes.

    ``prefer`` is tried as the primitive element before random draws.
    """
    p = C.p
    if h.is_zero():
        raise InvalidInput("divisor of the zero polynomial")
    if h.y_degree >= C.delta:
        raise InvalidInput("h must have Y-degree below the curve degree")
    deg_h = int(h.total_degree)
    if deg_h == 0:
        return SmoothDivisor.zero(p, prefer or 0)
    tries = 0
    reached = 0
    non_smooth = 0
    last = None
    s = UPoly.var(p)
    for lam in _lambda_draws(rng, p, prefer):
        tries += 1
        try:
            A, chi_e, u_e, v_e = _projection_ok(C, lam)
        except DrawFailed as exc:
            last = str(exc)
            continue
        B = shear(h, lam)
        if B.y_degree < 1:
            last = "h is constant along the projection lines"
            continue
        res, a0, a1 = resultant_and_subresultant_y(A, B)
        if res.is_zero():
            raise InvalidInput("h shares a component with the curve")
        chi_t = res.monic()
        if chi_t.degree < C.delta * deg_h:
            raise ZerosAtInfinity(f"deg Res = {chi_t.degree} < {C.delta * deg_h}")
        chi, rem = divmod(chi_t, chi_e * chi_e)
        if rem:
            raise InvalidInput("h does not vanish at every node")
        reached += 1
        if not gcd(chi, chi_e).is_one():
            non_smooth += 1
            last = "(h) - E meets a node"
            continue
        if chi.degree == 0:
            return SmoothDivisor.zero(p, lam)
        if not gcd(a1, chi).is_one():
            last = "projection is not injective on the support"
            continue
        v = (-a0 * inverse_mod(a1, chi)) % chi
        u = ((s - v) * field_inv(lam, p)) % chi
        mod = Modulus(chi)
        jac = eval_pair_mod(C.qx, u, v, mod) - eval_pair_mod(C.qy, u, v, mod) * lam
        if not gcd(jac, chi).is_one():
            last = "direction is tangent at a point of (h)"
            continue
        return SmoothDivisor(lam, chi, u, v)
    if non_smooth and non_smooth == reached:
        raise AssumptionViolated("(h) - E is not smooth: h meets a node along a branch")
    raise RetriesExhausted("comp_princ_div", tries, last)


# the main pipeline


def _disjoint(C: Curve, D_plus: SmoothDivisor, D_minus: SmoothDivisor,
              rng: RngConfig) -> tuple[SmoothDivisor, SmoothDivisor]:
    if D_plus.is_zero() or D_minus.is_zero():
        return D_plus, D_minus
    _, _, _, g = common_primitive(D_plus, D_minus, C, rng, "support check")
    if g.is_one():
        return D_plus, D_minus
    return subtract(D_plus, D_minus, C, rng), subtract(D_minus, D_plus, C, rng)


def riemann_roch_basis(C: Curve, D_plus: SmoothDivisor, D_minus: SmoothDivisor, rng: RngConfig,
                       extra_degree: int = 0) -> RRBasis:
    """Basis {b/h} of L(D_plus - D_minus)."""
    p = C.p
    if D_minus.degree > D_plus.degree:
        return RRBasis(BiPoly.const(1, p), [])
    D_plus, D_minus = _disjoint(C, D_plus, D_minus, rng)
    d = interpolation_degree(C.delta, D_plus.degree + C.r) + extra_degree
    kernel = constrained_space(C, D_plus, d)
    if not kernel:
        raise RRError("interpolation kernel is empty; this contradicts the dimension count")
    failures: list[RRError] = []
    for _ in range(rng.retry_budget):
        h = random_combination(kernel, rng, p)
        try:
            D_h = comp_princ_div(C, h, rng, prefer=D_plus.lam)
        except (ZerosAtInfinity, AssumptionViolated, RetriesExhausted) as exc:
            failures.append(exc)
            continue
        D_res = subtract(D_h, D_plus, C, rng)
        D_num = add(D_minus, D_res, C, rng)
        numerators = numerator_basis(C, D_num, int(h.total_degree))
        inter = {"D_plus": D_plus, "D_minus": D_minus, "D_h": D_h, "D_res": D_res, "D_num": D_num}
        return RRBasis(h, numerators, inter)
    if failures and all(type(f) is AssumptionViolated for f in failures):
        raise AssumptionViolated(
            "every interpolating h has (h) - E meeting a node; try extra_degree") from failures[-1]
    raise RetriesExhausted("riemann_roch_basis", len(failures), str(failures[-1]) if failures else None)


# assumption checks


@dataclass
class NodeReport:
    """Outcome of the node incidence check.

    ``incidences[i]`` counts the nodes whose branches meet (h_i) - E, and
    ``common`` is how many nodes are met by every h_i.
    """

    ok: bool
    incidences: list[int]
    common: int
    kernel_size: int

    def __bool__(self) -> bool:
        return self.ok


def _node_incidence(C: Curve, hs: Sequence[BiPoly], rng: RngConfig):
    tries = 0
    last = None
    for _ in range(rng.retry_budget):
        tries += 1
        lam = rng.element(C.p)
        try:
            A, chi_e, u_e, v_e = _projection_ok(C, lam)
        except DrawFailed as exc:
            last = str(exc)
            continue
        common = chi_e
        counts = []
        sq = chi_e * chi_e
        usable = True
        for h in hs:
            B = shear(h, lam)
            if B.y_degree < 1:
                usable = False
                break
            chi_t = resultant_y(A, B).monic()
            quo, rem = divmod(chi_t, sq)
            if rem:
                raise InvalidInput("kernel element does not vanish at every node")
            # a node factor surviving division by chi_E^2 means a branch meets (h_i) - E
            hit = gcd(quo, chi_e)
            counts.append(int(hit.degree))
            common = gcd(common, hit)
        if not usable:
            last = "kernel element constant along projection lines"
            continue
        return lam, chi_e, u_e, v_e, common, counts
    raise RetriesExhausted("check_input_assumptions", tries, last)


def node_incidence_report(C: Curve, D_plus: SmoothDivisor, rng: RngConfig,
                          extra_degree: int = 0) -> NodeReport:
    if C.r == 0:
        return NodeReport(True, [], 0, 0)
    d = interpolation_degree(C.delta, D_plus.degree + C.r) + extra_degree
    hs = constrained_space(C, D_plus, d)
    lam1, chi1, u1, v1, common1, counts = _node_incidence(C, hs, rng)
    if common1.is_one():
        return NodeReport(True, counts, 0, len(hs))
    # confirm with an independent projection so a chance alignment cannot fake a hit
    lam2, _, _, _, common2, _ = _node_incidence(C, hs, rng)
    u = u1 % common1
    v = v1 % common1
    z = (u * lam2 + v) % common1
    moved = char_poly(_mult_matrix(z, common1), C.p)
    both = gcd(moved, common2)
    return NodeReport(both.is_one(), counts, int(both.degree), len(hs))


def check_input_assumptions(C: Curve, D_plus: SmoothDivisor, rng: RngConfig,
                            extra_degree: int = 0) -> bool:
    return node_incidence_report(C, D_plus, rng, extra_degree).ok


# curve precomputation and random divisors


def _dehomogenized(form: BiPoly) -> UPoly:
    """f(1, y) for a form f."""
    p = form.p
    size = int(form.y_degree) + 1 if not form.is_zero() else 0
    coeffs = [0] * size
    for (_, j), c in form.terms.items():
        coeffs[j] = (coeffs[j] + c) % p
    return UPoly(coeffs, p)


def singular_at_infinity(q: BiPoly) -> bool:
    d = int(q.total_degree)
    top = q.homogeneous_part(d)
    fx, fy = top.partials()
    g = _dehomogenized(top)
    for f in (_dehomogenized(fx), _dehomogenized(fy), _dehomogenized(q.homogeneous_part(d - 1))):
        g = gcd(g, f)
        if g.degree <= 0:
            return False
    return g.degree > 0


def nodal_precompute(q: BiPoly, rng: RngConfig) -> NodalDivisor:
    """Parametrize the singular points of q and verify they are ordinary nodes."""
    p = q.p
    delta = int(q.total_degree)
    qx, qy = q.partials()
    if qx.is_zero() or qy.is_zero():
        raise InvalidInput("q must depend on both variables")
    s = UPoly.var(p)
    tries = 0
    last = None
    infinity_checked = False
    for _ in range(rng.retry_budget):
        tries += 1
        lam = rng.element(p)
        if lam == 0:
            continue
        A = shear(q, lam)
        if A.coeff(0, delta) == 0:
            last = "projection center on the curve"
            continue
        BX, BY = shear(qx, lam), shear(qy, lam)
        if BX.y_degree < 1 or BY.y_degree < 1:
            last = "partial derivative constant along projection lines"
            continue
        r1 = resultant_y(A, BX)
        r2, a0, a1 = resultant_and_subresultant_y(A, BY)
        G = gcd(r1, r2)
        if G.is_zero():
            raise InvalidInput("q is not squarefree")
        if not infinity_checked:
            if singular_at_infinity(q):
                raise AssumptionViolated("the curve has a singular point at infinity")
            infinity_checked = True
        if G.degree == 0:
            return NodalDivisor.empty(p)
        chi = squarefree_part(G)
        if not gcd(a1, chi).is_one():
            last = "two singular points on one projection line"
            continue
        v = (-a0 * inverse_mod(a1, chi)) % chi
        u = ((s - v) * field_inv(lam, p)) % chi
        mod = Modulus(chi)
        if any(eval_pair_mod(f, u, v, mod) for f in (q, qx, qy)):
            last = "spurious common root of the eliminants"
            continue
        a, b, c = tangent_cone(q, chi, u, v)
        disc = (b * b - a * c * 4) % chi
        if not gcd(disc, chi).is_one():
            raise NotNodal("a singular point is not an ordinary node (degenerate tangent cone)")
        return NodalDivisor(lam, chi, u, v, compute_T_E(q, chi, u, v))
    raise RetriesExhausted("nodal_precompute", tries, last)


def make_curve(q: BiPoly, rng: RngConfig) -> Curve:
    return Curve(q, nodal_precompute(q, rng))


def random_smooth_divisor(C: Curve, target_degree_hint: int, rng: RngConfig) -> SmoothDivisor:
    """(g) - E for a random adjoint g of the smallest degree reaching the hint."""
    if target_degree_hint < 1:
        raise InvalidInput("degree hint must be at least 1")
    m = 1
    while C.delta * m - 2 * C.r < target_degree_hint:
        m += 1
    space = constrained_space(C, SmoothDivisor.zero(C.p), m)
    failures = []
    for _ in range(rng.retry_budget):
        g = random_combination(space, rng, C.p)
        if g.total_degree < 1:
            continue
        try:
            return comp_princ_div(C, g, rng)
        except (ZerosAtInfinity, AssumptionViolated, RetriesExhausted) as exc:
            failures.append(str(exc))
    raise RetriesExhausted("random_smooth_divisor", rng.retry_budget, failures[-1] if failures else None)

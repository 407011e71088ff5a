"""Group law on the Jacobian of a smooth plane curve.

A class is stored as D - g*O with D effective of degree g and O a fixed
affine rational point. Sums and negatives are realised by one Riemann-Roch
basis computation each: for f in L(A - B) the divisor A - B + (f) is
effective and linearly equivalent to A - B.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bipoly import BiPoly
from .divisor import Curve, SmoothDivisor, add, subtract, validate
from .errors import InvalidInput, RetriesExhausted, RRError, ZerosAtInfinity
from .randomness import RngConfig
from .riemann_roch import comp_princ_div, random_combination, riemann_roch_basis

# extra interpolation degree tried when every h or b of the base degree meets infinity
MAX_EXTRA_DEGREE = 2


@dataclass(frozen=True)
class Jacobian:
    """Curve, base point and the multiples of O reused by every operation."""

    C: Curve
    O: SmoothDivisor
    g_O: SmoothDivisor = field(init=False, repr=False, compare=False)
    two_g_O: SmoothDivisor = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.C.r:
            raise InvalidInput("the Jacobian layer only handles smooth curves")
        if self.C.genus < 1:
            raise InvalidInput("the Jacobian of a genus-0 curve is trivial")
        if self.O.degree != 1:
            raise InvalidInput("base point must be a divisor of degree 1")
        ok, why = validate(self.O, self.C)
        if not ok:
            raise InvalidInput(f"base point: {why}")
        rng = RngConfig(0, retry_budget=64)
        multiple = self.O
        for _ in range(self.C.genus - 1):
            multiple = add(multiple, self.O, self.C, rng)
        object.__setattr__(self, "g_O", multiple)
        object.__setattr__(self, "two_g_O", add(multiple, multiple, self.C, rng))

    @property
    def genus(self) -> int:
        return self.C.genus

    def neutral(self) -> "JacobianElement":
        return JacobianElement(self, self.g_O)

    def element(self, D: SmoothDivisor) -> "JacobianElement":
        return JacobianElement(self, D)


@dataclass(frozen=True)
class JacobianElement:
    J: Jacobian
    D: SmoothDivisor

    def __post_init__(self):
        if self.D.degree != self.J.genus:
            raise InvalidInput(f"divisor has degree {self.D.degree}, expected the genus {self.J.genus}")


def _same_group(*points: JacobianElement) -> Jacobian:
    J = points[0].J
    if any(P.J != J for P in points[1:]):
        raise InvalidInput("elements belong to different Jacobians")
    return J


def _reduce(J: Jacobian, D_plus: SmoothDivisor, D_minus: SmoothDivisor, rng: RngConfig) -> SmoothDivisor:
    """An effective divisor linearly equivalent to D_plus - D_minus (degree g)."""
    C = J.C
    last: Exception | None = None
    for extra in range(MAX_EXTRA_DEGREE + 1):
        try:
            B = riemann_roch_basis(C, D_plus, D_minus, rng, extra_degree=extra)
        except RetriesExhausted as exc:
            last = exc
            continue
        if not B.numerators:
            raise RRError("Riemann-Roch space unexpectedly empty in degree g")
        D_num = B.intermediates["D_num"]
        # first numerator under the monomial order, then random combinations
        candidates = [B.numerators[0]]
        if len(B.numerators) > 1:
            candidates += [random_combination(B.numerators, rng, C.p) for _ in range(rng.retry_budget)]
        for b in candidates:
            try:
                D_b = comp_princ_div(C, b, rng, prefer=D_num.lam)
            except (ZerosAtInfinity, RetriesExhausted) as exc:
                last = exc
                continue
            # (b) - E >= D_num holds exactly, so the positive part is the whole difference
            D3 = subtract(D_b, D_num, C, rng)
            if D3.degree == J.genus:
                return D3
            last = RRError(f"reduced divisor has degree {D3.degree}")
    raise RetriesExhausted("jacobian reduction", MAX_EXTRA_DEGREE + 1, str(last) if last else None)


def jac_add(P1: JacobianElement, P2: JacobianElement, rng: RngConfig) -> JacobianElement:
    J = _same_group(P1, P2)
    total = add(P1.D, P2.D, J.C, rng)
    return JacobianElement(J, _reduce(J, total, J.g_O, rng))


def jac_neg(P: JacobianElement, rng: RngConfig) -> JacobianElement:
    J = P.J
    return JacobianElement(J, _reduce(J, J.two_g_O, P.D, rng))


def jac_equals(P1: JacobianElement, P2: JacobianElement, rng: RngConfig) -> bool:
    """D1 - D2 has degree 0, so it is principal exactly when L(D1 - D2) is a line."""
    J = _same_group(P1, P2)
    return riemann_roch_basis(J.C, P1.D, P2.D, rng).dimension == 1


def jac_multiply(P: JacobianElement, n: int, rng: RngConfig) -> JacobianElement:
    """n*P by double-and-add, n >= 0."""
    if n < 0:
        return jac_multiply(jac_neg(P, rng), -n, rng)
    result = P.J.neutral()
    base = P
    while n:
        if n & 1:
            result = jac_add(result, base, rng)
        n >>= 1
        if n:
            base = jac_add(base, base, rng)
    return result


def projective_transform(q: BiPoly, matrix) -> BiPoly:
    """q after the substitution (X, Y, Z) -> matrix * (X, Y, Z), dehomogenised at Z = 1.

    Used to move the line at infinity off all rational points of a model.
    """
    p = q.p
    d = int(q.total_degree)
    rows = [BiPoly({(1, 0): a % p, (0, 1): b % p, (0, 0): c % p}, p) for a, b, c in matrix]
    x_new, y_new, z_new = rows
    out = BiPoly({}, p)
    for (i, j), c in q.terms.items():
        out = out + (x_new ** i) * (y_new ** j) * (z_new ** (d - i - j)) * c
    return out


__all__ = ["Jacobian", "JacobianElement", "jac_add", "jac_equals", "jac_multiply", "jac_neg",
           "projective_transform"]

"""Prime field scalars and dense linear algebra over F_p.

Matrices are numpy arrays of residues. For p < 2**31 they use int64, where
every product of two residues fits without overflow; wider primes fall back to
object arrays holding Python ints.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InvalidInput, SingularMatrixError

MAX_PRIME_BITS = 62
_INT64_SAFE = 1 << 31


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # these bases are deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate that p is an odd prime below 2**62 and return it."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise InvalidInput(f"field size must be an integer, got {p!r}")
    if p == 2:
        raise InvalidInput("characteristic 2 is not supported")
    if p.bit_length() > MAX_PRIME_BITS or not _is_probable_prime(p):
        raise InvalidInput(f"{p} is not an odd prime below 2^{MAX_PRIME_BITS}")
    return p


def field_inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in F_p")
    return pow(a, -1, p)


def dtype_for(p: int):
    return np.int64 if p < _INT64_SAFE else object


def as_matrix(rows: Sequence[Sequence[int]] | np.ndarray, p: int) -> np.ndarray:
    """Build a reduced matrix over F_p from nested sequences."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise InvalidInput("matrix must be two-dimensional")
    arr = arr % p
    return arr.astype(dtype_for(p))


def zeros(nrows: int, ncols: int, p: int) -> np.ndarray:
    if dtype_for(p) is object:
        out = np.empty((nrows, ncols), dtype=object)
        out.fill(0)
        return out
    return np.zeros((nrows, ncols), dtype=np.int64)


def identity(n: int, p: int) -> np.ndarray:
    out = zeros(n, n, p)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two reduced matrices (or matrix and vector) mod p."""
    inner = a.shape[-1]
    if a.dtype != object and inner * (p - 1) ** 2 < (1 << 63):
        return (a @ b) % p
    out = a.astype(object) @ b.astype(object) % p
    return out.astype(dtype_for(p))


def _eliminate(work: np.ndarray, p: int, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan on the first ncols columns of work (in place)."""
    nrows = work.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(work[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            work[[row, piv]] = work[[piv, row]]
        inv = field_inv(int(work[row, col]), p)
        work[row] = work[row] * inv % p
        factors = work[:, col].copy()
        factors[row] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            work[hit] = (work[hit] - factors[hit, None] * work[row]) % p
        pivots.append(col)
        row += 1
    return work, pivots


def row_echelon(M: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """Reduced row echelon form of M and its rank."""
    R, pivots = _eliminate(M.copy(), p, M.shape[1])
    return R, len(pivots)


def kernel_basis(M: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of {v : M v = 0}, one vector per free column.

    Each vector has a 1 in its free column and zeros in the other free
    columns, which is the usual reduced echelon normalization.
    """
    ncols = M.shape[1]
    R, pivots = _eliminate(M.copy(), p, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = zeros(1, ncols, p)[0]
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, free]) % p
        basis.append(v)
    return basis


def solve(M: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Solve M X = B for square invertible M."""
    n = M.shape[0]
    if M.shape != (n, n):
        raise InvalidInput("solve needs a square matrix")
    rhs = B.reshape(n, -1)
    work = np.concatenate([M, rhs], axis=1).astype(dtype_for(p))
    work, pivots = _eliminate(work, p, n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix of size {n} has rank {len(pivots)}")
    out = work[:, n:]
    return out.reshape(B.shape)


def mat_inverse(M: np.ndarray, p: int) -> np.ndarray:
    return solve(M, identity(M.shape[0], p), p)


def hessenberg(M: np.ndarray, p: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to M."""
    H = M.copy()
    n = H.shape[0]
    for j in range(n - 2):
        nz = np.nonzero(H[j + 1:, j])[0]
        if nz.size == 0:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            H[[j + 1, piv]] = H[[piv, j + 1]]
            H[:, [j + 1, piv]] = H[:, [piv, j + 1]]
        inv = field_inv(int(H[j + 1, j]), p)
        f = H[j + 2:, j] * inv % p
        if not f.any():
            continue
        # H <- E H E^-1 with E subtracting f times row j+1 from the rows below
        H[j + 2:] = (H[j + 2:] - f[:, None] * H[j + 1]) % p
        H[:, j + 1] = (H[:, j + 1] + matmul(H[:, j + 2:], f, p)) % p
    return H


def char_poly(M: np.ndarray, p: int):
    """det(S*I - M) as a monic UPoly, via Hessenberg reduction."""
    from .upoly import UPoly

    n = M.shape[0]
    if M.shape != (n, n):
        raise InvalidInput("char_poly needs a square matrix")
    H = hessenberg(M % p, p)
    # rows of P hold the characteristic polynomials of leading principal blocks
    P = zeros(n + 1, n + 1, p)
    P[0, 0] = 1
    for m in range(1, n + 1):
        k = m - 1
        row = zeros(1, n + 1, p)[0]
        row[1:] = P[k, :-1]
        row = (row - int(H[k, k]) * P[k]) % p
        if k > 0:
            coef = zeros(1, k, p)[0]
            prod = 1
            for i in range(k - 1, -1, -1):
                prod = prod * int(H[i + 1, i]) % p
                if prod == 0:
                    break
                coef[i] = int(H[i, k]) * prod % p
            if coef.any():
                row = (row - matmul(coef, P[:k], p)) % p
        P[m] = row
    return UPoly([int(c) for c in P[n]], p)

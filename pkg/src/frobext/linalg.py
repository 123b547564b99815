"""Exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced to 0..p-1.  Everything
routes through one deterministic Gaussian elimination (`rref_transform`), so
solve / kernel / image / quotient answers are reproducible bit-for-bit and an
unsolvable system always comes back with a checkable cokernel functional.
"""

from __future__ import annotations

import numpy as np


def as_matrix(rows, p, width=None):
    """Build an int64 matrix mod p from an iterable of rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, width or 0), dtype=np.int64)
    a = np.array(rows, dtype=np.int64) % p
    return a


def _inv_mod(c, p):
    return pow(int(c), p - 2, p)


def rref_transform(A, p):
    """Reduced row echelon form with transform.

    Returns (R, T, pivots) where R = T @ A  (mod p), R is in reduced row
    echelon form, and pivots is the list of pivot column indices.  Pivot
    selection is deterministic: first nonzero entry scanning down each column.
    """
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    T = np.eye(m, dtype=np.int64)
    R = A.copy()
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        pivot = row + int(nz[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
            T[[row, pivot]] = T[[pivot, row]]
        inv = _inv_mod(R[row, col], p)
        if inv != 1:
            R[row] = (R[row] * inv) % p
            T[row] = (T[row] * inv) % p
        mask = np.nonzero(R[:, col])[0]
        mask = mask[mask != row]
        if mask.size:
            factors = R[mask, col][:, None]
            R[mask] = (R[mask] - factors * R[row]) % p
            T[mask] = (T[mask] - factors * T[row]) % p
        pivots.append(col)
        row += 1
    return R, T, pivots


def rank(A, p):
    if A.size == 0:
        return 0
    _, _, pivots = rref_transform(A, p)
    return len(pivots)


def kernel_basis(A, p):
    """Rows of the result form a basis of {x : A x = 0 (mod p)}."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, _, pivots = rref_transform(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for ri, pc in enumerate(pivots):
            basis[k, pc] = (-R[ri, fc]) % p
    return basis


def solve(A, b, p):
    """One solution x of A x = b, or None.  b may be a vector or a matrix of
    stacked column targets (then a solution matrix is returned)."""
    x, _ = solve_with_certificate(A, b, p)
    return x


def solve_with_certificate(A, b, p):
    """Solve A x = b (mod p).

    Returns (x, None) on success.  On failure returns (None, y) where y is a
    cokernel functional: y @ A == 0 and y @ b != 0, an exact witness that no
    solution exists.
    """
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vector_input = b.ndim == 1
    B = b[:, None] if vector_input else b
    m, n = A.shape
    aug = np.concatenate([A, B], axis=1)
    R, T, pivots = rref_transform(aug, p)
    for ri, pc in enumerate(pivots):
        if pc >= n:
            # pivot inside the b-block: row ri of T is the certificate
            return None, T[ri] % p
    x = np.zeros((n, B.shape[1]), dtype=np.int64)
    for ri, pc in enumerate(pivots):
        x[pc] = R[ri, n:]
    return (x[:, 0] if vector_input else x), None


def row_space_contains(rows, v, p):
    if rows.size == 0:
        return not np.any(np.asarray(v) % p)
    stacked = np.vstack([rows, np.asarray(v, dtype=np.int64) % p])
    return rank(stacked, p) == rank(rows, p)


def subquotient_dim(image_rows, ambient_rows, p):
    """dim(ambient / image), with a membership check that image lies inside
    the span of ambient.  Both arguments are row-span generating sets."""
    ra = rank(ambient_rows, p)
    if image_rows.size == 0:
        return ra
    stacked = np.vstack([ambient_rows, image_rows])
    if rank(stacked, p) != ra:
        raise ValueError("image rows are not contained in the ambient space")
    return ra - rank(image_rows, p)


def intersection_dim(U, V, p):
    """dim(span U intersect span V)."""
    du, dv = rank(U, p), rank(V, p)
    if du == 0 or dv == 0:
        return 0
    dsum = rank(np.vstack([U, V]), p)
    return du + dv - dsum


class FpLinearMap:
    """A concrete F_p-linear map, stored as (codomain_dim x domain_dim)."""

    def __init__(self, mat, p):
        self.mat = np.asarray(mat, dtype=np.int64) % p
        self.p = p

    @property
    def domain_dim(self):
        return self.mat.shape[1]

    @property
    def codomain_dim(self):
        return self.mat.shape[0]

    def apply(self, vec):
        v = np.asarray(vec, dtype=np.int64) % self.p
        if self.mat.size == 0:
            return np.zeros(self.codomain_dim, dtype=np.int64)
        return (self.mat @ v) % self.p

    def compose(self, other):
        """self after other."""
        assert self.p == other.p
        return FpLinearMap((self.mat @ other.mat) % self.p, self.p)

    def kernel(self):
        return kernel_basis(self.mat, self.p)

    def image_rows(self):
        """Row-span generating set for the image (columns transposed)."""
        return self.mat.T % self.p

    def rank(self):
        return rank(self.mat, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, FpLinearMap)
            and self.p == other.p
            and self.mat.shape == other.mat.shape
            and bool(np.all(self.mat == other.mat))
        )


def matrix_of_map(domain_basis, apply_fn, coords_fn, codomain_dim, p):
    """Flatten an additive map to an FpLinearMap.

    domain_basis: F_p-basis elements of the domain.
    apply_fn: the map, applied to one basis element.
    coords_fn: codomain element -> coordinate list of length codomain_dim.
    """
    cols = []
    for b in domain_basis:
        cols.append(coords_fn(apply_fn(b)))
    if not cols:
        return FpLinearMap(np.zeros((codomain_dim, 0), dtype=np.int64), p)
    mat = np.array(cols, dtype=np.int64).T % p
    assert mat.shape[0] == codomain_dim
    return FpLinearMap(mat, p)


class StructureError(ValueError):
    """Raised when a map handed in as additive/semilinear fails the check."""


def artin_schreier_map(domain, codomain, pth_power, check=True):
    """Flatten x -> x^p - x to an FpLinearMap between two flat spaces.

    `domain` and `codomain` expose basis_elems() / coords() / dim() / p, and
    their elements support +, unary -, and integer scalar multiplication.
    pth_power is the p-power map of the ambient structure; additivity and
    F_p-homogeneity are spot-checked on basis pairs before trusting it.
    """
    p = domain.p
    basis = list(domain.basis_elems())
    if check and len(basis) >= 2:
        a, b = basis[0], basis[1]
        if codomain.coords(pth_power(a + b)) != codomain.coords(pth_power(a) + pth_power(b)):
            raise StructureError("p-power map is not additive on basis pair")
        for c in range(2, p):
            if codomain.coords(pth_power(c * a)) != codomain.coords(c * pth_power(a)):
                raise StructureError("p-power map does not fix F_p-scalars")

    def ap(x):
        return pth_power(x) + (-x)

    return matrix_of_map(basis, ap, codomain.coords, codomain.dim(), p)

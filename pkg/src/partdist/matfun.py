"""Matrix functions graded by symmetric-group irreps.

The permanent and determinant are the extreme cases of the immanant family
imm_lam(B) = sum_sigma chi_lam(sigma) * B[sigma(1),1] * ... * B[sigma(n),n].

Beyond scalars, each partition lam yields a matrix-valued function D_lam(M)
(the block of the GL irrep lam acting on the weight-(1,...,1) subspace) whose
trace is the immanant.  D_lam is recovered here from row-permuted immanants
through the linear identity

    imm_lam(P_sigma @ M) = sum_ij D_lam(P_sigma)[i,j] * D_lam(M)[j,i]

solved in the least-squares sense over all n! permutations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, SizeLimitError
from .symgroup import (
    GroupOrdering,
    IrrepMatrixSet,
    Permutation,
    all_permutations,
    character,
)

__all__ = [
    "determinant",
    "permanent",
    "immanant",
    "permuted_immanant",
    "dfunction_block",
    "dfunction_direct",
    "DFunctionBlock",
    "MAX_PERMANENT_SIZE",
    "MAX_IMMANANT_DEGREE",
]

MAX_PERMANENT_SIZE = 20
MAX_IMMANANT_DEGREE = 10


def _square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    return M


def determinant(M) -> complex:
    """LU-based determinant (numpy)."""
    return complex(np.linalg.det(_square(M)))


def permanent(M) -> complex:
    """Permanent by Ryser's formula with Gray-code subset updates, O(2^n n).

    Row sums over the current column subset are updated incrementally: each
    Gray-code step toggles a single column in or out.
    """
    M = _square(M)
    n = M.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise SizeLimitError(f"permanent limited to n <= {MAX_PERMANENT_SIZE}, got {n}")
    if n == 0:
        return complex(1.0)
    row_sums = np.zeros(n, dtype=complex)
    total = 0.0 + 0.0j
    gray = 0
    sign = 1  # (-1)**(n - |subset|) alternates with each toggle
    for k in range(1, 1 << n):
        toggled = (k & -k).bit_length() - 1  # lowest set bit of k
        gray ^= 1 << toggled
        if gray & (1 << toggled):
            row_sums += M[:, toggled]
        else:
            row_sums -= M[:, toggled]
        sign = -sign
        total += sign * np.prod(row_sums)
    return complex(total if n % 2 == 0 else -total)


def _monomials(M: np.ndarray, ordering: GroupOrdering) -> np.ndarray:
    """All n! products M[gamma(1),1] * ... * M[gamma(n),n] in ordering order."""
    n = ordering.n
    return np.prod(M[ordering.images_array, np.arange(n)], axis=1)


def immanant(lam: tuple[int, ...], M, ordering: GroupOrdering | None = None) -> complex:
    """Character-weighted sum over all n! permutation monomials."""
    M = _square(M)
    n = M.shape[0]
    if sum(lam) != n:
        raise DomainError(f"partition {lam} does not match matrix size {n}")
    if n > MAX_IMMANANT_DEGREE:
        raise SizeLimitError(f"immanant limited to n <= {MAX_IMMANANT_DEGREE}, got {n}")
    if ordering is None:
        ordering = all_permutations(n)
    chars = np.array([character(lam, p) for p in ordering], dtype=np.float64)
    return complex(chars @ _monomials(M, ordering))


def permuted_immanant(lam: tuple[int, ...], sigma: Permutation, M) -> complex:
    """imm_lam(P_sigma @ M): row i of the argument is row sigma(i) of M."""
    M = _square(M)
    if sigma.n != M.shape[0]:
        raise DomainError("permutation degree does not match matrix size")
    return immanant(lam, M[list(sigma.images), :])


@dataclass(frozen=True)
class DFunctionBlock:
    """Matrix-valued function D_lam(M) on the weight-(1,...,1) subspace."""

    lam: tuple[int, ...]
    values: np.ndarray
    residual: float

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def trace(self) -> complex:
        return complex(self.values.trace())


def dfunction_direct(
    lam: tuple[int, ...], M, irreps: IrrepMatrixSet
) -> np.ndarray:
    """D_lam(M) evaluated directly as sum_gamma D_lam(gamma) * monomial(M, gamma).

    Cheap companion to :func:`dfunction_block`; the two must agree, which the
    tests exploit as a dual-route check.
    """
    M = _square(M)
    ordering = irreps.ordering
    if M.shape[0] != ordering.n:
        raise DomainError("matrix size does not match irrep degree")
    mono = _monomials(M, ordering)
    stack = np.stack(irreps.matrices)  # (n!, s, s)
    return np.tensordot(mono, stack, axes=(0, 0))


def dfunction_block(
    lam: tuple[int, ...], M, irreps: IrrepMatrixSet, rel_tol: float = 1e-8
) -> DFunctionBlock:
    """Recover D_lam(M) from row-permuted immanants by a least-squares solve.

    One equation per group element sigma, with unknowns X = D_lam(M):
        imm_lam(P_sigma @ M) = <vec D(sigma), vec X>.
    The design matrix has Schur-orthogonal columns, so the solve is exact up
    to roundoff; the residual is checked against rel_tol.
    """
    M = _square(M)
    ordering = irreps.ordering
    n = ordering.n
    if sum(lam) != n or M.shape[0] != n:
        raise DomainError("partition, matrix and irrep degrees must all agree")
    s = irreps.dim
    # Row for sigma holds D(sigma)[a, b] against unknown X[a, b]: the rep
    # matrix of P_sigma in this basis is D(sigma)^T, and the Lemma pairing
    # contracts its (i, j) entry with X[j, i].
    design = np.stack([m.reshape(-1) for m in irreps.matrices])
    rhs = np.array([permuted_immanant(lam, p, M) for p in ordering])
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    residual = float(np.linalg.norm(design @ sol - rhs))
    scale = max(1.0, float(np.linalg.norm(rhs)))
    if residual > rel_tol * scale:
        raise NumericalError(
            f"permuted-immanant system inconsistent for {lam}: residual {residual:.3e}"
        )
    values = sol.reshape(s, s)
    values.setflags(write=False)
    return DFunctionBlock(tuple(lam), values, residual)

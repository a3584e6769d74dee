"""
Seeded random instances for property checks: matrices of prescribed rank,
invertible and unipotent matrices, permutations and matrices with a planted
eigenvalue-1 multiplicity.

Every generator takes a ``numpy.random.Generator`` so that runs are
reproducible from :py:data:`rankwb.config.RANDOM_SEED`.
"""

from __future__ import annotations

import numpy as np

from .config import RANDOM_SEED
from .errors import InputError
from .field import parse_field
from .matrix import Matrix
from .perm import Permutation


def default_rng(seed: int = RANDOM_SEED) -> np.random.Generator:
    return np.random.default_rng(seed=seed)


def random_matrix(field, rng, rows: int, cols: int = None, rank: int = None,
                  bound: int = 3) -> Matrix:
    """
    Random ``rows x cols`` matrix. With ``rank`` the result is a product of
    random ``rows x rank`` and ``rank x cols`` factors, so its rank is at most
    ``rank`` (and equal to it with high probability).
    """
    field = parse_field(field)
    cols = rows if cols is None else cols
    if rank is None:
        data = field.full((rows, cols))
        for idx in np.ndindex(rows, cols):
            data[idx] = field.random_element(rng, bound)
        return Matrix(field, data)
    if rank < 0 or rank > min(rows, cols):
        raise InputError('random_matrix(): rank %i impossible for a %ix%i '
                         'matrix' % (rank, rows, cols))
    left = random_matrix(field, rng, rows, rank, bound=bound)
    right = random_matrix(field, rng, rank, cols, bound=bound)
    return left @ right


def random_unitriangular(field, rng, n: int, bound: int = 3,
                         lower: bool = False) -> Matrix:
    field = parse_field(field)
    data = field.full((n, n))
    for i in range(n):
        data[i, i] = field.one
        for j in range(i + 1, n):
            x = field.random_element(rng, bound)
            if lower:
                data[j, i] = x
            else:
                data[i, j] = x
    return Matrix(field, data)


def random_invertible(field, rng, n: int, bound: int = 3) -> Matrix:
    """``L D U`` with unitriangular ``L``, ``U`` and a nonzero diagonal ``D``."""
    field = parse_field(field)
    diag = []
    while len(diag) < n:
        x = field.random_element(rng, bound)
        if not field.is_zero(x):
            diag.append(x)
    L = random_unitriangular(field, rng, n, bound, lower=True)
    U = random_unitriangular(field, rng, n, bound)
    return L @ Matrix.diagonal(field, diag) @ U


def random_unipotent(field, rng, n: int, bound: int = 3) -> Matrix:
    """
    Conjugate ``P U P⁻¹`` of a random upper unitriangular ``U`` whose
    superdiagonal is sparse enough to produce several Jordan blocks.
    """
    field = parse_field(field)
    data = field.full((n, n))
    for i in range(n):
        data[i, i] = field.one
        for j in range(i + 1, n):
            if rng.integers(0, 3) == 0:
                data[i, j] = field.random_element(rng, bound)
    P = random_invertible(field, rng, n, bound)
    return P @ Matrix(field, data) @ P.inverse()


def random_permutation(rng, n: int) -> Permutation:
    return Permutation(int(i) for i in rng.permutation(n))


def planted_multiplicity(field, rng, n: int, ones: int,
                         bound: int = 3) -> Matrix:
    """
    Invertible matrix with eigenvalue ``1`` of algebraic multiplicity exactly
    ``ones``: a conjugated block triangular matrix whose first ``ones``
    diagonal entries are ``1`` and whose remaining ones avoid ``0`` and ``1``.
    """
    field = parse_field(field)
    if not 0 <= ones <= n:
        raise InputError('planted_multiplicity(): multiplicity %i outside '
                         '[0, %i]' % (ones, n))
    diag = [field.one] * ones
    while len(diag) < n:
        x = field.random_element(rng, bound)
        if not field.is_zero(x) and not field.is_zero(x - field.one):
            diag.append(x)
    data = field.full((n, n))
    for i in range(n):
        data[i, i] = diag[i]
        for j in range(i + 1, n):
            if rng.integers(0, 2) == 0:
                data[i, j] = field.random_element(rng, bound)
    P = random_invertible(field, rng, n, bound)
    return P @ Matrix(field, data) @ P.inverse()

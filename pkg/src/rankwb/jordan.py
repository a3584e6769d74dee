"""
Eigenvalue multiplicities and Jordan block structure at a given eigenvalue,
read off the rank sequence ``r_k = rank((A − λI)^k)``.

The number of Jordan blocks of size at least ``k`` is ``r_{k-1} − r_k``, so the
block sizes are recovered without computing a Jordan basis or factoring the
characteristic polynomial. This works uniformly over every exact field.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .errors import InputError
from .field import Field, parse_field
from .matrix import Matrix, jordan_block, tensor

logger = logging.getLogger(__name__)


def _shifted(A: Matrix, lam) -> Matrix:
    if not A.is_square:
        raise InputError('jordan: matrix of shape %s is not square' % (A.shape,))
    return A - Matrix.scalar(A.field, lam, A.rows)


def rank_sequence(A: Matrix, lam) -> List[int]:
    """
    ``[r_0, r_1, ...]`` with ``r_k = rank((A − λI)^k)``, computed by iterated
    multiplication and stopped as soon as two consecutive ranks agree (the
    sequence is nonincreasing and constant from then on).
    """
    N = _shifted(A, lam)
    seq = [A.rows]
    P = N
    while True:
        r = P.rank()
        seq.append(r)
        if r == seq[-2] or r == 0:
            return seq
        P = P @ N


def algebraic_multiplicity(A: Matrix, lam) -> Fraction:
    """
    Normalized algebraic multiplicity ``M_λ(A) = (n − rank((A − λI)^n)) / n``.

    The power is reached by repeated squaring; squaring stops early once
    ``rank(N^{2e}) = rank(N^e)``, after which the rank sequence is constant.
    """
    n = A.rows
    if n == 0:
        return Fraction(0)
    N = _shifted(A, lam)
    r, e = N.rank(), 1
    while e < n and r > 0:
        N2 = N @ N
        r2 = N2.rank()
        if r2 == r:
            break
        N, r, e = N2, r2, 2 * e
    return Fraction(n - r, n)


@dataclass(frozen=True)
class JordanProfile:
    """
    Jordan block sizes of a matrix at one eigenvalue, sorted in descending
    order. An empty ``blocks`` tuple means ``λ`` is not an eigenvalue.
    """
    field: Field
    eigenvalue: object
    blocks: Tuple[int, ...]
    dim: int

    @property
    def algebraic_multiplicity(self) -> int:
        return sum(self.blocks)

    @property
    def geometric_multiplicity(self) -> int:
        return len(self.blocks)

    @property
    def block_ratio(self) -> Fraction:
        """``J(A)``: number of blocks divided by ``n``."""
        return Fraction(len(self.blocks), self.dim) if self.dim else Fraction(0)

    def to_json(self) -> dict:
        return {'lambda': self.field.format(self.eigenvalue),
                'blocks': list(self.blocks)}


def jordan_profile_at(A: Matrix, lam) -> JordanProfile:
    lam = A.field(lam)
    seq = rank_sequence(A, lam)
    # at_least[k] = number of blocks of size >= k
    at_least = [seq[k - 1] - seq[k] for k in range(1, len(seq))] + [0]
    blocks = []
    for k in range(len(at_least) - 1, 0, -1):
        blocks.extend([k] * (at_least[k - 1] - at_least[k]))
    return JordanProfile(A.field, lam, tuple(blocks), A.rows)


def block_count_ratio(A: Matrix, lam=1) -> Fraction:
    """``J(A)`` at ``λ`` (default ``1``)."""
    return jordan_profile_at(A, lam).block_ratio


def distance_to_diagonalizable(A: Matrix, eigenvalues) -> Fraction:
    """
    Lower bound ``Σ_λ (alg_λ − geom_λ) / n`` on ``ρ(A − D)`` for diagonalizable
    ``D`` with the same eigenvalue multiplicities at the listed ``λ``. For a
    unipotent ``A`` and ``λ = 1`` this equals ``1 − J(A) = ρ(A − I)``.
    """
    if A.rows == 0:
        return Fraction(0)
    total = 0
    for lam in eigenvalues:
        profile = jordan_profile_at(A, lam)
        total += profile.algebraic_multiplicity - profile.geometric_multiplicity
    return Fraction(total, A.rows)


def jordan_tensor_blocks(s: int, t: int) -> List[int]:
    """
    Block sizes of ``J(α, s) ⊗ J(β, t)`` at ``αβ``: ``s + t + 1 − 2i`` for
    ``i = 1..min(s, t)``.
    """
    if s < 1 or t < 1:
        raise InputError('jordan_tensor_blocks(): sizes must be positive, got '
                         '(%i, %i)' % (s, t))
    if s > t:
        s, t = t, s
    return [s + t + 1 - 2 * i for i in range(1, s + 1)]


@dataclass(frozen=True)
class JordanTensorCheck:
    verdict: bool
    computed: JordanProfile
    predicted: Tuple[int, ...]

    def to_json(self) -> dict:
        return {'verdict': self.verdict, 'computed': self.computed.to_json(),
                'predicted': list(self.predicted)}


def verify_jordan_tensor(alpha, s: int, beta, t: int, field) -> JordanTensorCheck:
    """
    Build ``J(α, s) ⊗ J(β, t)`` and compare its profile at ``αβ`` with
    :py:func:`jordan_tensor_blocks`. The decomposition holds in characteristic
    zero and in characteristic ``p ≥ s + t − 1``; smaller primes may give a
    different (correctly computed) profile.
    """
    field = parse_field(field)
    a, b = field(alpha), field(beta)
    if field.is_zero(a) or field.is_zero(b):
        raise InputError('verify_jordan_tensor(): eigenvalues must be nonzero')
    predicted = tuple(jordan_tensor_blocks(s, t))
    if field.kind == 'Fp' and field.p < s + t - 1:
        logger.warning('verify_jordan_tensor(): characteristic %i is below '
                       's + t - 1 = %i', field.p, s + t - 1)
    product = tensor(jordan_block(field, a, s), jordan_block(field, b, t))
    computed = jordan_profile_at(product, a * b)
    return JordanTensorCheck(computed.blocks == predicted, computed, predicted)

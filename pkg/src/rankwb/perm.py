"""
Permutations, their matrices and the embedding of sofic (permutation) almost
representations into rank metric ones.

For a permutation ``p`` of ``{0, ..., n-1}`` with ``cyc(p)`` cycles (fixed
points included) the permutation matrix ``A_p`` satisfies

    ρ(I − A_p) = 1 − cyc(p)/n ≤ d_Hamm(id, p),

so normalized rank distance never exceeds normalized Hamming distance, and a
permutation with few fixed points and few cycles stays far from the identity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from .certify import AlmostRep, PartialGroupTable
from .errors import InputError
from .field import parse_field
from .matrix import Matrix, rank_distance

logger = logging.getLogger(__name__)


class Permutation:
    """
    Bijection of ``{0, ..., n-1}`` stored as its image list: ``p(i) = images[i]``.
    Composition ``p * q`` applies ``q`` first, so that ``A_{p*q} = A_p A_q``.
    """

    __slots__ = ('images',)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise InputError('Permutation(): %s is not a bijection of '
                             '{0, ..., %i}' % (list(images), len(images) - 1))
        self.images = images

    @staticmethod
    def identity(n: int) -> Permutation:
        return Permutation(range(n))

    @staticmethod
    def from_cycles(n: int, cycles: Sequence[Sequence[int]]) -> Permutation:
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                images[a] = b
        return Permutation(images)

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return 'Permutation(%s)' % list(self.images)

    def __mul__(self, other: Permutation) -> Permutation:
        if len(self) != len(other):
            raise InputError('Permutation.__mul__(): sizes %i and %i differ'
                             % (len(self), len(other)))
        return Permutation(self.images[j] for j in other.images)

    def inverse(self) -> Permutation:
        out = [0] * len(self)
        for i, j in enumerate(self.images):
            out[j] = i
        return Permutation(out)

    def cycles(self):
        """Cycle decomposition, fixed points included, by smallest element."""
        seen, out = [False] * len(self), []
        for start in range(len(self)):
            if seen[start]:
                continue
            cycle, i = [], start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = self.images[i]
            out.append(tuple(cycle))
        return out

    def tensor(self, other: Permutation) -> Permutation:
        """Permutation whose matrix is ``A_self ⊗ A_other``."""
        m = len(other)
        return Permutation(self.images[i // m] * m + other.images[i % m]
                           for i in range(len(self) * m))

    def direct_sum(self, other: Permutation) -> Permutation:
        n = len(self)
        return Permutation(self.images + tuple(n + j for j in other.images))


def hamming_distance(p: Permutation, q: Permutation) -> Fraction:
    """Normalized Hamming distance ``|{i : p(i) ≠ q(i)}| / n``."""
    if len(p) != len(q):
        raise InputError('hamming_distance(): sizes %i and %i differ'
                         % (len(p), len(q)))
    if not len(p):
        return Fraction(0)
    return Fraction(sum(a != b for a, b in zip(p.images, q.images)), len(p))


def cycle_and_fix_counts(p: Permutation) -> Tuple[int, int]:
    """Number of cycles (fixed points included) and number of fixed points."""
    cycles = p.cycles()
    return len(cycles), sum(1 for c in cycles if len(c) == 1)


def rank_from_cycles(p: Permutation) -> Fraction:
    """``ρ(I − A_p) = 1 − cyc(p)/n`` without building a matrix."""
    if not len(p):
        return Fraction(0)
    return 1 - Fraction(len(p.cycles()), len(p))


def permutation_matrix(p: Permutation, field) -> Matrix:
    """Matrix with ``A e_i = e_{p(i)}``, i.e. ones at ``(p(i), i)``."""
    field = parse_field(field)
    n = len(p)
    data = field.full((n, n))
    for i, j in enumerate(p.images):
        data[j, i] = field.one
    return Matrix(field, data)


@dataclass
class SoficEmbeddingReport:
    """
    Exact comparison of the permutation and matrix pictures of a sofic map.

    ``per_element`` holds ``(d_Hamm(id, p_g), ρ(I − A_g), 1 − cyc/n)`` per
    label, ``per_pair`` holds ``(d_Hamm(p_g p_h, p_gh), ρ(A_g A_h − A_gh))``
    per defined product.
    """
    per_element: Dict[str, Tuple[Fraction, Fraction, Fraction]]
    per_pair: Dict[Tuple[str, str], Tuple[Fraction, Fraction]]
    degenerate: Tuple[str, ...] = dc_field(default=())

    @property
    def certified(self) -> bool:
        elements = all(rk == cyc and rk <= ham <= 2 * rk
                       for ham, rk, cyc in self.per_element.values())
        pairs = all(rk <= ham for ham, rk in self.per_pair.values())
        return elements and pairs

    @property
    def perm_defect(self) -> Fraction:
        return max((h for h, _ in self.per_pair.values()), default=Fraction(0))

    @property
    def matrix_defect(self) -> Fraction:
        return max((r for _, r in self.per_pair.values()), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            'certified': self.certified,
            'perm_defect': str(self.perm_defect),
            'matrix_defect': str(self.matrix_defect),
            'degenerate': list(self.degenerate),
            'per_element': {g: {'hamming': str(h), 'rank': str(r),
                                'cycles': str(c)}
                            for g, (h, r, c) in self.per_element.items()},
            'per_pair': {'%s,%s' % k: {'hamming': str(h), 'rank': str(r)}
                         for k, (h, r) in self.per_pair.items()}
        }


def embed_sofic_rep(perms: Mapping[str, Permutation], field,
                    table: PartialGroupTable = None
                    ) -> Tuple[AlmostRep, SoficEmbeddingReport]:
    """
    Turn a permutation valued map on ``table`` into an :py:class:`AlmostRep`
    of permutation matrices. The report certifies the sandwich
    ``d_Hamm/2 ≤ ρ ≤ d_Hamm`` per element and ``ρ ≤ d_Hamm`` for every
    defined product. Without a ``table`` the labels of ``perms`` (plus ``e``)
    form a fragment whose only products are those with the identity.

    Non-identity labels sent to the identity permutation have zero separation
    and are listed in ``degenerate``.
    """
    field = parse_field(field)
    if table is None:
        labels = list(perms) + ([] if 'e' in perms else ['e'])
        table = PartialGroupTable(labels, {})
    sizes = {len(p) for p in perms.values()}
    if len(sizes) > 1:
        raise InputError('embed_sofic_rep(): permutations act on sets of '
                         'different sizes %s' % sorted(sizes))
    n = sizes.pop() if sizes else 0
    ident = Permutation.identity(n)
    if perms.get(table.identity, ident) != ident:
        raise InputError('embed_sofic_rep(): the identity "%s" must map to the '
                         'identity permutation' % table.identity)
    perms = dict(perms)
    perms.setdefault(table.identity, ident)

    matrices = {g: permutation_matrix(p, field) for g, p in perms.items()}
    rep = AlmostRep(table, matrices, field)
    one = Matrix.identity(field, n)

    per_element, degenerate = {}, []
    for g in table.elements:
        if g == table.identity:
            continue
        p = perms[g]
        per_element[g] = (hamming_distance(ident, p),
                          rank_distance(one, matrices[g]),
                          rank_from_cycles(p))
        if p == ident:
            degenerate.append(g)
    per_pair = {}
    for g, h, gh in table.triples():
        per_pair[(g, h)] = (hamming_distance(perms[g] * perms[h], perms[gh]),
                            rank_distance(matrices[g] @ matrices[h],
                                          matrices[gh]))
    if degenerate:
        logger.warning('embed_sofic_rep(): elements %s map to the identity '
                       'permutation', degenerate)
    return rep, SoficEmbeddingReport(per_element, per_pair, tuple(degenerate))

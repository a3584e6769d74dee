"""
Defect and separation certificates for finite fragments of group and algebra
representations.

A :py:class:`PartialGroupTable` describes a finite set ``E`` of group elements
with the products and inverses that stay inside ``E``. An
:py:class:`AlmostRep` assigns an invertible matrix to every element of ``E``.
Its *defect* is the largest normalized rank of ``φ(g)φ(h) − φ(gh)`` over the
defined products and its *separation* the smallest ``ρ(I − φ(g))`` over
``g ≠ e``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import size_budget, check_budget
from .errors import FieldMismatchError, InputError
from .field import Field, parse_field
from .matrix import (Matrix, kernel_basis, normalized_rank, rank_distance,
                     tensor_power)

logger = logging.getLogger(__name__)

# Threshold below which separation would be vacuous for a quarter certificate
QUARTER = Fraction(1, 4)


class PartialGroupTable:
    """
    Finite fragment ``E`` of a group.

    Parameter ``elements`` (``Sequence[str]``):
        Distinct labels; must contain ``identity``.

    Parameter ``product`` (``Mapping[(str, str), str]``):
        Partial multiplication, defined only where the product lies in ``E``.
        Products with the identity are filled in automatically.

    Parameter ``inverse`` (``Mapping[str, str]``):
        Partial inversion inside ``E``.

    The identity, inverse and associativity laws are checked on every triple
    where all products involved are defined; a violation raises
    :py:class:`InputError`.
    """

    def __init__(self, elements: Sequence[str],
                 product: Mapping[Tuple[str, str], str],
                 inverse: Mapping[str, str] = None, identity: str = 'e'):
        self.elements = tuple(str(g) for g in elements)
        self.identity = identity
        self.product = {(str(a), str(b)): str(c) for (a, b), c in product.items()}
        self.inverse = {str(a): str(b) for a, b in (inverse or {}).items()}
        self._index = {g: i for i, g in enumerate(self.elements)}
        validate_group_table(self)

    def __contains__(self, g):
        return g in self._index

    def __len__(self):
        return len(self.elements)

    def index(self, g: str) -> int:
        return self._index[g]

    def mul(self, g: str, h: str) -> Optional[str]:
        return self.product.get((g, h))

    def inv(self, g: str) -> Optional[str]:
        return self.inverse.get(g)

    def is_total(self) -> bool:
        n = len(self.elements)
        return len(self.product) == n * n and len(self.inverse) == n

    def triples(self, skip_identity=True) -> List[Tuple[str, str, str]]:
        """All ``(g, h, gh)`` with ``gh`` defined, in element order."""
        out = []
        for g in self.elements:
            for h in self.elements:
                gh = self.product.get((g, h))
                if gh is None:
                    continue
                if skip_identity and self.identity in (g, h):
                    continue
                out.append((g, h, gh))
        return out

    def restrict(self, subset: Sequence[str]) -> PartialGroupTable:
        """Sub-fragment on ``subset`` (which must contain the identity)."""
        keep = set(subset)
        product = {k: v for k, v in self.product.items()
                   if k[0] in keep and k[1] in keep and v in keep}
        inverse = {k: v for k, v in self.inverse.items()
                   if k in keep and v in keep}
        return PartialGroupTable([g for g in self.elements if g in keep],
                                 product, inverse, self.identity)

    def to_json(self) -> dict:
        return {
            'elements': list(self.elements),
            'identity': self.identity,
            'product': {'%s,%s' % k: v for k, v in self.product.items()},
            'inverse': dict(self.inverse)
        }

    @staticmethod
    def from_json(obj) -> PartialGroupTable:
        if isinstance(obj, dict) and 'generator' in obj:
            from .constructions import table_from_generator
            return table_from_generator(obj)
        if not isinstance(obj, dict) or 'elements' not in obj:
            raise InputError('PartialGroupTable.from_json(): expected an '
                             'object with an "elements" list')
        raw = obj.get('product', {})
        product = {}
        if isinstance(raw, dict):
            for key, value in raw.items():
                parts = key.split(',')
                if len(parts) != 2:
                    raise InputError('PartialGroupTable.from_json(): product '
                                     'key "%s" is not of the form "g,h"' % key)
                product[(parts[0].strip(), parts[1].strip())] = value
        else:
            for entry in raw:
                if len(entry) != 3:
                    raise InputError('PartialGroupTable.from_json(): product '
                                     'entries must be [g, h, gh] triples')
                product[(entry[0], entry[1])] = entry[2]
        return PartialGroupTable(obj['elements'], product,
                                 obj.get('inverse', {}),
                                 obj.get('identity', 'e'))


def validate_group_table(table: PartialGroupTable):
    """
    Check the identity, inverse and partial associativity laws of ``table``
    and fill in the products with the identity.
    """
    elems, e = table.elements, table.identity
    if len(set(elems)) != len(elems):
        raise InputError('validate_group_table(): duplicate element labels')
    if e not in table:
        raise InputError('validate_group_table(): identity "%s" is not an '
                         'element' % e)
    for (a, b), c in table.product.items():
        for x in (a, b, c):
            if x not in table:
                raise InputError('validate_group_table(): product %s*%s=%s '
                                 'mentions unknown element "%s"' % (a, b, c, x))
    for g in elems:
        for key in ((e, g), (g, e)):
            found = table.product.setdefault(key, g)
            if found != g:
                raise InputError('validate_group_table(): %s*%s should be %s, '
                                 'table says %s' % (key[0], key[1], g, found))
    found = table.inverse.setdefault(e, e)
    if found != e:
        raise InputError('validate_group_table(): identity must be its own '
                         'inverse')
    for g, h in table.inverse.items():
        if g not in table or h not in table:
            raise InputError('validate_group_table(): inverse %s -> %s mentions '
                             'an unknown element' % (g, h))
        for key in ((g, h), (h, g)):
            found = table.product.get(key)
            if found is not None and found != e:
                raise InputError('validate_group_table(): %s is declared the '
                                 'inverse of %s but %s*%s=%s'
                                 % (h, g, key[0], key[1], found))
    prod = table.product
    for a in elems:
        for b in elems:
            ab = prod.get((a, b))
            if ab is None:
                continue
            for c in elems:
                bc = prod.get((b, c))
                if bc is None:
                    continue
                left, right = prod.get((ab, c)), prod.get((a, bc))
                if left is not None and right is not None and left != right:
                    raise InputError('validate_group_table(): associativity '
                                     'fails for (%s, %s, %s): %s vs %s'
                                     % (a, b, c, left, right))


class AlmostRep:
    """
    Map from the elements of a :py:class:`PartialGroupTable` to invertible
    ``n x n`` matrices over one field, sending the identity to ``I``.
    """

    def __init__(self, table: PartialGroupTable, matrices: Mapping[str, Matrix],
                 field=None):
        self.table = table
        if not matrices:
            raise InputError('AlmostRep(): no matrices given')
        first = next(iter(matrices.values()))
        self.field = parse_field(field) if field is not None else first.field
        missing = [g for g in table.elements if g not in matrices]
        if missing:
            raise InputError('AlmostRep(): no matrix for elements %s' % missing)
        extra = [g for g in matrices if g not in table]
        if extra:
            raise InputError('AlmostRep(): matrices for unknown elements %s'
                             % extra)
        self.dim = first.rows
        self.matrices = {}
        for g in table.elements:
            M = matrices[g]
            if M.field != self.field:
                raise FieldMismatchError('AlmostRep(): φ(%s) is over %s, '
                                         'expected %s' % (g, M.field.spec,
                                                          self.field.spec))
            if M.shape != (self.dim, self.dim):
                raise InputError('AlmostRep(): φ(%s) has shape %s, expected '
                                 '%ix%i' % (g, M.shape, self.dim, self.dim))
            if not M.is_invertible():
                raise InputError('AlmostRep(): φ(%s) is not invertible' % g)
            self.matrices[g] = M
        if not self.matrices[table.identity].is_identity():
            raise InputError('AlmostRep(): the identity "%s" must map to I'
                             % table.identity)

    def __getitem__(self, g: str) -> Matrix:
        return self.matrices[g]

    @property
    def labels(self):
        return self.table.elements

    def map(self, fn, field=None) -> AlmostRep:
        """Apply ``fn`` to every matrix (e.g. a change of field)."""
        return AlmostRep(self.table, {g: fn(M) for g, M in self.matrices.items()},
                         field)

    def to_json(self) -> dict:
        return {
            'field': self.field.spec.to_json(),
            'table': self.table.to_json(),
            'matrices': {g: M.to_json() for g, M in self.matrices.items()}
        }

    @staticmethod
    def from_json(obj, field=None) -> AlmostRep:
        if not isinstance(obj, dict) or 'table' not in obj:
            raise InputError('AlmostRep.from_json(): expected an object with '
                             'a "table" entry')
        table = PartialGroupTable.from_json(obj['table'])
        if 'field' in obj:
            field = obj['field']
        if field is None:
            raise InputError('AlmostRep.from_json(): no field given')
        field = parse_field(field)
        if 'perms' in obj:
            from .perm import Permutation, embed_sofic_rep
            perms = {g: Permutation(p) for g, p in obj['perms'].items()}
            rep, _ = embed_sofic_rep(perms, field, table)
            return rep
        matrices = {g: Matrix.from_json(m, field)
                    for g, m in obj.get('matrices', {}).items()}
        return AlmostRep(table, matrices, field)


@dataclass
class DefectReport:
    """
    Result of :py:func:`defect_report`. ``per_pair`` maps ``(g, h)`` to
    ``ρ(φ(g)φ(h) − φ(gh))`` and ``per_element`` maps ``g`` to ``ρ(I − φ(g))``.
    """
    per_pair: Dict[Tuple[str, str], Fraction]
    per_element: Dict[str, Fraction]
    max_defect: Fraction
    min_separation: Fraction
    vacuous: bool = False

    @property
    def quarter_certified(self) -> bool:
        """Separation beats ``1/4 − defect``: an ε-rep with ε-separation."""
        return self.min_separation > QUARTER - self.max_defect

    def to_json(self) -> dict:
        return {
            'max_defect': str(self.max_defect),
            'min_separation': str(self.min_separation),
            'vacuous_separation': self.vacuous,
            'quarter_certified': self.quarter_certified,
            'per_pair': {'%s,%s' % k: str(v) for k, v in self.per_pair.items()},
            'per_element': {g: str(v) for g, v in self.per_element.items()}
        }


def defect_report(rep: AlmostRep) -> DefectReport:
    """
    Exact defect and separation of ``rep``. Products with the identity are
    skipped (they contribute zero). With no non-identity element the
    separation is reported as ``1`` and flagged as vacuous.
    """
    per_pair = {}
    for g, h, gh in rep.table.triples():
        per_pair[(g, h)] = rank_distance(rep[g] @ rep[h], rep[gh])
    one = Matrix.identity(rep.field, rep.dim)
    per_element = {g: rank_distance(one, rep[g])
                   for g in rep.labels if g != rep.table.identity}
    max_defect = max(per_pair.values(), default=Fraction(0))
    vacuous = not per_element
    if vacuous:
        logger.warning('defect_report(): fragment has no non-identity element, '
                       'separation is vacuous')
    min_sep = min(per_element.values(), default=Fraction(1))
    logger.debug('defect_report(): %i pairs, defect %s, separation %s',
                 len(per_pair), max_defect, min_sep)
    return DefectReport(per_pair, per_element, max_defect, min_sep, vacuous)


def length_function(report: DefectReport) -> Dict[str, Fraction]:
    """Per element length ``δ(g) = ρ(I − φ(g))`` (identity excluded)."""
    return dict(report.per_element)


@dataclass
class DistanceTable:
    distances: Dict[Tuple[str, str], Fraction]
    # Smallest distance between elements whose matrices differ
    min_distinct: Fraction
    equal_pairs: List[Tuple[str, str]]

    def to_json(self) -> dict:
        return {
            'distances': {'%s,%s' % k: str(v) for k, v in self.distances.items()},
            'min_distinct': str(self.min_distinct),
            'equal_pairs': [list(p) for p in self.equal_pairs]
        }


def pairwise_distances(rep: AlmostRep) -> DistanceTable:
    """``d_rk(φ(g), φ(h))`` for every unordered pair of distinct labels."""
    distances, equal = {}, []
    for g, h in itertools.combinations(rep.labels, 2):
        d = rank_distance(rep[g], rep[h])
        distances[(g, h)] = d
        if d == 0:
            equal.append((g, h))
    nonzero = [d for d in distances.values() if d]
    return DistanceTable(distances, min(nonzero, default=Fraction(1)), equal)


@dataclass
class AlignmentResult:
    """
    Conjugated representation ``P⁻¹ φ P`` whose first ``kernel_dim`` basis
    vectors span the common kernel of all defect matrices.
    """
    rep: AlmostRep
    basis: Matrix
    kernel_dim: int
    # Per triple: number of columns on which φ'(g)φ'(h) and φ'(gh) agree
    agreement: Dict[Tuple[str, str], int]

    @property
    def min_agreement(self) -> int:
        return min(self.agreement.values(), default=self.rep.dim)

    def to_json(self) -> dict:
        return {
            'kernel_dim': self.kernel_dim,
            'min_agreement': self.min_agreement,
            'agreement': {'%s,%s' % k: v for k, v in self.agreement.items()},
            'basis': self.basis.to_json(),
            'rep': self.rep.to_json()
        }


def _stack(blocks: Sequence[Matrix], cols: int, field: Field) -> Matrix:
    data = field.full((sum(b.rows for b in blocks), cols))
    r = 0
    for b in blocks:
        data[r:r + b.rows] = b.data
        r += b.rows
    return Matrix(field, data)


def _complete_basis(V: Matrix) -> Matrix:
    """Extend the columns of ``V`` by standard basis vectors to a basis."""
    n, field = V.rows, V.field
    cols = [V.data[:, j] for j in range(V.cols)]
    current = V.cols
    for i in range(n):
        if current == n:
            break
        e = field.full((n,))
        e[i] = field.one
        trial = field.full((n, current + 1))
        for j, c in enumerate(cols):
            trial[:, j] = c
        trial[:, current] = e
        if Matrix(field, trial).rank() == current + 1:
            cols.append(e)
            current += 1
    out = field.full((n, n))
    for j, c in enumerate(cols):
        out[:, j] = c
    return Matrix(field, out)


def align_basis(rep: AlmostRep, epsilon) -> AlignmentResult:
    """
    Conjugate ``rep`` so that the defect matrices of all defined triples
    vanish on the first ``dim V`` basis vectors, where ``V`` is their common
    kernel.

    Requires ``defect(rep) < ε / |E₁|`` with ``E₁`` the defined non-trivial
    triples; then ``dim V > (1 − ε) n``. With no triple the identity
    conjugation is returned.
    """
    epsilon = Fraction(epsilon)
    n, field = rep.dim, rep.field
    triples = rep.table.triples()
    one = Matrix.identity(field, n)
    if not triples:
        agreement = {}
        return AlignmentResult(rep, one, n, agreement)

    report = defect_report(rep)
    if report.max_defect >= epsilon / len(triples):
        raise InputError('align_basis(): defect %s is not below ε/|E₁| = %s'
                         % (report.max_defect, epsilon / len(triples)))
    diffs = [rep[g] @ rep[h] - rep[gh] for g, h, gh in triples]
    V = kernel_basis(_stack(diffs, n, field))
    if Fraction(V.cols, n) <= 1 - epsilon:
        raise InputError('align_basis(): common kernel has dimension %i, '
                         'expected more than (1 - %s) * %i'
                         % (V.cols, epsilon, n))
    P = _complete_basis(V)
    P_inv = P.inverse()
    conj = AlmostRep(rep.table, {g: P_inv @ rep[g] @ P for g in rep.labels})

    agreement = {}
    for g, h, gh in triples:
        D = (conj[g] @ conj[h] - conj[gh]).data
        agreement[(g, h)] = sum(1 for j in range(n) if not np.any(D[:, j] != 0))
    logger.debug('align_basis(): kernel dimension %i of %i', V.cols, n)
    return AlignmentResult(conj, P, V.cols, agreement)


class AlgebraPatch:
    """
    Finite dimensional subspace ``L`` of a unital algebra with a basis and a
    partial multiplication table.

    ``structure`` maps ``(x_i, x_j)`` to the coordinates of ``x_i x_j`` in the
    basis (a mapping ``label -> scalar``) and is only given where the product
    lies in ``L``. Products with the unit are filled in; conflicting entries
    raise :py:class:`InputError`.
    """

    def __init__(self, field, basis: Sequence[str],
                 structure: Mapping[Tuple[str, str], Mapping[str, object]],
                 unit: str = '1'):
        self.field = parse_field(field)
        self.basis = tuple(basis)
        self.unit = unit
        if unit not in self.basis:
            raise InputError('AlgebraPatch(): unit "%s" is not a basis label'
                             % unit)
        if len(set(self.basis)) != len(self.basis):
            raise InputError('AlgebraPatch(): duplicate basis labels')
        self.structure = {}
        for (a, b), coords in structure.items():
            for x in (a, b, *coords):
                if x not in self.basis:
                    raise InputError('AlgebraPatch(): structure constant for '
                                     '%s*%s mentions unknown label "%s"'
                                     % (a, b, x))
            self.structure[(a, b)] = {k: self.field(v) for k, v in coords.items()
                                      if not self.field.is_zero(self.field(v))}
        for x in self.basis:
            for key in ((unit, x), (x, unit)):
                expect = {x: self.field.one}
                found = self.structure.setdefault(key, expect)
                if found != expect:
                    raise InputError('AlgebraPatch(): %s*%s must equal %s'
                                     % (key[0], key[1], x))

    def to_json(self) -> dict:
        f = self.field
        return {
            'field': f.spec.to_json(),
            'basis': list(self.basis),
            'unit': self.unit,
            'structure': {'%s,%s' % k: {x: f.format(c) for x, c in v.items()}
                          for k, v in self.structure.items()}
        }

    @staticmethod
    def from_json(obj, field=None) -> AlgebraPatch:
        field = obj.get('field', field)
        if field is None:
            raise InputError('AlgebraPatch.from_json(): no field given')
        field = parse_field(field)
        structure = {}
        for key, coords in obj.get('structure', {}).items():
            a, _, b = key.partition(',')
            structure[(a.strip(), b.strip())] = {
                k: field.parse(v) for k, v in coords.items()}
        return AlgebraPatch(field, obj['basis'], structure,
                            obj.get('unit', '1'))


@dataclass
class AlmostRepCheck:
    deficiency: Fraction
    kernel_dim: int
    dim: int
    verdict: bool
    per_condition: Dict[Tuple[str, str], Fraction] = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            'deficiency': str(self.deficiency),
            'kernel_dim': self.kernel_dim,
            'dim': self.dim,
            'verdict': self.verdict,
            'per_condition': {'%s,%s' % k: str(v)
                              for k, v in self.per_condition.items()}
        }


def algebra_almost_rep_check(patch: AlgebraPatch, psi: Mapping[str, Matrix],
                             epsilon) -> AlmostRepCheck:
    """
    Check whether ``psi`` (one ``n x n`` matrix per basis label, extended
    linearly) is an ε-almost representation of ``patch``: the subspace
    ``V_ε`` on which ``ψ(x_i)ψ(x_j) = ψ(x_i x_j)`` for all tabulated products
    must have ``dim V_ε > (1 − ε) n``.
    """
    epsilon = Fraction(epsilon)
    field = patch.field
    missing = [x for x in patch.basis if x not in psi]
    if missing:
        raise InputError('algebra_almost_rep_check(): no matrix for basis '
                         'labels %s' % missing)
    n = psi[patch.unit].rows
    for x in patch.basis:
        if psi[x].field != field:
            raise FieldMismatchError('algebra_almost_rep_check(): ψ(%s) is over '
                                     '%s, expected %s' % (x, psi[x].field.spec,
                                                          field.spec))
        if psi[x].shape != (n, n):
            raise InputError('algebra_almost_rep_check(): ψ(%s) has shape %s'
                             % (x, psi[x].shape))
    if not psi[patch.unit].is_identity():
        raise InputError('algebra_almost_rep_check(): the unit must map to I')

    diffs, per_condition = [], {}
    for (a, b), coords in patch.structure.items():
        target = Matrix.zeros(field, n)
        for x, c in coords.items():
            target = target + psi[x].scale(c)
        D = psi[a] @ psi[b] - target
        per_condition[(a, b)] = normalized_rank(D) if n else Fraction(0)
        diffs.append(D)
    kernel_dim = kernel_basis(_stack(diffs, n, field)).cols if diffs else n
    deficiency = Fraction(n - kernel_dim, n) if n else Fraction(0)
    return AlmostRepCheck(deficiency, kernel_dim, n, deficiency < epsilon,
                          per_condition)


def group_algebra_apply(rep: AlmostRep, f: Mapping[str, object], depth: int = 1,
                        budget: int = None) -> Matrix:
    """
    Evaluate the group algebra element ``f = Σ f(g) g`` at tensor depth
    ``depth``: ``Σ f(g) φ(g)^{⊗depth}``. The support of ``f`` must lie in the
    fragment.
    """
    if depth < 1:
        raise InputError('group_algebra_apply(): depth must be positive')
    outside = [g for g in f if g not in rep.table]
    if outside:
        raise InputError('group_algebra_apply(): support %s lies outside the '
                         'fragment' % outside)
    size = rep.dim ** depth
    check_budget(size, size_budget(budget), 'group_algebra_apply()')
    result = Matrix.zeros(rep.field, size)
    for g, c in f.items():
        c = rep.field(c)
        if rep.field.is_zero(c):
            continue
        result = result + tensor_power(rep[g], depth).scale(c)
    return result

"""
Exact dense matrices over the fields of :py:mod:`rankwb.field` together with
the rank based operations of the workbench: normalized rank, rank distance,
Kronecker products, block sums and the invertible completion of a singular
matrix.

Elimination uses a deterministic pivot rule: columns are scanned left to
right and within a column the topmost remaining row with a nonzero entry is
chosen. Over ``Q`` the rank, determinant and minor search run fraction free
(Bareiss) on integer scaled rows; other fields use Gaussian elimination.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .errors import FieldMismatchError, InputError
from .field import Field, FieldSpec, integer_rows, make_field, parse_field

logger = logging.getLogger(__name__)


class Matrix:
    """
    Immutable ``rows x cols`` matrix over an exact field.

    Instances wrap a numpy array holding canonical field elements. Arithmetic
    operators (``+``, ``-``, ``@``, unary ``-``) require both operands to live
    over the same field and raise :py:class:`FieldMismatchError` otherwise.
    """

    __slots__ = ('field', 'data', '_rank')
    __hash__ = None

    def __init__(self, field: Field, data: np.ndarray):
        if data.ndim != 2:
            raise InputError('Matrix(): expected a 2D array, got shape %s'
                             % (data.shape,))
        self.field = field
        self.data = data
        self._rank = None

    # Constructors -----------------------------------------------------------

    @staticmethod
    def from_rows(field, rows: Sequence[Sequence], cols: int = None) -> Matrix:
        """
        Build a matrix from nested lists of values accepted by the field
        (integers, fractions, ``"a/b"`` strings, coefficient lists for number
        fields). ``cols`` is only needed when ``rows`` is empty.
        """
        field = parse_field(field)
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != m for r in rows):
            raise InputError('Matrix.from_rows(): rows have inconsistent '
                             'lengths %s' % [len(r) for r in rows])
        return Matrix(field, field.array(rows, (n, m)))

    @staticmethod
    def zeros(field, rows: int, cols: int = None) -> Matrix:
        field = parse_field(field)
        cols = rows if cols is None else cols
        return Matrix(field, field.full((rows, cols)))

    @staticmethod
    def identity(field, n: int) -> Matrix:
        return Matrix.scalar(field, 1, n)

    @staticmethod
    def scalar(field, value, n: int) -> Matrix:
        field = parse_field(field)
        data = field.full((n, n))
        c = field(value)
        for i in range(n):
            data[i, i] = c
        return Matrix(field, data)

    @staticmethod
    def diagonal(field, values) -> Matrix:
        field = parse_field(field)
        values = list(values)
        data = field.full((len(values), len(values)))
        for i, v in enumerate(values):
            data[i, i] = field(v)
        return Matrix(field, data)

    # Basic accessors --------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        value = self.data[idx]
        return int(value) if self.field.kind == 'Fp' else value

    def to_rows(self) -> List[list]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self):
        body = '; '.join(' '.join(str(self.field.format(x)) for x in row)
                         for row in self.data)
        return 'Matrix[%s, %ix%i]([%s])' % (self.field.spec, self.rows,
                                            self.cols, body)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def is_zero(self) -> bool:
        return not np.any(self.data != 0) if self.data.size else True

    def is_identity(self) -> bool:
        return self.is_square and self == Matrix.identity(self.field, self.rows)

    # Arithmetic -------------------------------------------------------------

    def _check(self, other, where):
        if not isinstance(other, Matrix):
            raise InputError('%s: expected a Matrix, got %s'
                             % (where, type(other).__name__))
        if self.field != other.field:
            raise FieldMismatchError('%s: field mismatch (%s vs %s)'
                                     % (where, self.field.spec,
                                        other.field.spec))

    def _check_shape(self, other, where):
        self._check(other, where)
        if self.shape != other.shape:
            raise InputError('%s: shape mismatch (%s vs %s)'
                             % (where, self.shape, other.shape))

    def __add__(self, other):
        self._check_shape(other, 'Matrix.__add__()')
        return Matrix(self.field, self.field.normalize(self.data + other.data))

    def __sub__(self, other):
        self._check_shape(other, 'Matrix.__sub__()')
        return Matrix(self.field, self.field.normalize(self.data - other.data))

    def __neg__(self):
        return Matrix(self.field, self.field.normalize(-self.data))

    def __matmul__(self, other):
        self._check(other, 'Matrix.__matmul__()')
        if self.cols != other.rows:
            raise InputError('Matrix.__matmul__(): incompatible shapes %s and %s'
                             % (self.shape, other.shape))
        return Matrix(self.field, self.field.matmul(self.data, other.data))

    def scale(self, value) -> Matrix:
        c = self.field(value)
        if self.field.kind == 'Fp':
            c = int(c)
        return Matrix(self.field, self.field.normalize(self.data * c))

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.data.T.copy())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        rows, cols = list(rows), list(cols)
        data = self.field.full((len(rows), len(cols)))
        if rows and cols:
            data[:, :] = self.data[np.ix_(rows, cols)]
        return Matrix(self.field, data)

    def power(self, k: int) -> Matrix:
        """``k``-th power by repeated squaring (``k >= 0``)."""
        if not self.is_square:
            raise InputError('Matrix.power(): matrix is not square')
        if k < 0:
            return self.inverse().power(-k)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    # Rank based quantities --------------------------------------------------

    def rank(self) -> int:
        if self._rank is None:
            self._rank = _echelon(self.field, self.data).rank
        return self._rank

    def normalized_rank(self) -> Fraction:
        return normalized_rank(self)

    def determinant(self):
        return determinant(self)

    def inverse(self) -> Matrix:
        return inverse(self)

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def to_json(self) -> dict:
        return {
            'field': self.field.spec.to_json(),
            'rows': self.rows,
            'cols': self.cols,
            'entries': [[self.field.format(x) for x in row] for row in self.data]
        }

    @staticmethod
    def from_json(obj, field=None) -> Matrix:
        """
        Decode ``{"field", "rows", "cols", "entries"}``. When ``field`` is given
        it must agree with the field named by the document (if any).
        """
        if not isinstance(obj, dict) or 'entries' not in obj:
            raise InputError('Matrix.from_json(): expected an object with an '
                             '"entries" array')
        if 'field' in obj:
            own = parse_field(obj['field'])
            if field is not None and parse_field(field) != own:
                raise FieldMismatchError(
                    'Matrix.from_json(): matrix is over %s, expected %s'
                    % (own.spec, parse_field(field).spec))
            field = own
        elif field is None:
            raise InputError('Matrix.from_json(): no field given')
        entries = obj['entries']
        rows = obj.get('rows', len(entries))
        cols = obj.get('cols', len(entries[0]) if entries else 0)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise InputError('Matrix.from_json(): entries do not match the '
                             'declared %sx%s shape' % (rows, cols))
        field = parse_field(field)
        return Matrix(field, field.array(entries, (rows, cols)))


# ----------------------------------------------------------------------------
# Elimination kernels
# ----------------------------------------------------------------------------

@dataclass
class _Echelon:
    rank: int
    # (original row, column) of each pivot in elimination order
    pivots: List[Tuple[int, int]]
    det: object = None
    form: np.ndarray = None


def _first_nonzero(column) -> int:
    nz = np.flatnonzero(column != 0)
    return int(nz[0]) if nz.size else -1


def _bareiss(a) -> _Echelon:
    """Fraction free elimination of a rational array."""
    rows, cols = a.shape
    scales, m = integer_rows(a)
    order = list(range(rows))
    pivots = []
    prev, sign, r = 1, 1, 0
    for c in range(cols):
        if r == rows:
            break
        i = _first_nonzero(m[r:, c])
        if i < 0:
            continue
        i += r
        if i != r:
            m[[r, i]] = m[[i, r]]
            order[r], order[i] = order[i], order[r]
            sign = -sign
        piv = m[r, c]
        if r + 1 < rows and c + 1 < cols:
            m[r + 1:, c + 1:] = (piv * m[r + 1:, c + 1:] -
                                 np.outer(m[r + 1:, c], m[r, c + 1:])) // prev
        m[r + 1:, c] = 0
        prev = piv
        pivots.append((order[r], c))
        r += 1

    det = None
    if rows == cols:
        if r < rows:
            det = Fraction(0)
        else:
            den = 1
            for s in scales:
                den *= s
            det = Fraction(sign * (prev if rows else 1), den)
    return _Echelon(r, pivots, det)


def _gauss(field, a, reduced=False) -> _Echelon:
    """Gaussian (or Gauss-Jordan when ``reduced``) elimination over ``field``."""
    a = a.copy()
    rows, cols = a.shape
    order = list(range(rows))
    pivots = []
    det = field.one
    prime = field.kind == 'Fp'
    r = 0
    for c in range(cols):
        if r == rows:
            break
        i = _first_nonzero(a[r:, c])
        if i < 0:
            continue
        i += r
        if i != r:
            a[[r, i]] = a[[i, r]]
            order[r], order[i] = order[i], order[r]
            det = field.normalize(-det)
        piv = int(a[r, c]) if prime else a[r, c]
        det = field.normalize(det * piv)
        a[r] = field.normalize(a[r] * field.inverse(piv))
        if reduced:
            targets = np.r_[0:r, r + 1:rows]
        else:
            targets = np.arange(r + 1, rows)
        if targets.size:
            a[targets] = field.normalize(a[targets] -
                                         np.outer(a[targets, c], a[r]))
        pivots.append((order[r], c))
        r += 1
    if rows == cols and r < rows:
        det = field.zero
    return _Echelon(r, pivots, det if rows == cols else None, a)


def _echelon(field, data) -> _Echelon:
    if field.kind == 'Q':
        return _bareiss(data)
    return _gauss(field, data)


# ----------------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------------

def rank(M: Matrix) -> int:
    """Exact rank of ``M``."""
    return M.rank()


def normalized_rank(M: Matrix) -> Fraction:
    """``rank(M) / n`` for a square ``n x n`` matrix; ``0`` when ``n = 0``."""
    if not M.is_square:
        raise InputError('normalized_rank(): matrix of shape %s is not square'
                         % (M.shape,))
    if M.rows == 0:
        return Fraction(0)
    return Fraction(M.rank(), M.rows)


def rank_distance(A: Matrix, B: Matrix) -> Fraction:
    """Normalized rank distance ``rank(A - B) / n``."""
    A._check_shape(B, 'rank_distance()')
    return normalized_rank(A - B)


def tensor(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product ``A ⊗ B``: block ``(i, j)`` equals ``A[i, j] * B``."""
    A._check(B, 'tensor()')
    shape = (A.rows * B.rows, A.cols * B.cols)
    if 0 in shape:
        return Matrix(A.field, A.field.full(shape))
    return Matrix(A.field, A.field.normalize(np.kron(A.data, B.data)))


def tensor_power(A: Matrix, k: int) -> Matrix:
    """``A ⊗ ... ⊗ A`` with ``k >= 1`` factors."""
    if k < 1:
        raise InputError('tensor_power(): need at least one factor, got %i' % k)
    result = A
    for _ in range(k - 1):
        result = tensor(result, A)
    return result


def direct_sum(*blocks: Matrix) -> Matrix:
    """Block diagonal matrix ``A ⊕ B ⊕ ...``."""
    if not blocks:
        raise InputError('direct_sum(): need at least one block')
    field = blocks[0].field
    for b in blocks[1:]:
        blocks[0]._check(b, 'direct_sum()')
    data = field.full((sum(b.rows for b in blocks), sum(b.cols for b in blocks)))
    r = c = 0
    for b in blocks:
        data[r:r + b.rows, c:c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return Matrix(field, data)


@dataclass(frozen=True)
class MinorWitness:
    """Row and column indices of a nonsingular square submatrix."""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    det: object


def find_full_rank_minor(M: Matrix, r: int = None) -> MinorWitness:
    """
    Locate an ``r x r`` submatrix of ``M`` with nonzero determinant, using the
    first ``r`` pivots of the deterministic elimination order. ``r`` defaults
    to the rank of ``M``.
    """
    ech = _echelon(M.field, M.data)
    if r is None:
        r = ech.rank
    if r < 0 or r > ech.rank:
        raise InputError('find_full_rank_minor(): requested size %i exceeds '
                         'the rank %i' % (r, ech.rank))
    rows = tuple(sorted(p[0] for p in ech.pivots[:r]))
    cols = tuple(sorted(p[1] for p in ech.pivots[:r]))
    det = determinant(M.submatrix(rows, cols))
    assert not M.field.is_zero(det)
    return MinorWitness(rows, cols, det)


def determinant(M: Matrix):
    if not M.is_square:
        raise InputError('determinant(): matrix of shape %s is not square'
                         % (M.shape,))
    if M.rows == 0:
        return M.field.one
    det = _echelon(M.field, M.data).det
    return int(det) if M.field.kind == 'Fp' else det


def kernel_basis(M: Matrix) -> Matrix:
    """
    Basis of the right kernel ``{v : M v = 0}``, returned as the columns of a
    ``cols x k`` matrix. One basis vector is produced per free column of the
    reduced row echelon form.
    """
    field = M.field
    ech = _gauss(field, M.data, reduced=True)
    pivot_cols = [c for _, c in ech.pivots]
    free = [c for c in range(M.cols) if c not in pivot_cols]
    basis = field.full((M.cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = field.one
        for i, c in enumerate(pivot_cols):
            basis[c, k] = field.normalize(-ech.form[i, f])
    return Matrix(field, basis)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square:
        raise InputError('inverse(): matrix of shape %s is not square'
                         % (M.shape,))
    n = M.rows
    field = M.field
    aug = field.full((n, 2 * n))
    aug[:, :n] = M.data
    for i in range(n):
        aug[i, n + i] = field.one
    ech = _gauss(field, aug, reduced=True)
    if ech.rank < n or any(c >= n for _, c in ech.pivots):
        raise InputError('inverse(): matrix is singular')
    return Matrix(field, ech.form[:, n:].copy())


def invertible_completion(A: Matrix) -> Matrix:
    """
    Return an invertible ``Ã`` with ``rank(A - Ã) = n - rank(A)``.

    With pivot rows ``R`` and pivot columns ``C`` of ``A``, a one is added at
    ``(k_t, j_t)`` where ``k_t`` runs over the rows outside ``R`` and ``j_t``
    over the columns outside ``C`` (both in increasing order). The pivot
    columns together with the new unit vectors then form a basis.
    """
    if not A.is_square:
        raise InputError('invertible_completion(): matrix of shape %s is not '
                         'square' % (A.shape,))
    field = A.field
    ech = _echelon(field, A.data)
    prows = {p[0] for p in ech.pivots}
    pcols = {p[1] for p in ech.pivots}
    free_rows = [i for i in range(A.rows) if i not in prows]
    free_cols = [j for j in range(A.cols) if j not in pcols]
    data = A.data.copy()
    for k, j in zip(free_rows, free_cols):
        data[k, j] = field.normalize(data[k, j] + field.one)
    result = Matrix(field, data)
    logger.debug('invertible_completion(): rank %i -> %i', ech.rank, A.rows)
    return result


def jordan_block(field, alpha, size: int) -> Matrix:
    """Upper triangular Jordan block ``J(alpha, size)``."""
    field = parse_field(field)
    if size < 1:
        raise InputError('jordan_block(): size must be positive, got %i' % size)
    data = field.full((size, size))
    a = field(alpha)
    for i in range(size):
        data[i, i] = a
        if i + 1 < size:
            data[i, i + 1] = field.one
    return Matrix(field, data)


def change_of_field(M: Matrix, target) -> Matrix:
    """
    Map the entries of ``M`` into ``target``. Supported are the reduction
    ``Q -> F_p`` (denominators must be prime to ``p``), the inclusion of ``Q``
    into a number field and the identity.
    """
    target = parse_field(target)
    if target == M.field:
        return M
    if M.field.kind != 'Q':
        raise InputError('change_of_field(): cannot map %s into %s'
                         % (M.field.spec, target.spec))
    data = target.full(M.shape)
    for idx, x in np.ndenumerate(M.data):
        data[idx] = target(x)
    return Matrix(target, data)


def restrict_scalars(M: Matrix) -> Matrix:
    """
    Restriction of scalars ``K -> Q`` for a degree ``e`` number field: each
    entry becomes the ``e x e`` rational matrix of multiplication by it on the
    power basis. Rational matrices are returned unchanged.
    """
    if not M.is_square:
        raise InputError('restrict_scalars(): expected a square matrix, got '
                         '%ix%i' % M.shape)
    field = M.field
    if field.kind == 'Q':
        return M
    if field.kind != 'NF':
        raise InputError('restrict_scalars(): expected a number field, got %s'
                         % field.spec)
    e = field.degree
    Q = make_field(FieldSpec.rationals())
    data = Q.full((M.rows * e, M.cols * e))
    for (i, j), x in np.ndenumerate(M.data):
        block = field.multiplication_matrix(x)
        for a in range(e):
            for b in range(e):
                data[i * e + a, j * e + b] = block[a][b]
    return Matrix(Q, data)


@dataclass(frozen=True)
class DirectFinitenessCheck:
    """Normalized ranks of ``AB - I`` and ``BA - I``; they always coincide."""
    left: Fraction
    right: Fraction

    @property
    def consistent(self) -> bool:
        return self.left == self.right


def direct_finiteness_witness(A: Matrix, B: Matrix) -> DirectFinitenessCheck:
    """
    Compare ``rank(AB - I)`` with ``rank(BA - I)``. Right multiplication by
    ``B`` maps the fixed space of ``AB`` injectively into that of ``BA`` (and
    vice versa), so the two normalized ranks agree; in particular ``AB = I``
    forces ``BA = I``.
    """
    A._check_shape(B, 'direct_finiteness_witness()')
    if not A.is_square:
        raise InputError('direct_finiteness_witness(): matrices are not square')
    one = Matrix.identity(A.field, A.rows)
    return DirectFinitenessCheck(rank_distance(A @ B, one),
                                 rank_distance(B @ A, one))

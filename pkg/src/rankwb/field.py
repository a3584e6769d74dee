"""
Exact scalar fields: the rationals, prime fields and number fields
``Q[x]/(m(x))`` given by a monic squarefree integer polynomial.

A field is described by a hashable :py:class:`FieldSpec` and realized by a
field handle obtained from :py:func:`make_field`. Handles coerce Python values
into canonical elements and know how to store them inside numpy arrays:

- ``Q``: :py:class:`fractions.Fraction` entries in ``object`` arrays.
- ``F_p``: residues in ``[0, p)``; ``int64`` arrays when ``p < 2^31`` and
  Python integers in ``object`` arrays otherwise.
- number fields: :py:class:`NumberFieldElement` entries in ``object`` arrays.
"""

from __future__ import annotations

import functools
import logging
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
import sympy

from .config import PRIME_LIMIT
from .errors import FieldMismatchError, InputError

logger = logging.getLogger(__name__)

# Residues below this bound are stored in int64 arrays
INT64_PRIME_LIMIT = 2**31


def as_integer(value, where: str) -> int:
    """
    Convert ``value`` to ``int``. Integral floats and strings are accepted;
    anything with a fractional part raises :py:class:`InputError`.
    """
    if isinstance(value, numbers.Integral):
        return int(value)
    try:
        q = Fraction(value)
    except (TypeError, ValueError, OverflowError):
        raise InputError('%s: expected an integer, got %r' % (where, value)) \
            from None
    if q.denominator != 1:
        raise InputError('%s: expected an integer, got %r' % (where, value))
    return int(q)


@dataclass(frozen=True)
class FieldSpec:
    """
    Description of an exact field.

    ``kind`` is one of ``'Q'``, ``'Fp'`` or ``'NF'``. Prime fields carry the
    modulus ``p``; number fields carry the integer coefficients of their monic
    defining polynomial in ascending degree order (``minpoly[-1] == 1``).
    """
    kind: str
    p: Optional[int] = None
    minpoly: Optional[Tuple[int, ...]] = None

    @staticmethod
    def rationals() -> FieldSpec:
        return FieldSpec('Q')

    @staticmethod
    def prime(p: int) -> FieldSpec:
        return FieldSpec('Fp', p=as_integer(p, 'FieldSpec.prime()'))

    @staticmethod
    def numberfield(coeffs) -> FieldSpec:
        return FieldSpec('NF', minpoly=tuple(
            as_integer(c, 'FieldSpec.numberfield()') for c in coeffs))

    @staticmethod
    def parse(text: str) -> FieldSpec:
        """
        Parse the command line notation ``Q``, ``Fp:101`` or ``NF:1,0,1``
        (number field coefficients in ascending degree order).
        """
        text = text.strip()
        try:
            if text == 'Q':
                return FieldSpec.rationals()
            kind, _, arg = text.partition(':')
            if kind == 'Fp' and arg:
                return FieldSpec.prime(int(arg))
            if kind == 'NF' and arg:
                return FieldSpec.numberfield(int(c) for c in arg.split(','))
        except ValueError:
            pass
        raise InputError('FieldSpec.parse(): cannot parse field "%s" (expected '
                         'Q, Fp:<p> or NF:<c0>,<c1>,...)' % text)

    @staticmethod
    def from_json(obj) -> FieldSpec:
        if isinstance(obj, str):
            return FieldSpec.parse(obj)
        if not isinstance(obj, dict) or 'kind' not in obj:
            raise InputError('FieldSpec.from_json(): expected an object with '
                             'a "kind" entry, got %r' % (obj,))
        kind = obj['kind']
        if kind == 'Q':
            return FieldSpec.rationals()
        if kind == 'Fp' and 'p' in obj:
            return FieldSpec.prime(obj['p'])
        if kind == 'NF' and 'minpoly' in obj:
            return FieldSpec.numberfield(obj['minpoly'])
        raise InputError('FieldSpec.from_json(): malformed field description %r'
                         % (obj,))

    def to_json(self) -> dict:
        if self.kind == 'Fp':
            return {'kind': 'Fp', 'p': self.p}
        if self.kind == 'NF':
            return {'kind': 'NF', 'minpoly': list(self.minpoly)}
        return {'kind': 'Q'}

    def __str__(self):
        if self.kind == 'Fp':
            return 'Fp:%i' % self.p
        if self.kind == 'NF':
            return 'NF:' + ','.join(str(c) for c in self.minpoly)
        return 'Q'


def _as_fraction(value, where) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError('%s: booleans are not field elements' % where)
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError('%s: cannot parse rational "%s"'
                             % (where, value)) from None
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    raise InputError('%s: expected an exact rational, got %r (%s)'
                     % (where, value, type(value).__name__))


class Field:
    """
    Base class of field handles. Subclasses provide coercion, formatting and
    the numpy storage conventions of their elements.
    """

    kind = None
    dtype = object

    def __init__(self, spec: FieldSpec):
        self.spec = spec

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return 'Field[%s]' % self.spec

    def __str__(self):
        return str(self.spec)

    @property
    def degree(self) -> int:
        """Dimension over the prime subfield (1 except for number fields)."""
        return 1

    def check_same(self, other: Field, where: str):
        if self.spec != other.spec:
            raise FieldMismatchError('%s: field mismatch (%s vs %s)'
                                     % (where, self.spec, other.spec))

    # Element level interface ------------------------------------------------

    def __call__(self, value):
        raise NotImplementedError

    def parse(self, obj):
        """Decode an element from its JSON representation."""
        return self(obj)

    def format(self, x):
        """Canonical JSON representation of an element."""
        return str(x)

    def is_zero(self, x) -> bool:
        return not x

    def inverse(self, x):
        if self.is_zero(x):
            raise InputError('%s.inverse(): zero has no inverse' % self.spec)
        return self.one / x

    def random_element(self, rng, bound=3):
        raise NotImplementedError

    # Array level interface --------------------------------------------------

    def full(self, shape, value=None):
        """Array of the given shape filled with ``value`` (default: zero)."""
        value = self.zero if value is None else value
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(value)
            return out
        return np.full(shape, value, dtype=self.dtype)

    def array(self, rows, shape):
        """Coerce nested lists into a canonical array of the given shape."""
        out = self.full(shape)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                out[i, j] = self(value)
        return out

    def normalize(self, a):
        """Bring the result of elementwise numpy arithmetic to canonical form."""
        return a

    def matmul(self, a, b):
        if a.shape[1] == 0:
            return self.full((a.shape[0], b.shape[1]))
        return self.normalize(a @ b)


class RationalField(Field):
    kind = 'Q'

    def __init__(self, spec):
        super().__init__(spec)
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, value):
        return _as_fraction(value, 'Q()')

    @property
    def characteristic(self):
        return 0

    def random_element(self, rng, bound=3):
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        return Fraction(num, den)

    def matmul(self, a, b):
        # Multiply integer numerators and rescale once at the end
        if a.shape[1] == 0:
            return self.full((a.shape[0], b.shape[1]))
        da, ia = integer_rows(a, common=True)
        db, ib = integer_rows(b, common=True)
        prod = ia @ ib
        scale = da * db
        out = np.empty(prod.shape, dtype=object)
        for idx, value in np.ndenumerate(prod):
            out[idx] = Fraction(int(value), scale)
        return out


def integer_rows(a, common=False):
    """
    Scale the rows of a rational ``object`` array to integers.

    Returns ``(scales, ints)`` where ``ints`` is an ``object`` array of Python
    integers. When ``common`` is set, a single common denominator is used and
    ``scales`` is an integer; otherwise ``scales`` lists one integer per row.
    """
    rows, cols = a.shape
    ints = np.empty((rows, cols), dtype=object)
    if common:
        den = 1
        for x in a.flat:
            den = math.lcm(den, x.denominator)
        for idx, x in np.ndenumerate(a):
            ints[idx] = x.numerator * (den // x.denominator)
        return den, ints

    scales = []
    for i in range(rows):
        den = 1
        for x in a[i]:
            den = math.lcm(den, x.denominator)
        for j in range(cols):
            x = a[i, j]
            ints[i, j] = x.numerator * (den // x.denominator)
        scales.append(den)
    return scales, ints


class PrimeField(Field):
    kind = 'Fp'

    def __init__(self, spec):
        super().__init__(spec)
        self.p = spec.p
        self.zero = 0
        self.one = 1
        self.dtype = np.int64 if self.p < INT64_PRIME_LIMIT else object

    @property
    def characteristic(self):
        return self.p

    def __call__(self, value):
        if isinstance(value, numbers.Integral) and not isinstance(value, bool):
            return int(value) % self.p
        q = _as_fraction(value, 'F_%i()' % self.p)
        if q.denominator % self.p == 0:
            raise InputError('F_%i(): denominator of %s is divisible by %i'
                             % (self.p, q, self.p))
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def format(self, x):
        return str(int(x))

    def inverse(self, x):
        x = int(x) % self.p
        if x == 0:
            raise InputError('%s.inverse(): zero has no inverse' % self.spec)
        return pow(x, -1, self.p)

    def random_element(self, rng, bound=None):
        return int(rng.integers(0, self.p))

    def normalize(self, a):
        return a % self.p

    def matmul(self, a, b):
        if a.shape[1] == 0:
            return self.full((a.shape[0], b.shape[1]))
        if self.dtype is np.int64:
            if a.shape[1] * (self.p - 1) ** 2 < 2**63:
                return (a @ b) % self.p
            prod = a.astype(object) @ b.astype(object)
            return (prod % self.p).astype(np.int64)
        return (a @ b) % self.p


class NumberFieldElement:
    """
    Element ``c_0 + c_1 x + ... + c_{d-1} x^{d-1}`` of ``Q[x]/(m(x))`` with
    rational coefficients. Instances are immutable and interoperate with
    Python integers and fractions.
    """

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field.spec != self.field.spec:
                raise FieldMismatchError(
                    'NumberFieldElement: field mismatch (%s vs %s)'
                    % (self.field.spec, other.field.spec))
            return other
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return NumberFieldElement(self.field, (a + b for a, b in
                                               zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return NumberFieldElement(self.field, (a - b for a, b in
                                               zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.field.multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * self.field.inverse(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.field.inverse(self)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.spec, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else '%s*x^%i' % (c, k))
        return '(%s)' % (' + '.join(terms) if terms else '0')


class NumberField(Field):
    kind = 'NF'

    def __init__(self, spec):
        super().__init__(spec)
        self.minpoly = spec.minpoly
        self.d = len(self.minpoly) - 1
        self._x = sympy.Symbol('x')
        self._modulus = sympy.Poly(list(reversed(self.minpoly)), self._x,
                                   domain='QQ')
        self.zero = NumberFieldElement(self, [Fraction(0)] * self.d)
        self.one = self(1)

    @property
    def degree(self):
        return self.d

    @property
    def characteristic(self):
        return 0

    def element(self, coeffs):
        """Element from a coefficient list of any length, reduced modulo m."""
        c = [_as_fraction(v, 'NF()') for v in coeffs]
        return NumberFieldElement(self, self._reduce(c))

    def generator(self):
        return self.element([0, 1])

    def __call__(self, value):
        if isinstance(value, NumberFieldElement):
            if value.field.spec != self.spec:
                raise FieldMismatchError('NF(): field mismatch (%s vs %s)'
                                         % (value.field.spec, self.spec))
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value])

    def _reduce(self, c):
        m, d = self.minpoly, self.d
        c = list(c) + [Fraction(0)] * max(0, d - len(c))
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                for j in range(d):
                    c[k - d + j] -= top * m[j]
            c[k] = Fraction(0)
        return c[:d]

    def multiply(self, a, b):
        prod = [Fraction(0)] * (2 * self.d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return NumberFieldElement(self, self._reduce(prod))

    def inverse(self, x):
        if not x:
            raise InputError('%s.inverse(): zero has no inverse' % self.spec)
        poly = sympy.Poly(list(reversed(x.coeffs)), self._x, domain='QQ')
        try:
            inv = poly.invert(self._modulus)
        except (sympy.polys.polyerrors.NotInvertible, ZeroDivisionError):
            raise InputError('%s.inverse(): %r is a zero divisor (the defining '
                             'polynomial is reducible)' % (self.spec, x)) from None
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return self.element(coeffs)

    def format(self, x):
        return [str(c) for c in x.coeffs]

    def random_element(self, rng, bound=3):
        return self.element([Fraction(int(rng.integers(-bound, bound + 1)),
                                      int(rng.integers(1, bound + 1)))
                             for _ in range(self.d)])

    def multiplication_matrix(self, alpha):
        """
        Matrix of ``y -> alpha * y`` on the basis ``1, x, ..., x^{d-1}``:
        column ``j`` holds the coefficients of ``alpha * x^j``.
        """
        out = [[Fraction(0)] * self.d for _ in range(self.d)]
        basis = self.one
        x = self.generator() if self.d > 1 else None
        for j in range(self.d):
            col = (alpha * basis).coeffs
            for i in range(self.d):
                out[i][j] = col[i]
            if x is not None:
                basis = basis * x
        return out


@functools.lru_cache(maxsize=None)
def make_field(spec: FieldSpec) -> Field:
    """
    Create the handle of the field described by ``spec``.

    Raises :py:class:`InputError` when ``p`` is not a prime below ``2^61`` or
    when the number field polynomial is not monic, integral and squarefree of
    degree at least one.
    """
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    if spec.kind == 'Q':
        return RationalField(spec)
    if spec.kind == 'Fp':
        p = spec.p
        if p is None or p < 2 or p >= PRIME_LIMIT or not sympy.isprime(p):
            raise InputError('make_field(): modulus %r is not a prime in '
                             '[2, 2^61)' % (p,))
        return PrimeField(spec)
    if spec.kind == 'NF':
        m = spec.minpoly
        if m is None or len(m) < 2:
            raise InputError('make_field(): number field polynomial must have '
                             'degree at least one')
        if m[-1] != 1:
            raise InputError('make_field(): number field polynomial %s is not '
                             'monic' % (list(m),))
        x = sympy.Symbol('x')
        poly = sympy.Poly(list(reversed(m)), x, domain='QQ')
        if poly.gcd(poly.diff(x)).degree() > 0:
            raise InputError('make_field(): number field polynomial %s is not '
                             'squarefree' % (list(m),))
        if not poly.is_irreducible:
            logger.warning('make_field(): %s is reducible, NF:%s is a product '
                           'of fields and some elements are not invertible',
                           poly.as_expr(), ','.join(str(c) for c in m))
        return NumberField(spec)
    raise InputError('make_field(): unknown field kind %r' % (spec.kind,))


def parse_field(obj) -> Field:
    """Field handle from a command line string or a JSON description."""
    if isinstance(obj, Field):
        return obj
    if isinstance(obj, FieldSpec):
        return make_field(obj)
    return make_field(FieldSpec.from_json(obj))

"""
Separation amplification by tensor squaring.

Tensor squaring ``A_{i+1} = A_i ⊗ A_i`` contracts the normalized eigenvalue-1
mass ``M₁`` (and, for unipotent matrices, the block ratio ``J``) along the map
``f(x) = x² + (1 − x)²``. Iterating ``f`` from any ``c < 1`` converges to ``1/2``,
which is how a separation of ``1 − f^{m−1}(c)`` (halved by the block sum with
an untouched copy) approaches ``1/4``.

The module also builds the weighted block sums used to combine tensor levels
of a group algebra element and the elimination products that witness
injectivity of that combination.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .certify import AlmostRep, defect_report
from .config import check_budget, size_budget
from .errors import InputError
from .jordan import algebraic_multiplicity, block_count_ratio
from .matrix import (Matrix, direct_sum, normalized_rank, rank_distance,
                     tensor)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def two_squares(x) -> Fraction:
    """``x² + (1 − x)²``, the contraction map ``f``."""
    x = Fraction(x)
    return x * x + (1 - x) * (1 - x)


def f_iterate(x, m: int) -> Fraction:
    """``f^m(x)`` for ``x ∈ [1/2, 1]`` and ``m ≥ 0``."""
    x = Fraction(x)
    if not HALF <= x <= 1:
        raise InputError('f_iterate(): x = %s lies outside [1/2, 1]' % x)
    if m < 0:
        raise InputError('f_iterate(): negative iteration count %i' % m)
    for _ in range(m):
        x = two_squares(x)
    return x


def amplification_bound_sequence(c, m: int) -> List[Fraction]:
    """``[f^0(c), ..., f^{m−1}(c)]``."""
    out, x = [], f_iterate(c, 0)
    for _ in range(m):
        out.append(x)
        x = two_squares(x)
    return out


def _default_constant(x: Fraction) -> Fraction:
    return max((x + 1) / 2, HALF)


def _check_constant(c, lower: Fraction, where: str) -> Fraction:
    c = Fraction(c)
    if not (lower < c < 1 and c >= HALF):
        raise InputError('%s: bound constant c = %s must lie in (%s, 1) and be '
                         'at least 1/2' % (where, c, lower))
    return c


@dataclass
class AmplificationTrace:
    """
    Quantities along ``A_1, ..., A_m``. ``j_values`` is only filled for
    unipotent input; ``checks`` lists every bound that was verified with its
    outcome.
    """
    level: int
    dims: List[int]
    m1_values: List[Fraction]
    j_values: List[Fraction]
    constant: Optional[Fraction]
    f_bounds: List[Fraction]
    checks: List[dict] = dc_field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(c['holds'] for c in self.checks)

    def to_json(self) -> dict:
        fmt = lambda values: [str(v) for v in values]
        return {
            'level': self.level,
            'dims': self.dims,
            'm1_values': fmt(self.m1_values),
            'j_values': fmt(self.j_values),
            'c': None if self.constant is None else str(self.constant),
            'f_bounds': fmt(self.f_bounds),
            'checks': [{k: (str(v) if isinstance(v, Fraction) else v)
                        for k, v in c.items()} for c in self.checks],
            'holds': self.holds
        }


def _check(checks, level, quantity, value, bound, strict):
    holds = value < bound if strict else value <= bound
    checks.append({'level': level, 'quantity': quantity, 'value': value,
                   'bound': bound, 'relation': '<' if strict else '<=',
                   'holds': holds})


def tensor_square_iterate(A: Matrix, m: int, c=None,
                          budget: int = None) -> AmplificationTrace:
    """
    Materialize ``A_1, ..., A_m`` and record ``M₁(A_i)`` (and ``J(A_i)`` when
    ``A`` is unipotent).

    Parameter ``c`` (``Fraction`` or ``None``):
        Bound constant in ``(M₁(A), 1)`` (or ``(J(A), 1)`` in the unipotent
        case). Defaults to the midpoint ``(x + 1)/2``. The checks
        ``M₁(A_i) < f^{i−1}(c)`` (resp. ``J(A_i) < f^{i−1}(c)``) are only made
        when ``M₁(A) ∈ (1/2, 1)`` or ``A`` is unipotent with ``J(A) < 1``.

    Parameter ``budget`` (``int``):
        Largest admissible size of ``A_m``.
    """
    if m < 1:
        raise InputError('tensor_square_iterate(): level must be at least 1')
    if not A.is_invertible():
        raise InputError('tensor_square_iterate(): matrix is singular')
    n = A.rows
    final = n ** (2 ** (m - 1))
    check_budget(final, size_budget(budget), 'tensor_square_iterate()')

    dims, m1_values, j_values, checks = [], [], [], []
    current = A
    for i in range(1, m + 1):
        if i > 1:
            current = tensor(current, current)
        dims.append(current.rows)
        m1_values.append(algebraic_multiplicity(current, 1))
        if m1_values[0] == 1:
            j_values.append(block_count_ratio(current, 1))
        logger.debug('tensor_square_iterate(): level %i, size %i, M1 = %s',
                     i, current.rows, m1_values[-1])

    for i in range(2, m + 1):
        _check(checks, i, 'M1 <= f(M1 previous)', m1_values[i - 1],
               two_squares(m1_values[i - 2]), strict=False)
        if j_values:
            _check(checks, i, 'J <= J previous', j_values[i - 1],
                   j_values[i - 2], strict=False)
            _check(checks, i, 'J <= f(J previous)', j_values[i - 1],
                   two_squares(j_values[i - 2]), strict=False)

    m1 = m1_values[0]
    constant, values, quantity = None, None, None
    if HALF < m1 < 1:
        values, quantity = m1_values, 'M1'
    elif m1 == 1 and j_values[0] < 1:
        values, quantity = j_values, 'J'
    if values is not None:
        lower = values[0]
        constant = (_default_constant(lower) if c is None else
                    _check_constant(c, lower, 'tensor_square_iterate()'))
    elif c is not None:
        constant = Fraction(c)

    f_bounds = []
    if constant is not None and HALF <= constant <= 1:
        f_bounds = amplification_bound_sequence(constant, m)
    if values is not None:
        for i in range(1, m + 1):
            _check(checks, i, '%s < f^(i-1)(c)' % quantity, values[i - 1],
                   f_bounds[i - 1], strict=True)
    return AmplificationTrace(m, dims, m1_values, j_values, constant, f_bounds,
                              checks)


@dataclass
class BoostElement:
    rho: Fraction
    rho_power: Fraction
    rho_copy: Fraction
    m1: Fraction
    m1_power: Fraction
    branch: str
    constant: Optional[Fraction]
    multiplicity_bound: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return (self.rho == (self.rho_power + self.rho_copy) / 2
                and self.rho >= self.multiplicity_bound
                and self.rho >= self.bound)

    def to_json(self) -> dict:
        out = {k: (str(v) if isinstance(v, Fraction) else v)
               for k, v in self.__dict__.items()}
        out['holds'] = self.holds
        return out


@dataclass
class BoostReport:
    level: int
    dim: int
    per_element: Dict[str, BoostElement]
    defect_in: Fraction
    defect_out: Fraction
    defect_bound: Fraction
    degenerate: Tuple[str, ...] = ()
    equal_images_preserved: bool = True

    @property
    def holds(self) -> bool:
        return (all(e.holds for e in self.per_element.values())
                and self.defect_out <= self.defect_bound
                and self.equal_images_preserved)

    @property
    def min_separation(self) -> Fraction:
        return min((e.rho for e in self.per_element.values()),
                   default=Fraction(1))

    def to_json(self) -> dict:
        return {
            'level': self.level,
            'dim': self.dim,
            'min_separation': str(self.min_separation),
            'defect_in': str(self.defect_in),
            'defect_out': str(self.defect_out),
            'defect_bound': str(self.defect_bound),
            'degenerate': list(self.degenerate),
            'equal_images_preserved': self.equal_images_preserved,
            'holds': self.holds,
            'per_element': {g: e.to_json() for g, e in self.per_element.items()}
        }


def boost_separation(rep: AlmostRep, m: int, c=None,
                     budget: int = None) -> Tuple[AlmostRep, BoostReport]:
    """
    Replace every ``φ(g)`` by ``(φ(g))_m ⊕ (φ(g) ⊗ I)`` where ``(φ(g))_m`` is the
    ``m``-th tensor square iterate and the identity factor has size
    ``n^{2^{m−1} − 1}``, so both summands have size ``n^{2^{m−1}}``.

    Per element the report gives the exact separation, the eigenvalue bound
    ``½·min(1 − M₁((φ(g))_m), 1 − M₁(φ(g)))`` and the amplification bound
    ``½(1 − f^{m−1}(c))`` (via ``M₁`` when ``φ(g)`` is not unipotent, via ``J``
    otherwise). Defects grow at most by the factor ``(2^{m−1} + 1)/2``.
    """
    if m < 1:
        raise InputError('boost_separation(): level must be at least 1')
    n = rep.dim
    size = n ** (2 ** (m - 1))
    check_budget(2 * size, size_budget(budget), 'boost_separation()')
    padding = Matrix.identity(rep.field, size // n if n else 0)
    one = Matrix.identity(rep.field, 2 * size)

    matrices, per_element, degenerate = {}, {}, []
    for g in rep.labels:
        A = rep[g]
        power = A
        for _ in range(m - 1):
            power = tensor(power, power)
        copy = tensor(A, padding)
        matrices[g] = direct_sum(power, copy)
        if g == rep.table.identity:
            continue

        m1, m1_power = algebraic_multiplicity(A, 1), algebraic_multiplicity(power, 1)
        if m1 < 1:
            branch, lower = 'M1', m1
        else:
            branch, lower = 'J', block_count_ratio(A, 1)
        if lower == 1:
            constant, bound = None, Fraction(0)
            degenerate.append(g)
        else:
            constant = (_default_constant(lower) if c is None else
                        _check_constant(c, lower, 'boost_separation(%s)' % g))
            bound = (1 - f_iterate(constant, m - 1)) / 2
        per_element[g] = BoostElement(
            rho=rank_distance(one, matrices[g]),
            rho_power=rank_distance(Matrix.identity(rep.field, size), power),
            rho_copy=rank_distance(Matrix.identity(rep.field, n), A),
            m1=m1, m1_power=m1_power, branch=branch, constant=constant,
            multiplicity_bound=min(1 - m1_power, 1 - m1) / 2, bound=bound)
    if degenerate:
        logger.warning('boost_separation(): elements %s map to I, their '
                       'separation stays 0', degenerate)

    boosted = AlmostRep(rep.table, matrices, rep.field)
    defect_in = defect_report(rep).max_defect
    defect_out = defect_report(boosted).max_defect
    defect_bound = Fraction(2 ** (m - 1) + 1, 2) * defect_in

    equal = True
    for g in rep.labels:
        for h in rep.labels:
            if g < h and rep[g] == rep[h] and boosted[g] != boosted[h]:
                equal = False
    report = BoostReport(m, 2 * size, per_element, defect_in, defect_out,
                         defect_bound, tuple(degenerate), equal)
    logger.debug('boost_separation(): level %i, size %i, separation %s',
                 m, 2 * size, report.min_separation)
    return boosted, report


@dataclass
class CombineReport:
    matrix: Matrix
    dims: List[int]
    weights: List[int]
    block_rhos: List[Fraction]
    trailing_rho: Fraction
    rho: Fraction
    predicted: Fraction

    @property
    def holds(self) -> bool:
        return self.rho == self.predicted

    @property
    def vanishes(self) -> bool:
        return self.rho == 0

    @property
    def components_vanish(self) -> bool:
        return all(r == 0 for r in self.block_rhos) and self.trailing_rho == 0

    def to_json(self) -> dict:
        return {
            'size': self.matrix.rows,
            'dims': self.dims,
            'weights': self.weights,
            'block_rhos': [str(r) for r in self.block_rhos],
            'trailing_rho': str(self.trailing_rho),
            'rho': str(self.rho),
            'predicted': str(self.predicted),
            'holds': self.holds,
            'vanishes': self.vanishes,
            'components_vanish': self.components_vanish
        }


def weighted_combine(thetas: Sequence[Matrix], epsilon,
                     budget: int = None) -> CombineReport:
    """
    Block sum ``⊕_i (Θⁱ ⊗ I_{w_i}) ⊕ ε·I_L`` in which block ``i`` fills the
    fraction ``2^{−i}`` of the total size ``D = 2^k L`` and the trailing scalar
    block fills ``2^{−k}`` (``L`` is the least common multiple of the sizes of
    the ``Θⁱ``). Verifies
    ``ρ = Σ 2^{−i} ρ(Θⁱ) + 2^{−k} ρ(ε I)`` as an exact rational identity.
    """
    thetas = list(thetas)
    if not thetas:
        raise InputError('weighted_combine(): need at least one level')
    field = thetas[0].field
    for T in thetas:
        thetas[0]._check(T, 'weighted_combine()')
        if not T.is_square or T.rows == 0:
            raise InputError('weighted_combine(): levels must be nonempty '
                             'square matrices')
    k = len(thetas)
    dims = [T.rows for T in thetas]
    L = math.lcm(*dims)
    total = 2 ** k * L
    check_budget(total, size_budget(budget), 'weighted_combine()')

    weights = [2 ** (k - i) * L // n for i, n in enumerate(dims, start=1)]
    trailing = Matrix.scalar(field, epsilon, L)
    blocks = [tensor(T, Matrix.identity(field, w)) for T, w in zip(thetas, weights)]
    combined = direct_sum(*blocks, trailing)

    block_rhos = [normalized_rank(T) for T in thetas]
    trailing_rho = normalized_rank(trailing)
    predicted = sum((r / 2 ** i for i, r in enumerate(block_rhos, start=1)),
                    Fraction(0)) + trailing_rho / 2 ** k
    rho = normalized_rank(combined)
    if rho != predicted:
        logger.warning('weighted_combine(): ρ = %s differs from %s', rho,
                       predicted)
    return CombineReport(combined, dims, weights, block_rhos, trailing_rho,
                         rho, predicted)


@dataclass
class EliminationWitness:
    matrix: Matrix
    rho: Fraction
    factors: List[Fraction]
    predicted: Fraction
    degenerate: bool

    @property
    def holds(self) -> bool:
        return self.rho == self.predicted

    def to_json(self) -> dict:
        return {'size': self.matrix.rows, 'rho': str(self.rho),
                'factors': [str(f) for f in self.factors],
                'predicted': str(self.predicted), 'degenerate': self.degenerate,
                'holds': self.holds}


def tensor_elimination_witness(coeffs: Sequence, matrices: Sequence[Matrix],
                               budget: int = None) -> EliminationWitness:
    """
    Elimination product ``W = a₁U₁ ⊗ (U₁ − U₂) ⊗ ... ⊗ (U₁ − U_r)``. Since
    ``ρ`` is multiplicative under ``⊗`` and ``U₁`` is invertible,
    ``ρ(W) = Π_i ρ(U₁ − U_i)``, which is positive exactly when ``U₁`` differs
    from every other ``U_i``. A repeated ``U₁`` is flagged as degenerate;
    repeats among the other matrices leave ``W`` nonzero.
    """
    matrices = list(matrices)
    r = len(matrices)
    if r < 2:
        raise InputError('tensor_elimination_witness(): need at least two '
                         'matrices, got %i' % r)
    if len(coeffs) != r:
        raise InputError('tensor_elimination_witness(): %i coefficients for %i '
                         'matrices' % (len(coeffs), r))
    field = matrices[0].field
    coeffs = [field(a) for a in coeffs]
    if any(field.is_zero(a) for a in coeffs):
        raise InputError('tensor_elimination_witness(): coefficients must be '
                         'nonzero')
    for U in matrices:
        matrices[0]._check_shape(U, 'tensor_elimination_witness()')
        if not U.is_invertible():
            raise InputError('tensor_elimination_witness(): matrices must be '
                             'invertible')
    n = matrices[0].rows
    check_budget(n ** r, size_budget(budget), 'tensor_elimination_witness()')

    degenerate = any(U == matrices[0] for U in matrices[1:])
    if degenerate:
        logger.warning('tensor_elimination_witness(): first matrix is repeated, '
                       'the witness vanishes')
    U1 = matrices[0]
    W = U1.scale(coeffs[0])
    factors = []
    for U in matrices[1:]:
        D = U1 - U
        factors.append(normalized_rank(D))
        W = tensor(W, D)
    predicted = Fraction(1)
    for f in factors:
        predicted *= f
    return EliminationWitness(W, normalized_rank(W), factors, predicted,
                              degenerate)

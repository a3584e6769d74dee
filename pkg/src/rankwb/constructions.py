"""
Generators of explicit (almost) representations:

- group table generators (cyclic groups, direct products, fragments of ``Z``),
- regular representations of finite groups by permutation matrices,
- representations of extensions ``1 → H → G → Q → 1`` with finite ``Q``
  induced from a representation of ``H`` through a cocycle,
- commuting/non-commuting tensor witnesses in ``GL_n`` built from ``S_3``,
- left multiplication on Følner subspaces of an algebra.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .certify import (AlgebraPatch, AlmostRep, AlmostRepCheck,
                      PartialGroupTable, algebra_almost_rep_check,
                      defect_report)
from .errors import InputError
from .field import parse_field
from .matrix import (Matrix, invertible_completion, kernel_basis,
                     normalized_rank, rank_distance)
from .perm import (Permutation, embed_sofic_rep, permutation_matrix,
                   rank_from_cycles)

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------------
# Group tables
# ----------------------------------------------------------------------------

def cyclic_group_table(k: int) -> PartialGroupTable:
    """``Z/k`` with labels ``e, g1, ..., g{k-1}`` (``g_i`` is the class of ``i``)."""
    if k < 1:
        raise InputError('cyclic_group_table(): order must be positive')
    label = lambda i: 'e' if i % k == 0 else 'g%i' % (i % k)
    elements = [label(i) for i in range(k)]
    product = {(label(i), label(j)): label(i + j)
               for i in range(k) for j in range(k)}
    inverse = {label(i): label(-i) for i in range(k)}
    return PartialGroupTable(elements, product, inverse)


def integer_fragment_table(radius: int) -> PartialGroupTable:
    """``{-radius, ..., radius} ⊂ Z`` with identity ``"0"``."""
    if radius < 0:
        raise InputError('integer_fragment_table(): negative radius')
    values = range(-radius, radius + 1)
    product = {(str(a), str(b)): str(a + b)
               for a in values for b in values if abs(a + b) <= radius}
    inverse = {str(a): str(-a) for a in values}
    return PartialGroupTable([str(a) for a in values], product, inverse,
                             identity='0')


def direct_product_table(A: PartialGroupTable,
                         B: PartialGroupTable) -> PartialGroupTable:
    """Product fragment with labels ``"a:b"``; defined where both factors are."""
    label = lambda a, b: '%s:%s' % (a, b)
    elements = [label(a, b) for a in A.elements for b in B.elements]
    product = {}
    for (a1, a2), a in A.product.items():
        for (b1, b2), b in B.product.items():
            product[(label(a1, b1), label(a2, b2))] = label(a, b)
    inverse = {label(a, b): label(ai, bi) for a, ai in A.inverse.items()
               for b, bi in B.inverse.items()}
    return PartialGroupTable(elements, product, inverse,
                             identity=label(A.identity, B.identity))


def table_from_generator(obj) -> PartialGroupTable:
    """
    Decode the shorthand ``{"generator": "cyclic", "order": k}`` or
    ``{"generator": "integers", "radius": r}``.
    """
    kind = obj.get('generator')
    try:
        if kind == 'cyclic':
            return cyclic_group_table(int(obj['order']))
        if kind == 'integers':
            return integer_fragment_table(int(obj['radius']))
    except (KeyError, TypeError, ValueError):
        pass
    raise InputError('table_from_generator(): malformed generator %r' % (obj,))


# ----------------------------------------------------------------------------
# Regular representations
# ----------------------------------------------------------------------------

def regular_rep(table: PartialGroupTable, field) -> AlmostRep:
    """
    Left regular representation of a finite group: ``φ(g)`` is the permutation
    matrix of ``h ↦ gh``. Exact (defect 0) with separation
    ``1 − cyc(λ_g)/|G|``.
    """
    if not table.is_total():
        raise InputError('regular_rep(): table is not a total group table')
    perms = {}
    for g in table.elements:
        perms[g] = Permutation(table.index(table.mul(g, h))
                               for h in table.elements)
    rep, _ = embed_sofic_rep(perms, field, table)
    return rep


# ----------------------------------------------------------------------------
# Extensions with finite quotient
# ----------------------------------------------------------------------------

class ExtensionData:
    """
    Data of an extension ``1 → H → G → Q → 1`` with finite ``Q``.

    Parameter ``group`` (:py:class:`PartialGroupTable`):
        Fragment of ``G`` large enough to hold the products used by the
        cocycle identity.

    Parameter ``quotient`` (:py:class:`PartialGroupTable`):
        Total table of ``Q``; its element order fixes the block order.

    Parameter ``projection`` (``Mapping[str, str]``):
        Quotient map ``G → Q`` on the labels of ``group``.

    Parameter ``lift`` (``Mapping[str, str]``):
        Section ``σ: Q → G`` with ``σ(e) = e``.

    Parameter ``h_rep`` (:py:class:`AlmostRep`):
        Representation of the fragment of ``H`` holding the cocycle values.

    Parameter ``cocycle`` (``Mapping[(str, str), str]`` or ``None``):
        ``α(g, γ) = σ(gγ)⁻¹ g σ(γ)``; derived from ``lift`` when omitted.
    """

    def __init__(self, group: PartialGroupTable, quotient: PartialGroupTable,
                 projection: Mapping[str, str], lift: Mapping[str, str],
                 h_rep: AlmostRep, cocycle=None):
        self.group = group
        self.quotient = quotient
        self.projection = dict(projection)
        self.lift = dict(lift)
        self.h_rep = h_rep
        if not quotient.is_total():
            raise InputError('ExtensionData(): quotient table is not total')
        for g, q in self.projection.items():
            if g not in group or q not in quotient:
                raise InputError('ExtensionData(): projection %s -> %s mentions '
                                 'an unknown label' % (g, q))
        for q in quotient.elements:
            s = self.lift.get(q)
            if s is None or s not in group:
                raise InputError('ExtensionData(): no lift for "%s"' % q)
            if self.projection.get(s, q) != q:
                raise InputError('ExtensionData(): lift of "%s" projects to "%s"'
                                 % (q, self.projection[s]))
        if self.lift[quotient.identity] != group.identity:
            raise InputError('ExtensionData(): the lift must send the identity '
                             'to the identity')
        if cocycle is None:
            cocycle = cocycle_from_lift(group, quotient, self.projection,
                                        self.lift)
        self.cocycle = {(str(g), str(q)): str(h) for (g, q), h in cocycle.items()}
        self.validate_cocycle()

    def act(self, g: str, gamma: str) -> str:
        """``gγ``: left action of ``G`` on ``Q`` through the projection."""
        return self.quotient.mul(self.projection[g], gamma)

    def in_subgroup(self, g: str) -> bool:
        return self.projection.get(g) == self.quotient.identity

    def validate_cocycle(self):
        """
        ``α(g₁g₂, γ) = α(g₁, g₂γ) α(g₂, γ)`` on every triple where all terms
        and products are defined.
        """
        alpha, G = self.cocycle, self.group
        for (g, q), h in alpha.items():
            if g not in G or q not in self.quotient or g not in self.projection:
                raise InputError('ExtensionData(): cocycle entry (%s, %s) '
                                 'mentions an unknown label' % (g, q))
            if h not in G or not self.in_subgroup(h):
                raise InputError('ExtensionData(): cocycle value α(%s, %s) = %s '
                                 'does not lie in H' % (g, q, h))
        domain = sorted({g for g, _ in alpha}, key=G.index)
        for g1 in domain:
            for g2 in domain:
                g12 = G.mul(g1, g2)
                if g12 is None or g12 not in domain:
                    continue
                for q in self.quotient.elements:
                    lhs = alpha.get((g12, q))
                    a = alpha.get((g1, self.act(g2, q)))
                    b = alpha.get((g2, q))
                    if None in (lhs, a, b):
                        continue
                    rhs = G.mul(a, b)
                    if rhs is not None and rhs != lhs:
                        raise InputError(
                            'ExtensionData(): cocycle identity fails for '
                            '(%s, %s, %s): %s vs %s*%s = %s'
                            % (g1, g2, q, lhs, a, b, rhs))

    @staticmethod
    def from_json(obj, field=None) -> ExtensionData:
        from .io import table_from_json
        try:
            h_obj = dict(obj['h_rep'])
            if 'field' not in h_obj:
                h_obj['field'] = obj.get('field', field)
            h_rep = AlmostRep.from_json(h_obj)
            cocycle = None
            if 'cocycle' in obj:
                cocycle = {}
                for key, h in obj['cocycle'].items():
                    g, _, q = key.partition(',')
                    cocycle[(g.strip(), q.strip())] = h
            return ExtensionData(table_from_json(obj['group']),
                                 table_from_json(obj['quotient']),
                                 obj['projection'], obj['lift'], h_rep, cocycle)
        except KeyError as e:
            raise InputError('ExtensionData.from_json(): missing entry %s' % e) \
                from None


def supported_elements(data: ExtensionData,
                       folner: Sequence[str] = None) -> List[str]:
    """
    Elements ``g`` of the fragment for which ``α(g, γ)`` is known and
    represented by ``h_rep`` for every ``γ`` of the Følner set.
    """
    F = data.quotient.elements if folner is None else folner
    out = []
    for g in data.group.elements:
        if g not in data.projection:
            continue
        values = [data.cocycle.get((g, gamma)) for gamma in F]
        if all(a is not None and a in data.h_rep.table for a in values):
            out.append(g)
    return out


def cocycle_from_lift(group: PartialGroupTable, quotient: PartialGroupTable,
                      projection: Mapping[str, str],
                      lift: Mapping[str, str]) -> Dict[Tuple[str, str], str]:
    """
    ``α(g, γ) = σ(gγ)⁻¹ · (g · σ(γ))`` wherever the fragment defines the
    products involved.
    """
    alpha = {}
    for g, q in projection.items():
        for gamma in quotient.elements:
            target = quotient.mul(q, gamma)
            right = group.mul(g, lift[gamma])
            inv = group.inv(lift[target])
            if right is None or inv is None:
                continue
            value = group.mul(inv, right)
            if value is not None:
                alpha[(g, gamma)] = value
    return alpha


@dataclass
class ExtensionElement:
    in_subgroup: bool
    ratio: Fraction
    rho_psi: Fraction
    completion: Fraction
    separation: Fraction
    kernel_bound: Fraction
    fixed_points: int
    unspecified: bool

    @property
    def holds(self) -> bool:
        return (self.rho_psi == self.ratio
                and self.separation >= self.kernel_bound)

    def to_json(self) -> dict:
        out = {k: (str(v) if isinstance(v, Fraction) else v)
               for k, v in self.__dict__.items()}
        out['holds'] = self.holds
        return out


@dataclass
class ExtensionReport:
    dim: int
    folner: Tuple[str, ...]
    per_element: Dict[str, ExtensionElement]
    defect_h: Fraction
    defect_out: Fraction
    defect_bound: Fraction
    separation_h: Fraction

    @property
    def holds(self) -> bool:
        free_full = all(e.separation >= Fraction(1, 2)
                        for e in self.per_element.values()
                        if not e.in_subgroup and e.fixed_points == 0
                        and e.ratio == 1)
        # ψ(g) for g ∈ H is block diagonal in conjugates of φ(g)
        inside_h = all(e.separation >= self.separation_h
                       for e in self.per_element.values() if e.in_subgroup)
        return (free_full and inside_h and self.defect_out <= self.defect_bound
                and all(e.holds for e in self.per_element.values()))

    def to_json(self) -> dict:
        return {
            'dim': self.dim,
            'folner': list(self.folner),
            'defect_h': str(self.defect_h),
            'separation_h': str(self.separation_h),
            'defect': str(self.defect_out),
            'defect_bound': str(self.defect_bound),
            'holds': self.holds,
            'per_element': {g: e.to_json() for g, e in self.per_element.items()}
        }


def amenable_extension_rep(data: ExtensionData, E: Sequence[str],
                           folner: Sequence[str] = None
                           ) -> Tuple[AlmostRep, ExtensionReport]:
    """
    Induced representation ``ψ(g) = Σ_{γ ∈ F ∩ g⁻¹F} e_{gγ,γ} ⊗ φ(α(g, γ))`` on
    ``F ⊆ Q`` (default ``F = Q``) for the elements ``E`` of ``G``.

    Block ``(gγ, γ)`` holds ``φ(α(g, γ))``. For a proper ``F`` the singular
    ``ψ(g)`` are replaced by their invertible completions. Per element the
    report checks ``ρ(ψ(g)) = |F ∩ g⁻¹F| / |F|`` and the kernel counting bound
    on ``ρ(I − ψ(g))``: along every cycle of ``γ ↦ gγ`` inside ``F`` a kernel
    vector is fixed by its value at one point, chains leaving ``F`` carry none,
    and a fixed point ``γ`` contributes ``dim ker(I − φ(α(g, γ)))``.
    """
    Q, phi = data.quotient, data.h_rep
    F = list(Q.elements) if folner is None else list(folner)
    if not F or any(q not in Q for q in F) or len(set(F)) != len(F):
        raise InputError('amenable_extension_rep(): Følner set must be a '
                         'nonempty subset of the quotient')
    E = list(E)
    if data.group.identity not in E:
        E.insert(0, data.group.identity)
    for g in E:
        if g not in data.group or g not in data.projection:
            raise InputError('amenable_extension_rep(): "%s" is not a known '
                             'element of G' % g)
        for gamma in F:
            a = data.cocycle.get((g, gamma))
            if a is None or a not in phi.table:
                raise InputError('amenable_extension_rep(): missing cocycle '
                                 'matrix for α(%s, %s)' % (g, gamma))
    n, field = phi.dim, phi.field
    size = n * len(F)
    pos = {q: i for i, q in enumerate(F)}
    one_n = Matrix.identity(field, n)
    one = Matrix.identity(field, size)

    matrices, per_element = {}, {}
    for g in E:
        data_ = field.full((size, size))
        inside, cycles_ok = 0, {}
        for gamma in F:
            target = data.act(g, gamma)
            if target not in pos:
                continue
            inside += 1
            cycles_ok[gamma] = target
            block = phi[data.cocycle[(g, gamma)]].data
            r, c = pos[target] * n, pos[gamma] * n
            data_[r:r + n, c:c + n] = block
        psi = Matrix(field, data_)
        ratio = Fraction(inside, len(F))
        rho_psi = normalized_rank(psi)
        full = psi if rho_psi == 1 else invertible_completion(psi)
        completion = rank_distance(full, psi)
        matrices[g] = full

        # Kernel count: cycles of length >= 2 contribute n, fixed points the
        # kernel of their block, chains nothing.
        kernel, fixed, seen = 0, 0, set()
        for start in F:
            if start in seen:
                continue
            path, x = [], start
            while x in cycles_ok and x not in seen and x not in path:
                path.append(x)
                x = cycles_ok[x]
            seen.update(path)
            if path and x == path[0]:
                if len(path) == 1:
                    fixed += 1
                    a = phi[data.cocycle[(g, start)]]
                    kernel += kernel_basis(one_n - a).cols
                else:
                    kernel += n
        bound = max(Fraction(0), 1 - Fraction(kernel, size) - completion)
        in_h = data.in_subgroup(g)
        unspecified = not in_h and fixed > 0
        if unspecified:
            logger.warning('amenable_extension_rep(): %s lies outside H but '
                           'fixes %i points of F, only the kernel count bound '
                           'applies', g, fixed)
        per_element[g] = ExtensionElement(in_h, ratio, rho_psi, completion,
                                          rank_distance(one, full), bound,
                                          fixed, unspecified)
    per_element.pop(data.group.identity, None)

    table = data.group.restrict(E)
    rep = AlmostRep(table, matrices, field)

    # Multiplicativity of φ on the cocycle pairs that ψ actually multiplies
    defect_h = Fraction(0)
    for g1, g2, g12 in table.triples():
        for gamma in F:
            mid = data.act(g2, gamma)
            key = (g12, gamma)
            if mid not in pos or (g1, mid) not in data.cocycle or \
                    key not in data.cocycle:
                continue
            a, b = data.cocycle[(g1, mid)], data.cocycle[(g2, gamma)]
            defect_h = max(defect_h, rank_distance(phi[a] @ phi[b],
                                                   phi[data.cocycle[key]]))
    min_ratio = min((e.ratio for e in per_element.values()), default=Fraction(1))
    defect_out = defect_report(rep).max_defect
    report = ExtensionReport(size, tuple(F), per_element, defect_h, defect_out,
                             2 * defect_h + 4 * (1 - min_ratio),
                             defect_report(phi).min_separation)
    return rep, report


# ----------------------------------------------------------------------------
# Commutator witnesses
# ----------------------------------------------------------------------------

TRANSPOSITION = Permutation([1, 0, 2])
THREE_CYCLE = Permutation([1, 2, 0])


@dataclass
class WitnessRow:
    i: int
    j: int
    commute: bool
    distance: Fraction
    predicted: Fraction
    rank_checked: bool

    @property
    def holds(self) -> bool:
        return self.distance == self.predicted and self.commute == (self.i < self.j)

    def to_json(self) -> dict:
        return {'i': self.i, 'j': self.j, 'commute': self.commute,
                'distance': str(self.distance), 'predicted': str(self.predicted),
                'rank_checked': self.rank_checked, 'holds': self.holds}


@dataclass
class WitnessTable:
    n: int
    count: int
    rows: List[WitnessRow] = dc_field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def min_distance(self) -> Fraction:
        """Smallest distance among the non-commuting pairs ``i ≥ j``."""
        return min((r.distance for r in self.rows if r.i >= r.j),
                   default=Fraction(0))

    def to_json(self) -> dict:
        return {'n': self.n, 'l': self.count, 'holds': self.holds,
                'min_distance': str(self.min_distance),
                'rows': [r.to_json() for r in self.rows]}


def witness_permutations(n: int, count: int):
    """
    Permutations behind :py:func:`lupini_witnesses`: ``g_i`` applies the
    transposition ``(0 1)`` on the first ``i`` of ``count`` ternary legs,
    ``h_j`` applies the 3-cycle on leg ``j``; both fix the ``n − 3^count``
    padding points.
    """
    if count < 1:
        raise InputError('witness_permutations(): need at least one leg')
    cube = 3 ** count
    if cube > n:
        raise InputError('lupini_witnesses(): 3^%i = %i exceeds n = %i'
                         % (count, cube, n))
    pad = Permutation.identity(n - cube)
    gs, hs = [], []
    for i in range(1, count + 1):
        g = TRANSPOSITION
        for _ in range(i - 1):
            g = g.tensor(TRANSPOSITION)
        g = g.tensor(Permutation.identity(3 ** (count - i)))
        gs.append(g.direct_sum(pad))
        h = Permutation.identity(3 ** (i - 1)).tensor(THREE_CYCLE)
        h = h.tensor(Permutation.identity(3 ** (count - i)))
        hs.append(h.direct_sum(pad))
    return gs, hs


def lupini_witnesses(n: int, count: int, field='Q', rank_check: bool = True
                     ) -> Tuple[List[Tuple[Matrix, Matrix]], WitnessTable]:
    """
    Pairs ``(g_i, h_i)`` in ``GL_n`` with ``[g_i, h_j] = I`` for ``i < j`` and
    ``d_rk([g_i, h_j], I) = (3^l − 3^{l−1})/n`` for ``i ≥ j``. When ``3^l`` is
    the largest power of three not exceeding ``n`` that distance exceeds
    ``2/9``.

    Distances come from the cycle count of the commutator permutation. With
    ``rank_check`` the commutator is also formed as a matrix product and its
    rank distance compared.
    """
    field = parse_field(field)
    gs, hs = witness_permutations(n, count)
    ident = Permutation.identity(n)
    far = Fraction(3 ** count - 3 ** (count - 1), n)
    mats = [(permutation_matrix(g, field), permutation_matrix(h, field))
            for g, h in zip(gs, hs)]
    table = WitnessTable(n, count)
    one = Matrix.identity(field, n)
    for i in range(1, count + 1):
        g = gs[i - 1]
        for j in range(1, count + 1):
            h = hs[j - 1]
            comm = g * h * g.inverse() * h.inverse()
            distance = rank_from_cycles(comm)
            if rank_check:
                Mg, Mh = mats[i - 1][0], mats[j - 1][1]
                C = (Mg @ Mh @ permutation_matrix(g.inverse(), field)
                     @ permutation_matrix(h.inverse(), field))
                if C != permutation_matrix(comm, field) or \
                        rank_distance(C, one) != distance:
                    raise AssertionError('lupini_witnesses(): matrix and '
                                         'permutation commutators disagree')
            table.rows.append(WitnessRow(i, j, comm == ident, distance,
                                         Fraction(0) if i < j else far,
                                         rank_check))
    logger.debug('lupini_witnesses(): n = %i, l = %i, min distance %s', n,
                 count, table.min_distance)
    return mats, table


def maximal_count(n: int) -> int:
    """Largest ``l`` with ``3^l ≤ n`` (``0`` when ``n < 3``)."""
    count = 0
    while 3 ** (count + 1) <= n:
        count += 1
    return count


# ----------------------------------------------------------------------------
# Følner left multiplication
# ----------------------------------------------------------------------------

@dataclass
class FolnerReport:
    check: AlmostRepCheck
    rhos: Dict[str, Fraction]

    @property
    def min_rho(self) -> Fraction:
        return min(self.rhos.values(), default=Fraction(0))

    def to_json(self) -> dict:
        out = self.check.to_json()
        out['rho'] = {a: str(r) for a, r in self.rhos.items()}
        out['min_rho'] = str(self.min_rho)
        return out


def folner_left_mult_rep(patch: AlgebraPatch, S: Sequence[str],
                         action: Mapping[str, Mapping[str, Mapping[str, object]]],
                         epsilon=1) -> Tuple[Dict[str, Matrix], FolnerReport]:
    """
    Represent the basis of ``patch`` by left multiplication on the subspace
    with basis ``S``.

    ``action[a][s]`` gives the coordinates of ``a·s`` in ``S`` for those basis
    vectors ``s`` whose product stays in ``S``; all other basis vectors are
    sent to zero. A missing unit entry means the identity.
    """
    field = patch.field
    S = list(S)
    pos = {s: i for i, s in enumerate(S)}
    k = len(S)
    psi = {}
    for a in patch.basis:
        rule = action.get(a)
        if rule is None:
            psi[a] = Matrix.identity(field, k) if a == patch.unit else \
                Matrix.zeros(field, k)
            continue
        data = field.full((k, k))
        for s, coords in rule.items():
            if s not in pos:
                raise InputError('folner_left_mult_rep(): "%s" is not in S' % s)
            for t, c in coords.items():
                if t not in pos:
                    raise InputError('folner_left_mult_rep(): %s*%s leaves S '
                                     '(component "%s")' % (a, s, t))
                data[pos[t], pos[s]] = field(c)
        psi[a] = Matrix(field, data)
    check = algebra_almost_rep_check(patch, psi, epsilon)
    rhos = {a: normalized_rank(M) for a, M in psi.items()}
    return psi, FolnerReport(check, rhos)


def _monomial(i: int) -> str:
    return '1' if i == 0 else ('x' if i == 1 else 'x^%i' % i)


def truncated_polynomial_folner(k: int, degree: int = 1, field='Q'):
    """
    Patch ``L = span{1, x, ..., x^degree}`` of ``F[x]`` with the window
    ``S = span{1, ..., x^{k−1}}``; ``x^a`` acts on ``x^s`` for ``s + a < k``.
    Returns ``(patch, S, action)`` for :py:func:`folner_left_mult_rep`.
    """
    if k < 1 or degree < 0:
        raise InputError('truncated_polynomial_folner(): need k >= 1 and '
                         'degree >= 0')
    field = parse_field(field)
    basis = [_monomial(i) for i in range(degree + 1)]
    structure = {(_monomial(i), _monomial(j)): {_monomial(i + j): 1}
                 for i in range(degree + 1) for j in range(degree + 1)
                 if i + j <= degree}
    patch = AlgebraPatch(field, basis, structure)
    S = [_monomial(i) for i in range(k)]
    action = {_monomial(a): {_monomial(s): {_monomial(s + a): 1}
                             for s in range(k) if s + a < k}
              for a in range(degree + 1)}
    return patch, S, action

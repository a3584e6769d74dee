"""
Reduction of rational almost representations modulo a prime.

A prime ``p`` is *good* for a representation when it divides no entry
denominator, no determinant ``det φ(s)`` and no determinant of the chosen
full rank minor of each ``I − φ(s)``. Reduction modulo a good prime keeps every
``φ(s)`` invertible, keeps ``rank(I − φ(s))`` unchanged (the minor survives and
ranks never grow under reduction) and can only shrink defects.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Tuple

import sympy

from .certify import AlmostRep, defect_report
from .config import DEFAULT_PRIME_START, PRIME_LIMIT
from .errors import CertificationError, InputError
from .field import FieldSpec, as_integer, make_field
from .matrix import (Matrix, change_of_field, determinant,
                     find_full_rank_minor, restrict_scalars)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Exclusion:
    """A nonzero rational whose numerator and denominator ``p`` must avoid."""
    element: str
    kind: str
    value: Fraction

    def divisible_by(self, p: int) -> bool:
        return self.value.numerator % p == 0 or self.value.denominator % p == 0

    def to_json(self) -> dict:
        return {'element': self.element, 'kind': self.kind,
                'value': str(self.value)}


def to_rationals(rep: AlmostRep) -> AlmostRep:
    """Push a number field representation through restriction of scalars."""
    if rep.field.kind == 'Q':
        return rep
    if rep.field.kind != 'NF':
        raise InputError('to_rationals(): expected a representation over Q or a '
                         'number field, got %s' % rep.field.spec)
    return rep.map(restrict_scalars, make_field(FieldSpec.rationals()))


def exclusions(rep: AlmostRep) -> List[Exclusion]:
    """
    Values a good prime must not divide, per element ``s``: every entry
    denominator of ``φ(s)``, ``det φ(s)`` and the determinant of the
    deterministic full rank minor of ``I − φ(s)``.
    """
    if rep.field.kind != 'Q':
        raise InputError('exclusions(): representation is over %s, expected Q'
                         % rep.field.spec)
    out = []
    one = Matrix.identity(rep.field, rep.dim)
    for s in rep.labels:
        M = rep[s]
        den = 1
        for x in M.data.flat:
            den = math.lcm(den, x.denominator)
        if den > 1:
            out.append(Exclusion(s, 'denominator', Fraction(den)))
        out.append(Exclusion(s, 'det', Fraction(determinant(M))))
        D = one - M
        r = D.rank()
        if r:
            minor = find_full_rank_minor(D, r)
            out.append(Exclusion(s, 'minor', Fraction(minor.det)))
    return out


@dataclass
class PrimeSelection:
    p: int
    excluded: List[int]
    exclusions: List[Exclusion]

    def to_json(self) -> dict:
        return {'p': self.p, 'excluded': self.excluded,
                'exclusions': [e.to_json() for e in self.exclusions]}


def select_good_prime(rep: AlmostRep, start: int = DEFAULT_PRIME_START
                      ) -> PrimeSelection:
    """
    Smallest prime ``p ≥ start`` dividing none of the :py:func:`exclusions`.
    ``excluded`` lists the primes that were skipped on the way.
    """
    rep = to_rationals(rep)
    values = exclusions(rep)
    p = sympy.nextprime(max(as_integer(start, 'select_good_prime()'), 2) - 1)
    skipped = []
    while any(e.divisible_by(p) for e in values):
        skipped.append(int(p))
        p = sympy.nextprime(p)
    if p >= PRIME_LIMIT:
        raise InputError('select_good_prime(): no admissible prime below 2^61')
    logger.debug('select_good_prime(): p = %i, skipped %s', p, skipped)
    return PrimeSelection(int(p), skipped, values)


@dataclass
class ReductionCertificate:
    """
    Evidence that reduction modulo ``p`` preserved the ranks of all
    ``I − φ(s)`` and invertibility of all ``φ(s)`` and did not increase the
    defect of any product.
    """
    p: int
    violated: List[Exclusion]
    ranks: Dict[str, Tuple[int, int]]
    invertible: Dict[str, bool]
    defects: Dict[Tuple[str, str], Tuple[Fraction, Fraction]]
    defect_before: Fraction = Fraction(0)
    defect_after: Fraction = Fraction(0)
    notes: List[str] = dc_field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (not self.violated
                and all(a == b for a, b in self.ranks.values())
                and all(self.invertible.values())
                and all(after <= before for before, after in self.defects.values()))

    def to_json(self) -> dict:
        return {
            'p': self.p,
            'valid': self.valid,
            'violated': [e.to_json() for e in self.violated],
            'ranks': {s: {'before': a, 'after': b}
                      for s, (a, b) in self.ranks.items()},
            'invertible': dict(self.invertible),
            'defect_before': str(self.defect_before),
            'defect_after': str(self.defect_after),
            'defects': {'%s,%s' % k: {'before': str(a), 'after': str(b)}
                        for k, (a, b) in self.defects.items()},
            'notes': list(self.notes)
        }


def _reduce_matrix(M: Matrix, target):
    try:
        return change_of_field(M, target)
    except InputError:
        return None


def reduce_mod_p(rep: AlmostRep, p: int) -> Tuple[AlmostRep, ReductionCertificate]:
    """
    Reduce ``rep`` entrywise modulo ``p`` (``a/b ↦ a·b⁻¹``) and certify the
    result. A prime dividing one of the exclusions is rejected with a
    :py:class:`CertificationError` whose ``report`` names the offending values
    and shows which ranks collapsed.
    """
    rep = to_rationals(rep)
    p = as_integer(p, 'reduce_mod_p()')
    if p < 2 or p >= PRIME_LIMIT or not sympy.isprime(p):
        raise InputError('reduce_mod_p(): %i is not a prime below 2^61' % p)
    target = make_field(FieldSpec.prime(p))
    violated = [e for e in exclusions(rep) if e.divisible_by(p)]

    reduced, ranks, invertible, notes = {}, {}, {}, []
    one = Matrix.identity(rep.field, rep.dim)
    one_p = Matrix.identity(target, rep.dim)
    for s in rep.labels:
        R = _reduce_matrix(rep[s], target)
        before = (one - rep[s]).rank()
        if R is None:
            notes.append('%s: entry denominator divisible by %i' % (s, p))
            ranks[s] = (before, -1)
            invertible[s] = False
            continue
        reduced[s] = R
        ranks[s] = (before, (one_p - R).rank())
        invertible[s] = R.is_invertible()

    defects = {}
    if len(reduced) == len(rep.labels):
        for g, h, gh in rep.table.triples():
            before = (rep[g] @ rep[h] - rep[gh]).normalized_rank()
            after = (reduced[g] @ reduced[h] - reduced[gh]).normalized_rank()
            defects[(g, h)] = (before, after)
    cert = ReductionCertificate(p, violated, ranks, invertible, defects, notes=notes)
    if defects:
        cert.defect_before = max(b for b, _ in defects.values())
        cert.defect_after = max(a for _, a in defects.values())

    if not cert.valid:
        names = ', '.join('%s of %s = %s' % (e.kind, e.element, e.value)
                          for e in violated) or 'none'
        collapsed = [s for s, (a, b) in ranks.items() if a != b]
        raise CertificationError('reduce_mod_p(): prime %i is not admissible '
                                 '(divides %s; rank changes at %s)'
                                 % (p, names, collapsed or 'no element'),
                                 report=cert)
    out = AlmostRep(rep.table, reduced, target)
    recomputed = defect_report(out).max_defect
    if recomputed != cert.defect_after:
        raise CertificationError('reduce_mod_p(): reduced defect %s disagrees '
                                 'with the certified %s'
                                 % (recomputed, cert.defect_after), report=cert)
    logger.debug('reduce_mod_p(): certified reduction modulo %i', p)
    return out, cert

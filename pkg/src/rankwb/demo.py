"""
End-to-end run over the bundled corpus. Rows 1 to 4 are smoke runs with
reduced instance counts and sizes, and say so in their detail string; the
full-size randomized and exhaustive checks live in the test suite under the
``slow`` marker.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from . import io
from .amplify import (boost_separation, tensor_square_iterate,
                      two_squares, weighted_combine)
from .certify import group_algebra_apply
from .config import RANDOM_SEED, size_budget
from .constructions import (amenable_extension_rep, folner_left_mult_rep,
                            lupini_witnesses, maximal_count,
                            supported_elements, truncated_polynomial_folner)
from .errors import BudgetExceeded, CertificationError
from .field import FieldSpec, make_field, parse_field
from .jordan import algebraic_multiplicity, block_count_ratio, verify_jordan_tensor
from .matrix import (Matrix, direct_finiteness_witness, direct_sum,
                     invertible_completion, normalized_rank, rank_distance,
                     tensor)
from .perm import (Permutation, cycle_and_fix_counts, hamming_distance,
                   permutation_matrix, rank_from_cycles)
from .reduce import reduce_mod_p, select_good_prime
from .sampling import (default_rng, planted_multiplicity, random_invertible,
                       random_matrix, random_permutation, random_unipotent)

logger = logging.getLogger(__name__)

PASS, FAIL, SKIP = 'PASS', 'FAIL', 'SKIP'

# Corpus representations pushed through certify, boost and reduce
CORPUS_REPS = ('z2', 'z3', 'sign', 'unipotent_z', 'doubling')
BOOST_REPS = ('z2', 'z3', 'sign', 'unipotent_z')

# Smoke run sizes for rows 1 to 4
SMOKE_RANK_LAWS = 40
SMOKE_PERMUTATIONS = 200
SMOKE_JORDAN_SIZE = 4
SMOKE_CONTRACTIONS = 20


def _row(criterion, ok, detail):
    return {'criterion': criterion, 'status': PASS if ok else FAIL,
            'detail': detail}


def rank_laws(field, rng, count=SMOKE_RANK_LAWS, max_size=4):
    """Count violations of the basic rank laws on random instances."""
    failures = 0
    for _ in range(count):
        n = int(rng.integers(1, max_size + 1))
        m = int(rng.integers(1, max_size + 1))
        A = random_matrix(field, rng, n, rank=int(rng.integers(0, n + 1)))
        B = random_matrix(field, rng, n, rank=int(rng.integers(0, n + 1)))
        C = random_matrix(field, rng, m, rank=int(rng.integers(0, m + 1)))
        U, V = random_invertible(field, rng, n), random_invertible(field, rng, n)
        completed = invertible_completion(A)
        checks = [
            (A + B).rank() <= A.rank() + B.rank(),
            (A @ B).rank() <= min(A.rank(), B.rank()),
            direct_sum(A, C).rank() == A.rank() + C.rank(),
            tensor(A, C).rank() == A.rank() * C.rank(),
            completed.is_invertible(),
            rank_distance(A, completed) == 1 - normalized_rank(A),
            direct_finiteness_witness(A, B).consistent,
            rank_distance(U @ A @ V, U @ B @ V) == rank_distance(A, B),
        ]
        failures += checks.count(False)
    return failures


def permutation_sandwich(field, rng, count=SMOKE_PERMUTATIONS, max_size=30,
                         matrix_size=12):
    failures = 0
    for _ in range(count):
        n = int(rng.integers(1, max_size + 1))
        p = random_permutation(rng, n)
        ident = Permutation.identity(n)
        rho = rank_from_cycles(p)
        ham = hamming_distance(ident, p)
        _, fixed = cycle_and_fix_counts(p)
        ok = ham == 1 - Fraction(fixed, n) and rho <= ham <= 2 * rho
        if n <= matrix_size:
            ok = ok and rank_distance(Matrix.identity(field, n),
                                      permutation_matrix(p, field)) == rho
        failures += not ok
    return failures


def _criterion_rank_laws(field, rng):
    failures = rank_laws(field, rng)
    return _row(1, failures == 0,
                'smoke run: %i violations on %i random instances over %s'
                % (failures, SMOKE_RANK_LAWS, field.spec))


def _criterion_permutations(field, rng):
    failures = permutation_sandwich(field, rng)
    return _row(2, failures == 0,
                'smoke run: %i violations on %i random permutations'
                % (failures, SMOKE_PERMUTATIONS))


def _criterion_jordan(field):
    bad = []
    total = 0
    for s in range(1, SMOKE_JORDAN_SIZE + 1):
        for t in range(s, SMOKE_JORDAN_SIZE + 1):
            for alpha in (1, 2, 3):
                for beta in (1, 2, 3):
                    total += 1
                    if not verify_jordan_tensor(alpha, s, beta, t, field).verdict:
                        bad.append((s, t, alpha, beta))
    example = verify_jordan_tensor(1, 2, 1, 3, field).computed.blocks
    return _row(3, not bad and example == (4, 2),
                'smoke run (s, t <= %i): %i of %i profiles match, '
                'J(1,2)⊗J(1,3) -> %s' % (SMOKE_JORDAN_SIZE, total - len(bad),
                                          total, list(example)))


def _criterion_amplification(field, rng, budget):
    A = Matrix.diagonal(field, [1, 1, -1])
    trace = tensor_square_iterate(A, 3, budget=budget)
    ok = trace.holds and trace.m1_values[1] == Fraction(5, 9)
    failures = 0
    for _ in range(SMOKE_CONTRACTIONS):
        n = int(rng.integers(2, 5))
        B = planted_multiplicity(field, rng, n, int(rng.integers(1, n + 1)))
        m1 = algebraic_multiplicity(B, 1)
        failures += algebraic_multiplicity(tensor(B, B), 1) > two_squares(m1)
        U = random_unipotent(field, rng, n)
        j = block_count_ratio(U, 1)
        failures += block_count_ratio(tensor(U, U), 1) > min(j, two_squares(j))
    return _row(4, ok and failures == 0,
                'M1 of diag(1,1,-1)^(x2) = %s, smoke run: %i violations on '
                '%i random instances' % (trace.m1_values[1], failures,
                                         SMOKE_CONTRACTIONS))


def _criterion_boost(field, budget):
    details, ok = [], True
    for name in BOOST_REPS:
        _, report = boost_separation(io.load_rep(name, field), 3, budget=budget)
        ok = ok and report.holds
        details.append('%s: %s' % (name, report.min_separation))
    _, report = boost_separation(io.load_rep('unipotent_z', field), 2,
                                 budget=budget)
    quarter = report.min_separation >= Fraction(1, 4)
    return _row(5, ok and quarter and report.holds,
                'level 3 separations %s; unipotent Z at level 2: %s'
                % (', '.join(details), report.min_separation))


def _criterion_combine(field, budget):
    sign = io.load_rep('sign', field)
    f = {'e': 1, 'g1': -1}
    thetas = [group_algebra_apply(sign, f, i, budget) for i in (1, 2)]
    combined = weighted_combine(thetas, 0, budget)
    doubling = io.load_rep('doubling', field)
    g = {'1': 1, '0': -2}
    depth1 = normalized_rank(group_algebra_apply(doubling, g, 1, budget))
    depth2 = normalized_rank(group_algebra_apply(doubling, g, 2, budget))
    ok = (combined.holds and combined.rho == Fraction(3, 8)
          and depth1 == 0 and depth2 > 0)
    return _row(6, ok, 'sign rep e - g at k = 2: %s; u1 - 2u0 under 2^k I: '
                'depth 1 -> %s, depth 2 -> %s' % (combined.rho, depth1, depth2))


def _criterion_reduce():
    # Reduction always starts from the rational corpus
    Q = make_field(FieldSpec.rationals())
    primes, ok = [], True
    for name in CORPUS_REPS:
        rep = io.load_rep(name, Q)
        p = select_good_prime(rep).p
        _, cert = reduce_mod_p(rep, p)
        ok = ok and cert.valid
        primes.append('%s: %i' % (name, p))
    try:
        reduce_mod_p(io.load_rep('sign', Q), 2)
        rejected = False
    except CertificationError as e:
        rejected = e.report.ranks['g1'] == (1, 0)
    return _row(7, ok and rejected, 'good primes %s; sign mod 2 rejected: %s'
                % (', '.join(primes), rejected))


def _criterion_extension(field):
    data = io.load_extension('z2_extension', field)
    rep, report = amenable_extension_rep(data, supported_elements(data))
    one = Matrix.identity(field, rep.dim)
    rho = rank_distance(one, rep['1'])
    ok = report.holds and rho == Fraction(3, 4) and report.defect_out == 0
    return _row(8, ok, 'ρ(I - ψ(1)) = %s, defect %s' % (rho, report.defect_out))


def _criterion_witnesses(field):
    _, table = lupini_witnesses(3, 1, field)
    first = table.min_distance
    worst, ok = Fraction(1), first == Fraction(2, 3) and table.holds
    for n in range(3, 101):
        _, t = lupini_witnesses(n, maximal_count(n), field, rank_check=n <= 27)
        ok = ok and t.holds
        worst = min(worst, t.min_distance)
    ok = ok and worst >= Fraction(2, 9)
    return _row(9, ok, 'n = 3: %s; smallest distance for n <= 100: %s'
                % (first, worst))


def _criterion_folner(field):
    patch, S, action = truncated_polynomial_folner(8, 1, field)
    _, report = folner_left_mult_rep(patch, S, action, Fraction(1, 4))
    ok = (report.check.deficiency <= Fraction(1, 4)
          and report.rhos['x'] == Fraction(7, 8))
    return _row(10, ok, 'deficiency %s, ρ(ψ(x)) = %s'
                % (report.check.deficiency, report.rhos['x']))


def run_demo(budget=None, field=None) -> dict:
    """
    Run every summary row and return ``{"field", "budget", "rows", "passed"}``.
    Rows that would exceed the size budget are reported as ``SKIP`` with a
    ``budget`` marker; any other failure aborts with the error of its step.
    """
    budget = size_budget(budget)
    field = parse_field('Q' if field is None else field)
    rng = default_rng(RANDOM_SEED)
    steps = [
        (1, lambda: _criterion_rank_laws(field, rng)),
        (2, lambda: _criterion_permutations(field, rng)),
        (3, lambda: _criterion_jordan(field)),
        (4, lambda: _criterion_amplification(field, rng, budget)),
        (5, lambda: _criterion_boost(field, budget)),
        (6, lambda: _criterion_combine(field, budget)),
        (7, _criterion_reduce),
        (8, lambda: _criterion_extension(field)),
        (9, lambda: _criterion_witnesses(field)),
        (10, lambda: _criterion_folner(field)),
    ]
    rows = []
    for criterion, step in steps:
        logger.info('run_demo(): criterion %i', criterion)
        try:
            rows.append(step())
        except BudgetExceeded as e:
            rows.append({'criterion': criterion, 'status': SKIP,
                         'detail': 'budget: %s' % e})
    return {
        'field': str(field.spec),
        'budget': budget,
        'rows': rows,
        'passed': all(r['status'] != FAIL for r in rows)
    }

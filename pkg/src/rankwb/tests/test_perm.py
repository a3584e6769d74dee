from fractions import Fraction

import pytest

from rankwb.certify import PartialGroupTable, defect_report
from rankwb.constructions import cyclic_group_table
from rankwb.errors import InputError
from rankwb.matrix import Matrix, direct_sum, rank_distance, tensor
from rankwb.perm import (Permutation, cycle_and_fix_counts, embed_sofic_rep,
                         hamming_distance, permutation_matrix,
                         rank_from_cycles)
from rankwb.test.util import random_permutation


def test01_construction():
    p = Permutation.from_cycles(5, [(0, 2, 4)])
    assert p.images == (2, 1, 4, 3, 0)
    assert p.cycles() == [(0, 2, 4), (1,), (3,)]
    assert p * p.inverse() == Permutation.identity(5)
    with pytest.raises(InputError, match='bijection'):
        Permutation([0, 0, 1])
    with pytest.raises(InputError):
        Permutation([0, 1]) * Permutation([0, 1, 2])


def test02_cycle_examples():
    assert rank_from_cycles(Permutation([1, 0])) == Fraction(1, 2)
    assert rank_from_cycles(Permutation([1, 2, 0])) == Fraction(2, 3)
    assert rank_from_cycles(Permutation.identity(4)) == 0
    assert rank_from_cycles(Permutation([])) == 0
    assert cycle_and_fix_counts(Permutation([1, 0, 2, 3])) == (3, 2)
    assert hamming_distance(Permutation.identity(3),
                            Permutation([1, 2, 0])) == 1


def test03_matrix_convention(field_Q):
    p, q = Permutation([1, 2, 0]), Permutation([1, 0, 2])
    A = permutation_matrix(p, field_Q)
    # A e_0 = e_1
    assert A[1, 0] == 1 and A[0, 0] == 0
    assert permutation_matrix(p * q, field_Q) == A @ permutation_matrix(q, field_Q)


def test04_tensor_and_sum(fields_exact):
    p, q = Permutation([1, 2, 0]), Permutation([1, 0])
    Ap, Aq = permutation_matrix(p, fields_exact), permutation_matrix(q, fields_exact)
    assert permutation_matrix(p.tensor(q), fields_exact) == tensor(Ap, Aq)
    assert permutation_matrix(p.direct_sum(q), fields_exact) == direct_sum(Ap, Aq)


def test05_rank_matches_cycles(fields_exact, np_rng):
    for _ in range(30):
        n = int(np_rng.integers(1, 12))
        p = random_permutation(np_rng, n)
        one = Matrix.identity(fields_exact, n)
        rho = rank_distance(one, permutation_matrix(p, fields_exact))
        assert rho == rank_from_cycles(p)
        ham = hamming_distance(Permutation.identity(n), p)
        assert rho <= ham <= 2 * rho


@pytest.mark.slow
def test06_sandwich_randomized(np_rng):
    for _ in range(2000):
        n = int(np_rng.integers(1, 200))
        p = random_permutation(np_rng, n)
        rho = rank_from_cycles(p)
        _, fixed = cycle_and_fix_counts(p)
        ham = hamming_distance(Permutation.identity(n), p)
        assert ham == 1 - Fraction(fixed, n)
        assert rho <= ham <= 2 * rho


def test07_embed_cyclic(field_Q):
    table = cyclic_group_table(3)
    perms = {'e': Permutation.identity(3), 'g1': Permutation([1, 2, 0]),
             'g2': Permutation([2, 0, 1])}
    rep, report = embed_sofic_rep(perms, field_Q, table)
    assert report.certified
    assert report.per_element['g1'] == (1, Fraction(2, 3), Fraction(2, 3))
    assert report.perm_defect == 0 and report.matrix_defect == 0
    defects = defect_report(rep)
    assert defects.max_defect == 0
    assert defects.min_separation == Fraction(2, 3)


def test08_embed_almost_rep(field_Q):
    # Z/2 sent to a product of two transpositions and a 3-cycle
    table = cyclic_group_table(2)
    perms = {'g1': Permutation([1, 0, 3, 2, 5, 6, 4])}
    rep, report = embed_sofic_rep(perms, field_Q, table)
    ham, rk = report.per_pair[('g1', 'g1')]
    # p^2 moves only the 3-cycle points
    assert ham == Fraction(3, 7)
    assert rk == Fraction(2, 7)
    assert report.certified
    assert defect_report(rep).max_defect == Fraction(2, 7)


def test09_degenerate_and_errors(field_Q, caplog):
    rep, report = embed_sofic_rep({'g': Permutation.identity(3)}, field_Q)
    assert report.degenerate == ('g',)
    assert 'identity permutation' in caplog.text
    assert rep.labels == ('g', 'e')
    with pytest.raises(InputError, match='different sizes'):
        embed_sofic_rep({'a': Permutation([1, 0]),
                         'b': Permutation([0, 1, 2])}, field_Q)
    table = PartialGroupTable(['e', 'g'], {})
    with pytest.raises(InputError, match='identity'):
        embed_sofic_rep({'e': Permutation([1, 0]), 'g': Permutation([1, 0])},
                        field_Q, table)


def test10_report_json(field_Q):
    _, report = embed_sofic_rep({'g1': Permutation([1, 0])}, field_Q,
                                cyclic_group_table(2))
    doc = report.to_json()
    assert doc['certified'] is True
    assert doc['per_element']['g1'] == {'hamming': '1', 'rank': '1/2',
                                        'cycles': '1/2'}
    assert doc['per_pair']['g1,g1'] == {'hamming': '0', 'rank': '0'}

from fractions import Fraction

import pytest

from rankwb.errors import InputError
from rankwb.field import FieldSpec, make_field
from rankwb.jordan import (algebraic_multiplicity, block_count_ratio,
                           distance_to_diagonalizable, jordan_profile_at,
                           jordan_tensor_blocks, rank_sequence,
                           verify_jordan_tensor)
from rankwb.matrix import Matrix, direct_sum, jordan_block, rank_distance, tensor
from rankwb.test.util import (planted_multiplicity, random_invertible,
                              random_unipotent)


def test01_rank_sequence(field_Q):
    J = jordan_block(field_Q, 1, 3)
    assert rank_sequence(J, 1) == [3, 2, 1, 0]
    assert rank_sequence(Matrix.identity(field_Q, 2), 1) == [2, 0]
    assert rank_sequence(Matrix.identity(field_Q, 2), 2) == [2, 2]


def test02_profiles(fields_all):
    F = fields_all
    A = direct_sum(jordan_block(F, 1, 3), jordan_block(F, 1, 1),
                   jordan_block(F, 2, 2))
    p = jordan_profile_at(A, 1)
    assert p.blocks == (3, 1)
    assert p.algebraic_multiplicity == 4
    assert p.geometric_multiplicity == 2
    assert p.block_ratio == Fraction(2, 6)
    assert jordan_profile_at(A, 2).blocks == (2,)
    assert jordan_profile_at(A, 5).blocks == ()


def test03_algebraic_multiplicity(fields_all):
    F = fields_all
    assert algebraic_multiplicity(Matrix.diagonal(F, [1, 1, -1]), 1) == Fraction(2, 3)
    assert algebraic_multiplicity(jordan_block(F, 1, 5), 1) == 1
    assert algebraic_multiplicity(jordan_block(F, 2, 5), 1) == 0
    A = direct_sum(jordan_block(F, 1, 4), Matrix.diagonal(F, [3, 3]))
    assert algebraic_multiplicity(A, 1) == Fraction(2, 3)
    assert algebraic_multiplicity(A, 3) == Fraction(1, 3)


def test04_planted_multiplicity(fields_exact, np_rng):
    for _ in range(10):
        n = int(np_rng.integers(1, 6))
        ones = int(np_rng.integers(0, n + 1))
        A = planted_multiplicity(fields_exact, np_rng, n, ones)
        assert algebraic_multiplicity(A, 1) == Fraction(ones, n)
        assert jordan_profile_at(A, 1).algebraic_multiplicity == ones


def test05_block_ratio_and_diagonalizable(field_Q):
    A = direct_sum(jordan_block(field_Q, 1, 3), jordan_block(field_Q, 1, 1))
    assert block_count_ratio(A) == Fraction(1, 2)
    one = Matrix.identity(field_Q, 4)
    # For unipotent matrices 1 - J(A) is the distance to the identity
    assert distance_to_diagonalizable(A, [1]) == rank_distance(A, one)
    assert distance_to_diagonalizable(Matrix.diagonal(field_Q, [1, 2]), [1, 2]) == 0


def test06_unipotent_block_ratio(fields_exact, np_rng):
    for _ in range(10):
        n = int(np_rng.integers(1, 6))
        U = random_unipotent(fields_exact, np_rng, n)
        one = Matrix.identity(fields_exact, n)
        assert 1 - block_count_ratio(U) == rank_distance(U, one)


def test07_tensor_block_formula():
    assert jordan_tensor_blocks(2, 3) == [4, 2]
    assert jordan_tensor_blocks(3, 3) == [5, 3, 1]
    assert jordan_tensor_blocks(3, 2) == [4, 2]
    assert jordan_tensor_blocks(1, 6) == [6]
    with pytest.raises(InputError):
        jordan_tensor_blocks(0, 2)


def test08_tensor_examples(field_Q):
    check = verify_jordan_tensor(1, 2, 1, 3, field_Q)
    assert check.verdict
    assert check.computed.blocks == (4, 2)
    check = verify_jordan_tensor(2, 3, '1/2', 3, field_Q)
    assert check.verdict
    assert check.computed.eigenvalue == 1
    assert check.to_json()['predicted'] == [5, 3, 1]
    with pytest.raises(InputError, match='nonzero'):
        verify_jordan_tensor(0, 2, 1, 2, field_Q)


def test09_tensor_profiles_small(fields_prime):
    # Characteristic 7 is at least s + t - 1 for every size used here
    for s in range(1, 5):
        for t in range(s, 5):
            for alpha in (1, 2, 3):
                for beta in (1, 3):
                    assert verify_jordan_tensor(alpha, s, beta, t,
                                                fields_prime).verdict


def test10_small_characteristic_warns(caplog):
    F3 = make_field(FieldSpec.prime(3))
    check = verify_jordan_tensor(1, 3, 1, 3, F3)
    assert 'characteristic 3' in caplog.text
    assert sum(check.computed.blocks) == 9


def test11_tensor_profile_matches_product(field_Q):
    A = direct_sum(jordan_block(field_Q, 1, 2), jordan_block(field_Q, 1, 1))
    T = tensor(A, A)
    # (J2 + J1) x (J2 + J1) = J2xJ2 + 2 J2xJ1 + J1xJ1
    assert jordan_profile_at(T, 1).blocks == (3, 2, 2, 1, 1)


@pytest.mark.slow
def test12_tensor_profiles_exhaustive(fields_exact):
    # F_101 has characteristic above s + t - 1 for every pair here
    for s in range(1, 9):
        for t in range(s, 9):
            for alpha in (1, 2, 3):
                for beta in (1, 2, 3):
                    check = verify_jordan_tensor(alpha, s, beta, t,
                                                 fields_exact)
                    assert check.verdict, (s, t, alpha, beta)


def _random_blocks(rng, total):
    blocks = []
    while sum(blocks) < total:
        blocks.append(int(rng.integers(1, total - sum(blocks) + 1)))
    return sorted(blocks, reverse=True)


def _profile_reconstruction(F, rng):
    planted = {}
    for lam in (1, 2, 3):
        size = int(rng.integers(0, 5))
        if size:
            planted[lam] = _random_blocks(rng, size)
    if not planted:
        planted[1] = [1]
    parts = [jordan_block(F, lam, s) for lam, blocks in planted.items()
             for s in blocks]
    A = direct_sum(*parts)
    P = random_invertible(F, rng, A.rows)
    B = P @ A @ P.inverse()
    for lam in (1, 2, 3):
        assert list(jordan_profile_at(B, lam).blocks) == planted.get(lam, [])


def test13_profile_reconstruction(fields_exact, np_rng):
    for _ in range(10):
        _profile_reconstruction(fields_exact, np_rng)


@pytest.mark.slow
def test14_profile_reconstruction_randomized(fields_exact, np_rng):
    for _ in range(200):
        _profile_reconstruction(fields_exact, np_rng)


def test15_multiplicities_sum_to_at_most_one(fields_exact, np_rng):
    F = fields_exact
    for _ in range(10):
        n = int(np_rng.integers(1, 7))
        data = F.full((n, n))
        for i in range(n):
            data[i, i] = F(int(np_rng.integers(1, 4)))
            for j in range(i + 1, n):
                data[i, j] = F.random_element(np_rng)
        P = random_invertible(F, np_rng, n)
        A = P @ Matrix(F, data) @ P.inverse()
        # Split triangular: the eigenvalues 1, 2, 3 exhaust the spectrum
        assert sum(algebraic_multiplicity(A, lam) for lam in (1, 2, 3)) == 1

    rotation = Matrix.from_rows(F, [[0, -1], [1, 0]])
    A = direct_sum(rotation, Matrix.diagonal(F, [1, 2]))
    # The rotation block has no eigenvalue among 1, 2, 3
    assert sum(algebraic_multiplicity(A, lam) for lam in (1, 2, 3)) == Fraction(1, 2)

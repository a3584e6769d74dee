from fractions import Fraction

import pytest

from rankwb.errors import FieldMismatchError, InputError
from rankwb.field import FieldSpec, make_field
from rankwb.matrix import (Matrix, change_of_field, determinant,
                           direct_finiteness_witness, direct_sum,
                           find_full_rank_minor, invertible_completion,
                           jordan_block, kernel_basis, normalized_rank, rank,
                           rank_distance, restrict_scalars, tensor,
                           tensor_power)
from rankwb.test.util import random_invertible, random_matrix


def test01_rank_examples(fields_all):
    F = fields_all
    assert rank(Matrix.identity(F, 5)) == 5
    assert rank(Matrix.zeros(F, 4, 6)) == 0
    assert rank(Matrix.from_rows(F, [[1, 2], [2, 4]])) == 1
    assert normalized_rank(Matrix.zeros(F, 0)) == 0


def test02_tensor_examples(fields_all):
    F = fields_all
    B = Matrix.from_rows(F, [[1, 2], [3, 4]])
    assert tensor(Matrix.identity(F, 2), B) == direct_sum(B, B)
    D = Matrix.diagonal(F, [1, 0])
    assert rank(tensor(D, D)) == 1
    J = jordan_block(F, 1, 2)
    assert tensor(J, J).shape == (4, 4)
    assert rank(tensor(J, J)) == 4
    assert tensor_power(J, 3).rows == 8


def test03_tensor_block_order(field_Q):
    A = Matrix.from_rows(field_Q, [[0, 1], [0, 0]])
    B = Matrix.from_rows(field_Q, [[1, 2], [3, 4]])
    assert tensor(A, B).to_rows() == [[0, 0, 1, 2], [0, 0, 3, 4],
                                      [0, 0, 0, 0], [0, 0, 0, 0]]


def test04_direct_sum_examples(fields_all):
    F = fields_all
    S = direct_sum(Matrix.identity(F, 2), Matrix.zeros(F, 3))
    assert rank(S) == 2
    assert normalized_rank(S) == Fraction(2, 5)
    A = Matrix.from_rows(F, [[1, 2], [3, 4]])
    assert direct_sum(A, Matrix.zeros(F, 0)) == A
    assert rank(direct_sum(jordan_block(F, 1, 2), jordan_block(F, 1, 3))) == 5


def test05_invertible_completion_examples(fields_all):
    F = fields_all
    A = Matrix.diagonal(F, [1, 0])
    C = invertible_completion(A)
    assert C == Matrix.identity(F, 2)
    assert rank_distance(A, C) == Fraction(1, 2)

    B = Matrix.from_rows(F, [[1, 2], [3, 5]])
    assert invertible_completion(B) == B

    Z = Matrix.zeros(F, 3)
    C = invertible_completion(Z)
    assert C.is_invertible()
    assert rank(C - Z) == 3


def test06_rank_distance_examples(field_Q):
    I2 = Matrix.identity(field_Q, 2)
    assert rank_distance(I2, I2) == 0
    assert rank_distance(I2, Matrix.diagonal(field_Q, [1, 2])) == Fraction(1, 2)
    shear = Matrix.from_rows(field_Q, [[1, 1], [0, 1]])
    assert rank_distance(shear, I2) == Fraction(1, 2)
    with pytest.raises(InputError, match='shape mismatch'):
        rank_distance(I2, Matrix.identity(field_Q, 3))


def test07_field_mismatch(field_Q, field_F101):
    with pytest.raises(FieldMismatchError):
        Matrix.identity(field_Q, 2) + Matrix.identity(field_F101, 2)
    with pytest.raises(FieldMismatchError):
        tensor(Matrix.identity(field_Q, 2), Matrix.identity(field_F101, 2))


def test08_kernel_examples(fields_all):
    F = fields_all
    assert kernel_basis(Matrix.identity(F, 3)).cols == 0
    assert kernel_basis(Matrix.zeros(F, 2)).cols == 2
    M = Matrix.from_rows(F, [[1, 2], [2, 4]])
    K = kernel_basis(M)
    assert K.shape == (2, 1)
    assert (M @ K).is_zero()
    # Proportional to (2, -1)
    assert K[0, 0] == F(-2) * K[1, 0]


def test09_full_rank_minor(fields_all):
    F = fields_all
    w = find_full_rank_minor(Matrix.diagonal(F, [1, 0]), 1)
    assert (w.rows, w.cols, w.det) == ((0,), (0,), F.one)
    w = find_full_rank_minor(Matrix.identity(F, 3), 3)
    assert w.rows == (0, 1, 2) and w.det == F.one
    w = find_full_rank_minor(Matrix.from_rows(F, [[2, 4], [1, 2]]), 1)
    assert (w.rows, w.cols) == ((0,), (0,))
    assert w.det == F(2)
    with pytest.raises(InputError):
        find_full_rank_minor(Matrix.diagonal(F, [1, 0]), 2)


def test10_determinant_and_inverse(fields_all):
    F = fields_all
    A = Matrix.from_rows(F, [[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert determinant(A) == F(18)
    assert A @ A.inverse() == Matrix.identity(F, 3)
    with pytest.raises(InputError, match='singular'):
        Matrix.from_rows(F, [[1, 2], [2, 4]]).inverse()
    assert determinant(Matrix.from_rows(F, [[0, 1], [1, 0]])) == F(-1)


def test11_rational_determinant(field_Q):
    A = Matrix.from_rows(field_Q, [['1/2', '1/3'], ['1/4', '1/5']])
    assert determinant(A) == Fraction(1, 10) - Fraction(1, 12)


def test12_power(field_Q):
    J = jordan_block(field_Q, 1, 2)
    assert J.power(5).to_rows() == [[1, 5], [0, 1]]
    assert J.power(-2).to_rows() == [[1, -2], [0, 1]]
    assert J.power(0) == Matrix.identity(field_Q, 2)


def test13_json(fields_all):
    F = fields_all
    A = Matrix.from_rows(F, [[1, '1/2'], [0, -1]])
    doc = A.to_json()
    assert doc['rows'] == 2 and doc['cols'] == 2
    assert Matrix.from_json(doc) == A
    with pytest.raises(InputError):
        Matrix.from_json({'rows': 2, 'cols': 2, 'entries': [['1']]}, F)


def test14_rational_json_strings(field_Q):
    A = Matrix.from_rows(field_Q, [['1/2', 0]])
    assert A.to_json()['entries'] == [['1/2', '0']]


def test15_change_of_field(field_Q):
    F7 = make_field(FieldSpec.prime(7))
    A = Matrix.from_rows(field_Q, [['1/2', 3], [0, 8]])
    assert change_of_field(A, F7).to_rows() == [[4, 3], [0, 1]]
    with pytest.raises(InputError):
        change_of_field(Matrix.from_rows(field_Q, [['1/7']]), F7)


def test16_restrict_scalars(field_NF_i):
    K = field_NF_i
    A = Matrix.from_rows(K, [[[0, 1], 1], [0, [1, 1]]])
    R = restrict_scalars(A)
    assert R.shape == (4, 4)
    assert normalized_rank(R) == normalized_rank(A)
    S = Matrix.from_rows(K, [[[1, 1], [2, 2]], [[1, 0], [2, 0]]])
    assert rank(S) == 1
    assert rank(restrict_scalars(S)) == 2


def test17_direct_finiteness(fields_exact, np_rng):
    F = fields_exact
    for _ in range(20):
        A = random_matrix(F, np_rng, 4, rank=int(np_rng.integers(0, 5)))
        B = random_matrix(F, np_rng, 4)
        check = direct_finiteness_witness(A, B)
        assert check.consistent


def _rank_laws(F, rng, n, m):
    A = random_matrix(F, rng, n, rank=int(rng.integers(0, n + 1)))
    B = random_matrix(F, rng, n, rank=int(rng.integers(0, n + 1)))
    C = random_matrix(F, rng, m, rank=int(rng.integers(0, m + 1)))
    assert rank(A + B) <= rank(A) + rank(B)
    assert rank(A @ B) <= min(rank(A), rank(B))
    assert rank(direct_sum(A, C)) == rank(A) + rank(C)
    assert normalized_rank(direct_sum(A, C)) == \
        (n * normalized_rank(A) + m * normalized_rank(C)) / (n + m)
    assert rank(tensor(A, C)) == rank(A) * rank(C)
    T = invertible_completion(A)
    assert T.is_invertible()
    assert rank_distance(A, T) == 1 - normalized_rank(A)
    one = Matrix.identity(F, n)
    assert rank(one - A @ B) == rank(one - B @ A)
    U, V = random_invertible(F, rng, n), random_invertible(F, rng, n)
    assert rank_distance(U @ A @ V, U @ B @ V) == rank_distance(A, B)


def test18_rank_laws_quick(fields_all, np_rng):
    for _ in range(15):
        _rank_laws(fields_all, np_rng, int(np_rng.integers(1, 5)),
                   int(np_rng.integers(1, 4)))


@pytest.mark.slow
def test19_rank_laws_randomized(fields_exact, np_rng):
    for _ in range(500):
        _rank_laws(fields_exact, np_rng, int(np_rng.integers(1, 9)),
                   int(np_rng.integers(1, 5)))


def test20_rank_of_planted_rank(fields_exact, np_rng):
    for r in range(4):
        A = random_matrix(fields_exact, np_rng, 5, 6, rank=r)
        assert rank(A) <= r
        assert rank(A.transpose()) == rank(A)


def test21_restrict_scalars_examples(field_NF_i):
    K = field_NF_i
    x = K.generator()
    assert restrict_scalars(Matrix.from_rows(K, [[x]])).to_rows() == \
        [[0, -1], [1, 0]]
    assert restrict_scalars(Matrix.zeros(K, 3)).is_zero()
    D = restrict_scalars(Matrix.diagonal(K, [x, 0]))
    assert D.shape == (4, 4)
    assert normalized_rank(D) == Fraction(1, 2)
    with pytest.raises(InputError, match='square'):
        restrict_scalars(Matrix.from_rows(K, [[[0, 1], 1]]))
    with pytest.raises(InputError, match='number field'):
        restrict_scalars(Matrix.identity(make_field(FieldSpec.prime(7)), 2))


def test22_restrict_scalars_real_fields():
    K2 = make_field(FieldSpec.numberfield([-2, 0, 1]))
    R = restrict_scalars(Matrix.from_rows(K2, [[K2.generator()]]))
    assert R.to_rows() == [[0, 2], [1, 0]]
    assert R @ R == Matrix.scalar(R.field, 2, 2)

    K3 = make_field(FieldSpec.numberfield([-2, 0, 0, 1]))
    C = restrict_scalars(Matrix.from_rows(K3, [[K3.generator()]]))
    assert C.to_rows() == [[0, 0, 2], [1, 0, 0], [0, 1, 0]]
    assert C.power(3) == Matrix.scalar(C.field, 2, 3)


@pytest.mark.parametrize('minpoly', [[1, 0, 1], [-2, 0, 1], [-2, 0, 0, 1]])
def test23_restrict_scalars_ring_homomorphism(minpoly, np_rng):
    K = make_field(FieldSpec.numberfield(minpoly))
    for _ in range(10):
        n = int(np_rng.integers(1, 4))
        A = random_matrix(K, np_rng, n)
        B = random_matrix(K, np_rng, n)
        assert restrict_scalars(A @ B) == restrict_scalars(A) @ restrict_scalars(B)
        assert restrict_scalars(A + B) == restrict_scalars(A) + restrict_scalars(B)
        assert restrict_scalars(Matrix.identity(K, n)).is_identity()
        assert rank(restrict_scalars(A)) == K.degree * rank(A)

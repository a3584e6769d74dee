from fractions import Fraction

import pytest

from rankwb import io
from rankwb.amplify import (amplification_bound_sequence, boost_separation,
                            f_iterate, tensor_elimination_witness,
                            tensor_square_iterate, two_squares,
                            weighted_combine)
from rankwb.certify import AlmostRep, group_algebra_apply
from rankwb.constructions import cyclic_group_table
from rankwb.errors import BudgetExceeded, InputError
from rankwb.field import FieldSpec, make_field
from rankwb.jordan import algebraic_multiplicity, block_count_ratio
from rankwb.matrix import Matrix, normalized_rank, tensor
from rankwb.test.util import planted_multiplicity, random_unipotent


def test01_contraction_map():
    assert two_squares(Fraction(3, 4)) == Fraction(5, 8)
    assert two_squares(Fraction(1, 2)) == Fraction(1, 2)
    assert f_iterate(Fraction(3, 4), 2) == Fraction(17, 32)
    assert f_iterate(1, 5) == 1
    assert amplification_bound_sequence(Fraction(3, 4), 3) == \
        [Fraction(3, 4), Fraction(5, 8), Fraction(17, 32)]
    with pytest.raises(InputError):
        f_iterate(Fraction(1, 4), 1)
    with pytest.raises(InputError):
        f_iterate(Fraction(3, 4), -1)


def test02_iterates_decrease():
    x = Fraction(99, 100)
    for _ in range(6):
        y = two_squares(x)
        assert Fraction(1, 2) < y < x
        x = y


def test03_reflection_trace(fields_exact):
    A = Matrix.diagonal(fields_exact, [1, 1, -1])
    trace = tensor_square_iterate(A, 3)
    assert trace.dims == [3, 9, 81]
    assert trace.m1_values == [Fraction(2, 3), Fraction(5, 9), Fraction(41, 81)]
    assert trace.constant == Fraction(5, 6)
    assert trace.holds
    assert trace.j_values == []


def test04_unipotent_trace(field_Q):
    shear = Matrix.from_rows(field_Q, [[1, 1], [0, 1]])
    trace = tensor_square_iterate(shear, 2)
    assert trace.m1_values == [1, 1]
    assert trace.j_values == [Fraction(1, 2), Fraction(1, 2)]
    assert trace.constant == Fraction(3, 4)
    assert trace.f_bounds == [Fraction(3, 4), Fraction(5, 8)]
    assert trace.holds
    doc = trace.to_json()
    assert doc['c'] == '3/4' and doc['holds'] is True


def test05_trace_errors(field_Q):
    A = Matrix.diagonal(field_Q, [1, 1, -1])
    with pytest.raises(BudgetExceeded):
        tensor_square_iterate(A, 4, budget=100)
    with pytest.raises(InputError, match='singular'):
        tensor_square_iterate(Matrix.diagonal(field_Q, [1, 0]), 2)
    with pytest.raises(InputError, match='bound constant'):
        tensor_square_iterate(A, 2, c=Fraction(1, 2))
    trace = tensor_square_iterate(A, 2, c=Fraction(9, 10))
    assert trace.constant == Fraction(9, 10)


def _multiplicity_contracts(F, rng, n):
    B = planted_multiplicity(F, rng, n, int(rng.integers(1, n + 1)))
    m1 = algebraic_multiplicity(B, 1)
    assert algebraic_multiplicity(tensor(B, B), 1) <= two_squares(m1)


def _block_ratio_contracts(F, rng, n):
    U = random_unipotent(F, rng, n)
    j = block_count_ratio(U)
    assert block_count_ratio(tensor(U, U)) <= min(j, two_squares(j))


def test06_random_contraction(fields_exact, np_rng):
    for _ in range(10):
        n = int(np_rng.integers(2, 5))
        _multiplicity_contracts(fields_exact, np_rng, n)
        _block_ratio_contracts(fields_exact, np_rng, n)


def test07_boost_cyclic(field_Q):
    rep = io.load_rep('z3', field_Q)
    boosted, report = boost_separation(rep, 3)
    assert boosted.dim == 162 and report.dim == 162
    g1 = report.per_element['g1']
    assert g1.rho == Fraction(2, 3)
    assert g1.constant == Fraction(2, 3)
    assert g1.bound == Fraction(20, 81)
    assert report.min_separation == Fraction(2, 3)
    assert report.defect_out == 0
    assert report.holds


def test08_boost_unipotent(field_Q):
    rep = io.load_rep('unipotent_z', field_Q)
    _, report = boost_separation(rep, 2)
    e = report.per_element['1']
    assert e.branch == 'J'
    assert e.rho == Fraction(1, 2)
    assert e.bound == Fraction(3, 16)
    assert report.min_separation >= Fraction(1, 4)
    assert report.holds


def test09_boost_corpus(field_Q):
    for name in ('z2', 'sign', 'doubling'):
        _, report = boost_separation(io.load_rep(name, field_Q), 2)
        assert report.holds, name
        assert report.defect_out <= report.defect_bound


def test10_boost_degenerate(field_Q, caplog):
    I2 = Matrix.identity(field_Q, 2)
    rep = AlmostRep(cyclic_group_table(2), {'e': I2, 'g1': I2})
    _, report = boost_separation(rep, 2)
    assert report.degenerate == ('g1',)
    assert report.per_element['g1'].rho == 0
    assert 'separation stays 0' in caplog.text


def test11_boost_budget(field_Q):
    with pytest.raises(BudgetExceeded) as e:
        boost_separation(io.load_rep('z3', field_Q), 3, budget=100)
    assert e.value.size == 162


def test12_weighted_combine_sign(field_Q):
    rep = io.load_rep('sign', field_Q)
    f = {'e': 1, 'g1': -1}
    thetas = [group_algebra_apply(rep, f, i) for i in (1, 2)]
    report = weighted_combine(thetas, 0)
    assert report.dims == [2, 4]
    assert report.weights == [4, 1]
    assert report.matrix.rows == 16
    assert report.block_rhos == [Fraction(1, 2), Fraction(1, 2)]
    assert report.rho == Fraction(3, 8)
    assert report.holds
    assert not report.vanishes


def test13_weighted_combine_doubling(field_Q):
    rep = io.load_rep('doubling', field_Q)
    f = {'1': 1, '0': -2}
    assert normalized_rank(group_algebra_apply(rep, f, 1)) == 0
    assert normalized_rank(group_algebra_apply(rep, f, 2)) == 1
    # Depth one alone cannot see f
    report = weighted_combine([group_algebra_apply(rep, f, 1)], 0)
    assert report.vanishes and report.components_vanish
    report = weighted_combine([group_algebra_apply(rep, f, i) for i in (1, 2)], 0)
    assert report.rho == Fraction(1, 4)


def test14_weighted_combine_errors(field_Q):
    with pytest.raises(InputError):
        weighted_combine([], 0)
    with pytest.raises(BudgetExceeded):
        weighted_combine([Matrix.identity(field_Q, 3)] * 4, 1, budget=40)


def test15_elimination_witness():
    F7 = make_field(FieldSpec.prime(7))
    mats = [Matrix.diagonal(F7, d) for d in ([1, 1], [1, 2], [1, 4])]
    witness = tensor_elimination_witness([1, 1, 1], mats)
    assert witness.factors == [Fraction(1, 2), Fraction(1, 2)]
    assert witness.rho == Fraction(1, 4)
    assert witness.holds and not witness.degenerate


def test16_elimination_witness_rational(field_Q, caplog):
    I2 = Matrix.identity(field_Q, 2)
    D = Matrix.diagonal(field_Q, [1, -1])
    witness = tensor_elimination_witness([2, -1], [I2, D])
    assert witness.rho == Fraction(1, 2)
    witness = tensor_elimination_witness([1, 1], [I2, I2])
    assert witness.degenerate and witness.rho == 0
    assert 'repeated' in caplog.text
    with pytest.raises(InputError):
        tensor_elimination_witness([1], [I2])
    with pytest.raises(InputError, match='nonzero'):
        tensor_elimination_witness([0, 1], [I2, D])


@pytest.mark.slow
def test17_random_contraction_randomized(fields_exact, np_rng):
    for _ in range(200):
        _multiplicity_contracts(fields_exact, np_rng,
                                int(np_rng.integers(1, 9)))
    for _ in range(200):
        _block_ratio_contracts(fields_exact, np_rng,
                               int(np_rng.integers(1, 13)))


def test18_elimination_repeats_after_first(field_Q, caplog):
    I2 = Matrix.identity(field_Q, 2)
    D = Matrix.diagonal(field_Q, [1, -1])
    witness = tensor_elimination_witness([1, 1, 1], [I2, D, D])
    assert not witness.degenerate
    assert witness.rho == Fraction(1, 4)
    assert 'repeated' not in caplog.text
    witness = tensor_elimination_witness([1, 1, 1], [D, I2, D])
    assert witness.degenerate and witness.rho == 0

import json
import logging

import pytest

from rankwb import demo
from rankwb.cli import SUBCOMMANDS, build_parser, execute, run
from rankwb.test.util import tmpfile


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture(autouse=True)
def no_budget_env(monkeypatch):
    monkeypatch.delenv('RANKWB_BUDGET', raising=False)


def test01_parser_knows_every_subcommand():
    parser = build_parser()
    for name in SUBCOMMANDS:
        assert parser.parse_args([name] + {
            'certify': ['--rep', 'z3'], 'align': ['--rep', 'z3', '--epsilon', '1'],
            'combine': ['--rep', 'z3'], 'reduce': ['--rep', 'z3'],
            'witness': ['--n', '3'], 'extend': ['--data', 'x']
        }.get(name, [])).command == name


def test02_certify_rep(capsys):
    code, doc = _run(capsys, 'certify', '--rep', 'z3')
    assert code == 0
    assert doc['max_defect'] == '0'
    assert doc['min_separation'] == '2/3'
    assert doc['verdict'] is True
    assert doc['distances']['min_distinct'] == '2/3'


def test03_certify_epsilon(capsys):
    code, doc = _run(capsys, 'certify', '--rep', 'sign', '--epsilon', '0')
    assert code == 1
    assert doc['verdict'] is False
    code, _ = _run(capsys, 'certify', '--rep', 'sign', '--epsilon', '1/8')
    assert code == 0


def test04_certify_patch(capsys):
    code, doc = _run(capsys, 'certify', '--patch', 'truncated_poly')
    assert code == 0
    assert doc['deficiency'] == '0'
    assert doc['rho']['x'] == '7/8'
    assert doc['epsilon'] == '1/4'


def test05_witness(capsys):
    code, doc = _run(capsys, 'witness', '--n', '3', '--l', '1')
    assert code == 0
    assert doc['min_distance'] == '2/3'
    code, doc = _run(capsys, 'witness', '--n', '30', '--no-rank-check')
    assert code == 0
    assert doc['l'] == 3
    assert doc['min_distance'] == '3/5'


def test06_reduce(capsys):
    code, doc = _run(capsys, 'reduce', '--rep', 'sign')
    assert code == 0
    assert doc['selection']['p'] == 3
    assert doc['selection']['excluded'] == [2]
    assert doc['certificate']['valid'] is True

    code, doc = _run(capsys, 'reduce', '--rep', 'sign', '--prime', '2')
    assert code == 1
    assert doc['error']['type'] == 'CertificationError'
    assert doc['report']['ranks']['g1'] == {'before': 1, 'after': 0}


def test07_amplify(capsys):
    code, doc = _run(capsys, 'amplify', '--matrix', 'matrices', '--name',
                     'reflection', '--level', '2')
    assert code == 0
    assert doc['m1_values'] == ['2/3', '5/9']
    code, doc = _run(capsys, 'amplify', '--rep', 'unipotent_z')
    assert code == 0
    assert doc['min_separation'] == '1/2'
    code, doc = _run(capsys, '--budget', '100', 'amplify', '--rep', 'z3',
                     '--level', '3')
    assert code == 2
    assert doc['error']['type'] == 'BudgetExceeded'


def test08_combine(capsys):
    code, doc = _run(capsys, 'combine', '--rep', 'sign', '--term', 'e', '1',
                     '--term', 'g1', '-1')
    assert code == 0
    assert doc['rho'] == '3/8'
    assert doc['epsilon'] == '0'
    code, doc = _run(capsys, 'combine', '--rep', 'sign', '--term', 'e', '1',
                     '--term', 'g1', '1', '--eliminate')
    assert code == 0
    assert doc['rho'] == '1/2'
    code, doc = _run(capsys, 'combine', '--rep', 'sign')
    assert code == 2


def test09_jordan(capsys):
    code, doc = _run(capsys, 'jordan', '--tensor', '2', '3')
    assert code == 0
    assert doc['computed']['blocks'] == [4, 2]
    code, doc = _run(capsys, 'jordan', '--matrix', 'matrices', '--name', 'shear')
    assert code == 0
    assert doc['blocks'] == [2]
    assert doc['algebraic_multiplicity'] == '1'
    assert doc['block_ratio'] == '1/2'


def test10_extend_and_regular(capsys):
    code, doc = _run(capsys, 'extend', '--data', 'z2_extension')
    assert code == 0
    assert doc['holds'] is True
    assert doc['defect'] == '0'
    code, doc = _run(capsys, 'regular', '--cyclic', '3')
    assert code == 0
    assert doc['defect']['min_separation'] == '2/3'


def test11_align(capsys):
    code, doc = _run(capsys, 'align', '--rep', 'sign', '--epsilon', '1/2')
    assert code == 0
    assert doc['kernel_dim'] == 2


def test12_input_errors(capsys):
    for argv in (['frobnicate'], [], ['certify'], ['certify', '--rep', 'nope'],
                 ['--field', 'R', 'regular', '--cyclic', '2'],
                 ['certify', '--rep', 'z3', '--epsilon', 'x']):
        code, doc = _run(capsys, *argv)
        assert code == 2, argv
        assert doc['error']['type'] == 'InputError'


def test13_output_file(capsys, tmpfile):
    path = tmpfile('.json')
    code = run(['--output', path, 'regular', '--cyclic', '2'])
    out = capsys.readouterr().out
    assert code == 0
    with open(path) as f:
        assert f.read() == out


def test14_field_flag(capsys):
    code, doc = _run(capsys, '--field', 'Fp:101', 'regular', '--cyclic', '2')
    assert code == 0
    assert doc['rep']['field'] == {'kind': 'Fp', 'p': 101}


def test15_verbosity():
    code, _, ws = execute(['-vv', 'regular', '--cyclic', '2'])
    assert code == 0
    assert ws is not None
    assert logging.getLogger('rankwb').level == logging.DEBUG


@pytest.mark.slow
def test16_demo_with_small_budget(capsys):
    code, doc = _run(capsys, '--budget', '64', 'demo')
    assert code == 0
    status = {row['criterion']: row['status'] for row in doc['rows']}
    assert status[4] == 'SKIP' and status[5] == 'SKIP'
    assert all(s == 'PASS' for c, s in status.items() if c not in (4, 5))
    assert doc['passed'] is True


@pytest.mark.slow
def test17_demo(capsys):
    code, doc = _run(capsys, 'demo')
    assert code == 0
    assert [row['status'] for row in doc['rows']] == ['PASS'] * 10
    for row in doc['rows'][:4]:
        assert 'smoke run' in row['detail']


def test18_demo_smoke_rows_labelled(field_Q):
    rng = demo.default_rng(demo.RANDOM_SEED)
    rows = [demo._criterion_rank_laws(field_Q, rng),
            demo._criterion_permutations(field_Q, rng),
            demo._criterion_amplification(field_Q, rng, None)]
    for row in rows:
        assert row['status'] == 'PASS'
        assert row['detail'].count('smoke run') == 1
    assert '40 random instances' in rows[0]['detail']
    assert '200 random permutations' in rows[1]['detail']
    assert '20 random instances' in rows[2]['detail']

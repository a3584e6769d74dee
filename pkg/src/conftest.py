# Shared fixtures of the rankwb test suite. Per-field fixtures are generated
# below and registered through globals(), grouped fixtures parametrize a test
# over several fields at once.

import logging

import pytest

from rankwb.config import RANDOM_SEED
from rankwb.field import FieldSpec, make_field

FIELDS = {
    'Q': FieldSpec.rationals(),
    'F101': FieldSpec.prime(101),
    'F7': FieldSpec.prime(7),
    'NF_i': FieldSpec.numberfield([1, 0, 1]),
}


@pytest.fixture
def np_rng():
    import numpy as np
    return np.random.default_rng(seed=RANDOM_SEED)


@pytest.fixture(autouse=True)
def rankwb_log_level():
    # cli.execute() changes the package log level
    logger = logging.getLogger('rankwb')
    level = logger.level
    yield
    logger.setLevel(level)


def generate_fixture(name, spec):
    @pytest.fixture()
    def fixture():
        return make_field(spec)
    globals()['field_' + name] = fixture


for name, spec in FIELDS.items():
    generate_fixture(name, spec)
del generate_fixture


def generate_fixture_group(name, names):
    @pytest.fixture(params=names)
    def fixture(request):
        return make_field(FIELDS[request.param])
    globals()['fields_' + name] = fixture


field_groups = {
    'exact': ['Q', 'F101'],
    'all': ['Q', 'F101', 'NF_i'],
    'prime': ['F7', 'F101'],
    'every': ['Q', 'F7', 'F101', 'NF_i'],
}

for name, names in field_groups.items():
    generate_fixture_group(name, names)
del generate_fixture_group


def pytest_configure(config):
    markexpr = config.getoption("markexpr", 'False')
    if not 'not slow' in markexpr:
        print("""\033[93mRunning the full test suite. To skip slow tests, please run 'pytest -m "not slow"' \033[0m""")

    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with -m 'not slow')"
    )

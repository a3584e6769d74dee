"""
Miscellaneous utility functions for tests (common fixtures, resource lookup,
random instances).
"""

import os

import pytest

from rankwb.sampling import (planted_multiplicity, random_invertible,
                             random_matrix, random_permutation,
                             random_unipotent)


def find_resource(fname):
    path = os.path.dirname(os.path.realpath(__file__))
    while True:
        full = os.path.join(path, fname)
        if os.path.exists(full):
            return full
        if path == '' or path == '/':
            raise Exception("find_resource(): could not find \"%s\"" % fname)
        path = os.path.dirname(path)


@pytest.fixture
def tmpfile(request, tmpdir):
    """Fixture to create a temporary file"""
    counter = [0]

    def tmpfile_gen(suffix=''):
        counter[0] += 1
        return str(tmpdir.join('%s_%i%s' % (request.node.name, counter[0],
                                            suffix)))
    return tmpfile_gen


def corpus_file(name):
    return find_resource(os.path.join('data', 'corpus', name + '.json'))

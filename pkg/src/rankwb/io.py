"""
Reading workbench objects from JSON files and writing deterministic reports.

Documents may omit their field, in which case the field passed by the caller
(ultimately ``--field`` or :py:data:`rankwb.config.DEFAULT_FIELD`) is used. A
bare name such as ``z3`` or ``z3.json`` that does not exist as a path is
looked up in the bundled corpus.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from .certify import AlgebraPatch, AlmostRep, PartialGroupTable
from .config import DEFAULT_FIELD
from .errors import InputError
from .field import Field, FieldSpec, NumberFieldElement
from .matrix import Matrix


def corpus_dir() -> str:
    path = os.path.dirname(os.path.realpath(__file__))
    return os.path.join(path, 'data', 'corpus')


def corpus_names():
    """Names of the bundled corpus documents, sorted."""
    return sorted(f[:-5] for f in os.listdir(corpus_dir()) if f.endswith('.json'))


def resolve_path(name: str) -> str:
    if os.path.exists(name):
        return name
    fname = name if name.endswith('.json') else name + '.json'
    full = os.path.join(corpus_dir(), fname)
    if os.path.exists(full):
        return full
    raise InputError('resolve_path(): could not find "%s" (neither a file nor '
                     'a corpus entry)' % name)


def load_json(name: str):
    path = resolve_path(name)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError('load_json(): %s is not valid JSON (%s)'
                         % (path, e)) from None
    except OSError as e:
        raise InputError('load_json(): cannot read %s (%s)'
                         % (path, e.strerror)) from None


def _field_of(obj, field):
    if isinstance(obj, dict) and 'field' in obj:
        return obj['field']
    return DEFAULT_FIELD if field is None else field


def table_from_json(obj) -> PartialGroupTable:
    return PartialGroupTable.from_json(obj)


def rep_from_json(obj, field=None) -> AlmostRep:
    return AlmostRep.from_json(obj, _field_of(obj, field))


def patch_from_json(obj, field=None):
    """
    Decode an algebra patch document. Besides the :py:class:`AlgebraPatch`
    entries (``basis``, ``structure``, ``unit``) it may carry a Følner window
    ``window`` and the left multiplication rules ``action`` (see
    :py:func:`rankwb.constructions.folner_left_mult_rep`). The shorthand
    ``{"generator": "truncated_polynomial", "k": k, "degree": d}`` is
    expanded by :py:func:`rankwb.constructions.truncated_polynomial_folner`.

    Returns ``(patch, window, action)``; the last two are ``None`` when
    absent.
    """
    from .constructions import truncated_polynomial_folner
    if not isinstance(obj, dict):
        raise InputError('patch_from_json(): expected an object')
    field = _field_of(obj, field)
    if obj.get('generator') == 'truncated_polynomial':
        try:
            return truncated_polynomial_folner(int(obj['k']),
                                               int(obj.get('degree', 1)), field)
        except (KeyError, TypeError, ValueError):
            raise InputError('patch_from_json(): malformed generator %r'
                             % (obj,)) from None
    if 'basis' not in obj:
        raise InputError('patch_from_json(): missing entry "basis"')
    patch = AlgebraPatch.from_json(obj, field)
    action = obj.get('action')
    if action is not None:
        action = {a: {s: {t: patch.field.parse(c) for t, c in coords.items()}
                      for s, coords in rules.items()}
                  for a, rules in action.items()}
    return patch, obj.get('window'), action


def matrices_from_json(obj, field=None):
    """
    A single matrix document, or ``{"matrices": {name: matrix, ...}}``.
    Returns a name to :py:class:`Matrix` dictionary (a single matrix is named
    ``"A"``).
    """
    field = _field_of(obj, field)
    if isinstance(obj, dict) and 'matrices' in obj and 'table' not in obj:
        return {name: Matrix.from_json(m, field)
                for name, m in obj['matrices'].items()}
    return {'A': Matrix.from_json(obj, field)}


def load_rep(name: str, field=None) -> AlmostRep:
    return rep_from_json(load_json(name), field)


def load_matrix(name: str, field=None, key: str = None) -> Matrix:
    mats = matrices_from_json(load_json(name), field)
    if key is None:
        if len(mats) != 1:
            raise InputError('load_matrix(): %s holds %i matrices %s, pick one '
                             'by name' % (name, len(mats), sorted(mats)))
        return next(iter(mats.values()))
    if key not in mats:
        raise InputError('load_matrix(): %s has no matrix "%s" (available: %s)'
                         % (name, key, ', '.join(sorted(mats))))
    return mats[key]


def load_extension(name: str, field=None):
    from .constructions import ExtensionData
    obj = load_json(name)
    return ExtensionData.from_json(obj, _field_of(obj, field))


def to_jsonable(obj):
    """
    Recursively convert report objects to plain JSON values: rationals become
    canonical ``"a/b"`` strings, objects with a ``to_json`` method are asked
    for their document and tuple keys are joined with commas.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (Field, FieldSpec)):
        return str(obj)
    if isinstance(obj, NumberFieldElement):
        return [str(c) for c in obj.coeffs]
    if hasattr(obj, 'to_json'):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {(','.join(map(str, k)) if isinstance(k, tuple) else str(k)):
                to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, 'item'):
        return to_jsonable(obj.item())
    raise InputError('to_jsonable(): cannot serialize %s' % type(obj).__name__)


def dumps(doc) -> str:
    """Deterministic rendering: sorted keys, two space indent, UTF-8 text."""
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2,
                      ensure_ascii=False)


def write_report(doc, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(doc))
        f.write('\n')

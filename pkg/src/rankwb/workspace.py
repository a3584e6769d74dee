from __future__ import annotations

import logging
from typing import Dict

from . import io
from .config import DEFAULT_FIELD, size_budget
from .errors import InputError
from .field import Field, parse_field

logger = logging.getLogger(__name__)


class Workspace:
    """
    Named objects loaded for one run together with its configuration.

    Parameter ``budget`` (``int`` or ``None``):
        Size budget override (``--budget``); resolved through
        :py:func:`rankwb.config.size_budget`.

    Parameter ``field`` (``str``, ``dict`` or ``None``):
        Field used for documents that do not name one.

    Parameter ``output`` (``str`` or ``None``):
        Path that receives a copy of the report.

    Every object passes the invariants of its type when it is loaded; names
    are unique within a workspace.
    """

    def __init__(self, budget=None, field=None, output=None):
        self.budget = size_budget(budget)
        self.field: Field = parse_field(DEFAULT_FIELD if field is None else field)
        self.output = output
        self.objects: Dict[str, object] = {}

    def add(self, name: str, obj):
        if name in self.objects:
            raise InputError('Workspace.add(): an object named "%s" is already '
                             'loaded' % name)
        self.objects[name] = obj
        logger.debug('Workspace.add(): %s -> %s', name, type(obj).__name__)
        return obj

    def __getitem__(self, name: str):
        try:
            return self.objects[name]
        except KeyError:
            raise InputError('Workspace: no object named "%s"' % name) from None

    def __contains__(self, name: str):
        return name in self.objects

    def load_rep(self, path: str, name: str = None):
        return self.add(name or path, io.load_rep(path, self.field))

    def load_table(self, path: str, name: str = None):
        return self.add(name or path, io.table_from_json(io.load_json(path)))

    def load_matrix(self, path: str, key: str = None, name: str = None):
        M = io.load_matrix(path, self.field, key)
        return self.add(name or (path if key is None else '%s:%s' % (path, key)), M)

    def load_patch(self, path: str, name: str = None):
        return self.add(name or path, io.patch_from_json(io.load_json(path),
                                                         self.field))

    def load_extension(self, path: str, name: str = None):
        return self.add(name or path, io.load_extension(path, self.field))

    def emit(self, doc) -> str:
        """Render ``doc`` and copy it to the output path when one is set."""
        text = io.dumps(doc)
        if self.output:
            io.write_report(doc, self.output)
        return text

# This file is part of voa_pseudotrace.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Provide a lookup table for versioned result-record schemas.
"""

import os

from .schema import RECORD_KINDS

__all__ = ["SchemaRegistry"]


class SchemaRegistry:
    """A registry for result-record schemas.

    Each schema is registered under a record kind and a version, and is
    given an id derived from its canonical form. It can then be retrieved
    by id or by ``(kind, version)``.
    """
    def __init__(self):
        self._key_to_id = {}
        self._id_to_schema = {}

    def register_schema(self, schema, version, kind=None):
        """Register a schema.

        A schema with the same kind and version replaces the old one under
        that key; the old one stays reachable by id.

        Parameters
        ----------
        schema : `voa.pseudotrace.Schema`
            Schema to register.
        version : `str`
            Version, by convention ``MAJOR.MINOR``.
        kind : `str`, optional
            Record kind; taken from the schema name if omitted.

        Returns
        -------
        schema_id : `int`
            The id allocated to the schema.
        """
        kind = kind or schema.kind
        schema_id = schema.get_schema_id()
        self._key_to_id[(kind, version)] = schema_id
        self._id_to_schema[schema_id] = schema
        return schema_id

    def get_by_id(self, schema_id):
        """Return the schema with the given id.

        Raises
        ------
        KeyError
            Raised if no schema has that id.
        """
        return self._id_to_schema[schema_id]

    def get_by_version(self, kind, version):
        """Return the schema registered for ``kind`` at ``version``.

        Raises
        ------
        KeyError
            Raised if nothing is registered under that key.
        """
        return self._id_to_schema[self._key_to_id[(kind, version)]]

    @property
    def known_versions(self):
        """Set of versions with at least one registered schema."""
        return {version for _, version in self._key_to_id}

    @property
    def known_kinds(self):
        return {kind for kind, _ in self._key_to_id}

    @property
    def known_ids(self):
        return set(self._id_to_schema)

    @classmethod
    def from_filesystem(cls, root=None, kinds=RECORD_KINDS):
        """Populate a registry by walking a schema directory tree.

        Every directory ``<root>/<major>/<minor>`` holding
        ``voa.v<major>_<minor>.<kind>.avsc`` contributes that schema.
        """
        from .schema import Schema, get_schema_root
        if not root:
            root = get_schema_root()
        registry = cls()
        for dirpath, dirs, files in os.walk(root, followlinks=False):
            major, minor = str(dirpath).split(os.sep)[-2:]
            for kind in kinds:
                filename = f"voa.v{major}_{minor}.{kind}.avsc"
                if filename in files:
                    schema = Schema.from_file(os.path.join(dirpath, filename))
                    registry.register_schema(schema, f"{major}.{minor}", kind)
        return registry

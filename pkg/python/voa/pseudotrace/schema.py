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

"""Routines for working with the Avro schemas of result records.
"""

from __future__ import annotations

import io
import tempfile
from importlib import resources
from pathlib import PurePath

import fastavro
from lsst.resources import ResourcePath

__all__ = ["RECORD_KINDS", "get_schema_root", "get_latest_schema_version", "get_schema_path",
           "schema_filename", "Schema", "get_path_to_latest_schema", "get_schema_root_uri",
           "get_uri_to_latest_schema", "get_schema_uri"]

RECORD_KINDS = ("gram", "kacdet", "curves", "blockgram", "kernel", "singvec", "kappa",
                "classify", "socrad", "pstr", "verify")
"""Kinds of result record, one top-level schema each."""


def _get_ref(*args):
    """Return the package resource file path object.

    Parameters are relative to voa.pseudotrace.
    """
    return resources.files("voa.pseudotrace").joinpath(*args)


def _get_dir_uri(*args: str) -> ResourcePath:
    """Return the package resource directory with the given components as
    a URI.
    """
    return ResourcePath("resource://voa.pseudotrace/" + "/".join(args), forceDirectory=True)


def get_schema_root():
    """Return the root of the directory within which schemas are stored.

    This might be a temporary location if a zip distribution file is used.
    """
    return _get_ref("schema")


def get_schema_root_uri() -> ResourcePath:
    """Return the ``resource`` URI of the schema root."""
    return _get_dir_uri("schema")


def get_latest_schema_version():
    """Get the latest schema version.

    Returns
    -------
    major : `int`
        The major version number.
    minor : `int`
        The minor version number.
    """
    with _get_ref("schema", "latest.txt").open("rb") as fh:
        val = fh.read()
    major, minor = val.strip().split(b".", 1)
    return int(major), int(minor)


def schema_filename(kind, major, minor):
    """File name of the top-level schema for a record kind.

    Raises
    ------
    KeyError
        Raised if ``kind`` is not a known record kind.
    """
    if kind not in RECORD_KINDS:
        raise KeyError(f"unknown record kind {kind!r}")
    return f"voa.v{major}_{minor}.{kind}.avsc"


def get_schema_path(major, minor):
    """Get the path to the package resource directory housing one version
    of the schemas.

    Returns
    -------
    path : `str`
        Path to the directory containing the schemas.
    """
    return _get_ref("schema", str(major), str(minor)).as_posix()


def get_schema_uri(major: int, minor: int) -> ResourcePath:
    """Get the ``resource`` URI of one version of the schemas."""
    return _get_dir_uri("schema", str(major), str(minor))


def get_path_to_latest_schema(kind):
    """Get the path to the latest schema for a record kind.

    Returns
    -------
    path : `str`
        Path to the schema file.
    """
    major, minor = get_latest_schema_version()
    return (PurePath(get_schema_path(major, minor)) / schema_filename(kind, major, minor)).as_posix()


def get_uri_to_latest_schema(kind) -> ResourcePath:
    """Get the URI to the latest schema for a record kind."""
    major, minor = get_latest_schema_version()
    return get_schema_uri(major, minor).join(schema_filename(kind, major, minor))


class Schema:
    """An Avro schema for one kind of result record.

    Parameters
    ----------
    schema_definition : `dict`
        An Avro schema definition as returned by e.g.
        `fastavro.schema.load_schema`.
    """
    def __init__(self, schema_definition):
        self.definition = schema_definition

    @property
    def kind(self):
        """Record kind, the last component of the schema name."""
        return self.definition["name"].rsplit(".", 1)[-1]

    def serialize(self, record):
        """Create an Avro representation of a record.

        Parameters
        ----------
        record : `dict`
            The data to be serialized.

        Returns
        -------
        avro_data : `bytes`
        """
        bytes_io = io.BytesIO()
        fastavro.schemaless_writer(bytes_io, self.definition, record)
        return bytes_io.getvalue()

    def deserialize(self, record):
        """Deserialize Avro bytes written with this schema.

        Returns
        -------
        record : `dict`
        """
        return fastavro.schemaless_reader(io.BytesIO(record), self.definition)

    def validate(self, record):
        """Whether ``record`` complies with this schema."""
        fastavro.parse_schema(self.definition)
        return fastavro.validate(record, self.definition, raise_errors=False)

    def store_records(self, fp, records):
        """Write records to an Avro container stream."""
        fastavro.writer(fp, self.definition, records)

    def retrieve_records(self, fp):
        """Read records from an Avro container stream.

        Returns
        -------
        schema : `Schema`
            The schema the records were written with.
        records : iterable of `dict`
        """
        from .io import retrieve_results
        return retrieve_results(fp, reader_schema=self)

    def get_schema_id(self):
        """Stable id: the CRC-64-AVRO fingerprint of the canonical form."""
        canonical = fastavro.schema.to_parsing_canonical_form(self.definition)
        return int(fastavro.schema.fingerprint(canonical, "CRC-64-AVRO"), 16)

    def __eq__(self, other):
        return self.definition == other.definition

    @classmethod
    def from_uri(cls, base_uri: str | ResourcePath) -> Schema:
        """Instantiate a `Schema` by reading its definition from a URI.

        Parameters
        ----------
        base_uri : `str` or `lsst.resources.ResourcePath`
            URI of the top-level schema file.
        """
        uri = ResourcePath(base_uri)
        if uri.isLocal:
            return cls.from_file(uri.ospath)

        # fastavro resolves referenced types from sibling files on local
        # disk, under their original names.
        if uri.scheme == "resource":
            with uri.as_local() as local_file:
                if local_file.basename() == uri.basename():
                    return cls.from_file(local_file.ospath)

        with tempfile.TemporaryDirectory() as tmpdir:
            tempdir_uri = ResourcePath(tmpdir, forceDirectory=True)
            for file in ResourcePath.findFileResources([uri.dirname()],
                                                       file_filter=f"\\{uri.getExtension()}$"):
                tempdir_uri.join(file.basename()).transfer_from(file, transfer="copy")
            return cls.from_file(tempdir_uri.join(uri.basename()).ospath)

    @classmethod
    def from_file(cls, filename):
        """Instantiate a `Schema` from a top-level schema file, loading
        referenced schemas from the same directory.
        """
        return cls(fastavro.schema.load_schema(filename))

    @classmethod
    def for_kind(cls, kind):
        """The latest packaged schema for a record kind."""
        return cls.from_uri(get_uri_to_latest_schema(kind))

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

"""Routines for storing result records in Avro container files and
loading them back.
"""

import itertools
import json
import logging

import fastavro

from .schema import Schema, get_latest_schema_version
from .schemaRegistry import SchemaRegistry

__all__ = ["store_results", "retrieve_results", "write_json"]

_LOG = logging.getLogger(__name__)


def store_results(path, kind, records, schema=None, version=None, registry=None):
    """Write result records of one kind to an Avro container file.

    Parameters
    ----------
    path : `str`
        Output file name.
    kind : `str`
        Record kind, used to look up the schema when ``schema`` is not
        given.
    records : iterable of `dict`
        Records to write.
    schema : `Schema`, optional
        Schema to write with; bypasses the registry lookup.
    version : `str`, optional
        Schema version ``MAJOR.MINOR`` to look up; the latest packaged
        version if omitted.
    registry : `SchemaRegistry`, optional
        Registry to look the schema up in; the packaged schemas if
        omitted.

    Raises
    ------
    ValueError
        Raised if no schema is registered for ``kind`` at ``version``.
    RuntimeError
        Raised if the file could not be written.
    """
    if schema is None:
        registry = registry or SchemaRegistry.from_filesystem()
        version = version or "{}.{}".format(*get_latest_schema_version())
        try:
            schema = registry.get_by_version(kind, version)
        except KeyError as e:
            raise ValueError(f"no {kind} schema registered at version {version}") from e
        _LOG.debug("Writing %s records with schema id %d", kind, schema.get_schema_id())
    try:
        with open(path, "wb") as fp:
            schema.store_records(fp, records)
    except (OSError, ValueError, TypeError) as e:
        raise RuntimeError(f"failed to write {kind} records to {path}") from e


def retrieve_results(fp, reader_schema=None):
    """Read result records from an Avro container stream.

    Parameters
    ----------
    fp : derivative of `IOBase`
        I/O stream from which data will be read.
    reader_schema : `Schema`, optional
        Schema to read with; the writer's schema if omitted.

    Returns
    -------
    schema : `Schema`
        The schema the records were written with.
    records : iterable of `dict`

    Raises
    ------
    RuntimeError
        Raised if the stream holds no Avro data.
    """
    try:
        reader = fastavro.reader(fp, reader_schema=reader_schema.definition if reader_schema else None)
    except Exception as e:
        raise RuntimeError(f"failed to find result data in "
                           f"{fp.name if hasattr(fp, 'name') else 'stream'}") from e

    # The writer schema is only populated once a record has been read.
    try:
        first_record = next(reader)
        records = itertools.chain([first_record], reader)
    except StopIteration:
        records = []
    return Schema(reader.writer_schema), records


def write_json(record, fp):
    """Write one record as indented JSON followed by a newline."""
    json.dump(record, fp, indent=2)
    fp.write("\n")

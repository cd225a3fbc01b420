#!/usr/bin/env python
#
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

"""Round-trip sample result records through Avro serialization.
"""

import argparse
import io
import json
import os
import sys

import voa.pseudotrace


def sample_filename(kind):
    return f"{kind}.json"


def round_trip(schema, record):
    """Serialize ``record`` schemalessly and through a container stream.

    Returns
    -------
    avro_size : `int`
        Size in bytes of the schemaless encoding.
    matched : `bool`
        Whether both decodings reproduce ``record``.
    """
    avro_bytes = schema.serialize(record)
    message = schema.deserialize(avro_bytes)

    stream = io.BytesIO()
    schema.store_records(stream, [record])
    stream.seek(0)
    _, loaded = schema.retrieve_records(stream)
    matched = message == record and list(loaded) == [record]
    return len(avro_bytes), matched


def parse_args(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument('--schema-version', type=str,
                        help='Schema version to test ("latest" or MAJOR.MINOR)', default="latest")
    parser.add_argument('--kind', action="append", choices=voa.pseudotrace.RECORD_KINDS,
                        help='Record kind to test (repeatable; all kinds by default)')
    parser.add_argument('--input-data', type=str, default=None,
                        help='Path to schema-compliant JSON data; requires a single --kind')
    parser.add_argument('--print', action="store_true",
                        help='Pretty-print decoded records')
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    if args.schema_version == "latest":
        schema_major, schema_minor = voa.pseudotrace.get_latest_schema_version()
    else:
        schema_major, schema_minor = args.schema_version.split(".")
    schema_root = voa.pseudotrace.get_schema_path(schema_major, schema_minor)
    kinds = args.kind or list(voa.pseudotrace.RECORD_KINDS)
    if args.input_data and len(kinds) != 1:
        print("--input-data needs exactly one --kind", file=sys.stderr)
        return 2

    failures = 0
    for kind in kinds:
        schema = voa.pseudotrace.Schema.from_file(
            os.path.join(schema_root,
                         voa.pseudotrace.schema_filename(kind, schema_major, schema_minor)))
        input_data = args.input_data or os.path.join(schema_root, "sample_data",
                                                     sample_filename(kind))
        with open(input_data) as f:
            record = json.load(f)
        if not schema.validate(record):
            print(f"{kind}: sample does not validate against its schema")
            failures += 1
            continue
        avro_size, matched = round_trip(schema, record)
        json_size = len(json.dumps(record).encode('utf-8'))
        print(f"{kind}: JSON {json_size} bytes, Avro {avro_size} bytes, "
              f"round trip {'ok' if matched else 'MISMATCH'}")
        failures += not matched
        if args.print:
            print(json.dumps(schema.deserialize(schema.serialize(record)), sort_keys=True, indent=4))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

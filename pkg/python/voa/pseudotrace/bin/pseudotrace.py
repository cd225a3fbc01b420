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

"""Command-line front end for Shapovalov forms, induced modules and
graded pseudo-traces.
"""

import argparse
import logging
import os
import sys

import voa.pseudotrace as vp

_LOG = logging.getLogger("voa.pseudotrace.bin.pseudotrace")

LOG_LEVEL_ENV = "VOA_PSEUDOTRACE_LOG_LEVEL"
"""Environment variable with the default log level name."""


def rational(text):
    """Argument type for exact rationals such as ``-5/4`` or ``3``."""
    try:
        return vp.parse_rat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid rational value: {text!r}")


def rational_pair(text):
    """Argument type for a point ``c,h`` such as ``1/2,-1/4``."""
    pieces = text.split(",")
    if len(pieces) != 2:
        raise argparse.ArgumentTypeError(f"expected C,H, not {text!r}")
    return tuple(rational(piece.strip()) for piece in pieces)


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action="store_true",
                        help='Print the result record as JSON')
    common.add_argument('--output', type=str, default=None,
                        help='Also write the result record to this Avro container file')
    common.add_argument('-v', '--verbose', action="count", default=0,
                        help='Increase log verbosity (repeatable)')
    return common


def _add_point(parser):
    parser.add_argument('--c', type=rational, required=True, help='Central charge')
    parser.add_argument('--h', type=rational, required=True, help='Lowest weight')


def _add_pstr_options(parser, tags):
    parser.add_argument('--k', type=int, required=True, help='Jordan block size')
    parser.add_argument('--v', type=str, choices=tags, default="vacuum",
                        help='Vertex operator whose zero mode is traced')
    parser.add_argument('--degrees', dest="ell_max", type=int, default=6,
                        help='Truncation degree')
    parser.add_argument('--mode', choices=("brute", "closed", "both"), default="both",
                        help='Compute by explicit matrices, closed form, or both')


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="pseudotrace.py", description=__doc__.strip())
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser('gram', parents=[common], help='Shapovalov Gram matrix')
    sub.add_argument('--degree', type=int, required=True)
    sub.add_argument('--eval', dest="point", type=rational_pair, default=None, metavar="C,H",
                     help='Evaluate at this point, e.g. 1/2,-1/4')

    sub = commands.add_parser('kacdet', parents=[common],
                              help='Gram determinant against the Kac product formula')
    sub.add_argument('--degree', type=int, required=True)

    sub = commands.add_parser('curves', parents=[common], help='Kac curves through a point')
    _add_point(sub)
    sub.add_argument('--bound', type=int, default=12, help='Largest rs searched')

    sub = commands.add_parser('blockgram', parents=[common], help='Jordan-block Gram matrix')
    sub.add_argument('--degree', type=int, required=True)
    sub.add_argument('--k', type=int, required=True)
    sub.add_argument('--c', type=rational, default=None)
    sub.add_argument('--h', type=rational, default=None)
    sub.add_argument('--mode', choices=("derivative", "direct"), default="derivative")
    sub.add_argument('--check-det', action="store_true",
                     help='Compare its determinant with the k-th power of the Gram determinant')

    sub = commands.add_parser('kernel', parents=[common], help='Kernel submodule at one degree')
    _add_point(sub)
    sub.add_argument('--degree', type=int, required=True)
    sub.add_argument('--k', type=int, required=True)
    sub.add_argument('--cross-check', action="store_true",
                     help='Compare with the level-by-level cascade solution')

    sub = commands.add_parser('singvec', parents=[common], help='Singular vector on a Kac curve')
    sub.add_argument('--r', type=int, required=True)
    sub.add_argument('--s', type=int, required=True)
    sub.add_argument('--t', type=rational, required=True)

    sub = commands.add_parser('kappa', parents=[common], help='Depth of the derivative cascade')
    sub.add_argument('--r', type=int, required=True)
    sub.add_argument('--s', type=int, required=True)
    sub.add_argument('--sign', type=int, choices=(-1, 1), required=True)
    sub.add_argument('--cap', type=int, default=8)

    sub = commands.add_parser('classify', parents=[common], help='Interlocked classification')
    _add_point(sub)
    sub.add_argument('--k', type=int, required=True)
    sub.add_argument('--bound', type=int, default=12)
    sub.add_argument('--cap', type=int, default=8)

    sub = commands.add_parser('socrad', parents=[common], help='Socle and radical dimensions')
    _add_point(sub)
    sub.add_argument('--k', type=int, required=True)
    sub.add_argument('--degrees', dest="ell_max", type=int, default=6, help='Largest degree')

    vir = commands.add_parser('vir', help='Virasoro pseudo-traces')
    vir_commands = vir.add_subparsers(dest="action", required=True)
    sub = vir_commands.add_parser('pstr', parents=[common], help='Graded pseudo-trace')
    _add_point(sub)
    _add_pstr_options(sub, ("vacuum", "omega"))
    sub.add_argument('--case', type=str, default=None,
                     help='Case tag for the closed form; classified when omitted')

    heis = commands.add_parser('heis', help='Heisenberg pseudo-traces')
    heis_commands = heis.add_subparsers(dest="action", required=True)
    sub = heis_commands.add_parser('pstr', parents=[common], help='Graded pseudo-trace')
    sub.add_argument('--a', type=rational, required=True, help='Conformal vector shift')
    sub.add_argument('--lambda', dest="lam", type=rational, required=True,
                     help='Lowest alpha(0) eigenvalue')
    _add_pstr_options(sub, vp.VERTEX_TAGS)

    sub = commands.add_parser('verify', parents=[common], help='Run the regression cases')
    sub.add_argument('--case', action="append", default=None, help='Only run this case')
    sub.add_argument('--list', action="store_true", help='List case names and exit')
    return parser


def _rows_text(matrix):
    if isinstance(matrix, vp.PolyMatrix):
        rows = matrix.text_rows()
    else:
        rows = [[vp.format_rat(x) for x in row] for row in matrix.tolist()]
    return "\n".join("[" + ", ".join(row) + "]" for row in rows)


def run_gram(args):
    gram = vp.gram_matrix(args.degree)
    c, h = args.point or (None, None)
    matrix = gram.matrix if c is None else gram.matrix.evaluate(c, h)
    basis = " ".join(vp.partition_text(parts) for parts in gram.basis)
    return "gram", vp.gram_record(gram, c, h), f"basis: {basis}\n{_rows_text(matrix)}"


def run_kacdet(args):
    kac = vp.kac_det_formula(args.degree)
    text = (f"det = {kac.determinant}\nproduct = {kac.product}\n"
            f"constant = {vp.format_rat(kac.constant)}\nholds = {kac.holds}")
    return "kacdet", vp.kacdet_record(kac), text


def run_curves(args):
    pairs = vp.curves_through(args.c, args.h, args.bound)
    text = " ".join(f"({r}, {s})" for r, s in pairs) or "none"
    return "curves", vp.curves_record(args.c, args.h, args.bound, pairs), text


def run_blockgram(args):
    gram = vp.block_gram(args.degree, args.k, args.c, args.h, mode=args.mode)
    det_equal = vp.block_det_check(args.degree, args.k).equal if args.check_det else None
    text = _rows_text(gram.matrix)
    if det_equal is not None:
        text += f"\ndet equal: {det_equal}"
    return "blockgram", vp.blockgram_record(gram, args.c, args.h, det_equal), text


def run_kernel(args):
    vectors = vp.kernel_J(args.degree, args.k, args.c, args.h, cross_check=args.cross_check)
    text = f"dimension {len(vectors)}" + "".join(f"\n{v.to_text()}" for v in vectors)
    return "kernel", vp.kernel_record(args.degree, args.k, args.c, args.h, vectors), text


def run_singvec(args):
    vector = vp.singular_vector(args.r, args.s, args.t)
    c, h = vp.c_of_t(args.t), vp.h_rs_of_t(args.r, args.s, args.t)
    return "singvec", vp.singvec_record(args.r, args.s, args.t, c, h, vector), vector.to_text()


def run_kappa(args):
    result = vp.kappa(args.r, args.s, args.sign, args.cap)
    text = f"kappa = {result.text}" + "".join(
        f"\nb_{n} = {rep.to_text()}" for n, rep in enumerate(result.representatives, start=2))
    return "kappa", vp.kappa_record(result), text


def run_classify(args):
    found = vp.classify(args.c, args.h, args.k, args.bound, args.cap)
    lines = [f"case {found.case}", f"interlocked {found.interlocked} ({found.interlocked_for})"]
    if found.kappa is not None:
        lines.append(f"kappa {found.kappa.text}")
    lines.extend(found.notes)
    return "classify", vp.classify_record(found), "\n".join(lines)


def run_socrad(args):
    rows = vp.socle_radical_dims(args.c, args.h, args.k, args.ell_max)
    text = "\n".join(f"{row.degree}: dim W={row.dim_w} soc={row.dim_soc} rad={row.dim_rad}"
                     for row in rows)
    return "socrad", vp.socrad_record(args.c, args.h, args.k, rows), text


def _pstr_text(brute, closed):
    lines = []
    if brute is not None:
        lines.append(f"brute:  {brute}")
    if closed is not None:
        lines.append(f"closed: {closed}")
    if brute is not None and closed is not None:
        lines.append(f"agree: {brute == closed}")
    return "\n".join(lines)


def run_vir_pstr(args):
    brute = closed = None
    if args.mode in ("brute", "both"):
        brute = vp.vir_pstr_bruteforce(args.c, args.h, args.k, args.ell_max, v=args.v)
    if args.mode in ("closed", "both"):
        case = args.case or vp.classify(args.c, args.h, args.k, max(args.ell_max, 12)).case
        closed = vp.vir_pstr_closed(args.c, args.h, args.k, case, args.ell_max, v=args.v)
    record = vp.pstr_record("virasoro", {"c": args.c, "h": args.h}, args.k, args.v, brute, closed)
    return "pstr", record, _pstr_text(brute, closed)


def run_heis_pstr(args):
    spec = vp.HeisModuleSpec(args.a, args.lam, args.k)
    brute = closed = None
    if args.mode in ("brute", "both"):
        brute = vp.pstr_bruteforce(spec, args.v, args.ell_max)
    if args.mode in ("closed", "both"):
        closed = vp.pstr_closed_form(spec, args.v, args.ell_max)
    record = vp.pstr_record("heisenberg", {"a": args.a, "lambda": args.lam}, args.k, args.v,
                            brute, closed)
    return "pstr", record, _pstr_text(brute, closed)


def run_verify(args):
    if args.list:
        names = [case["name"] for case in vp.load_cases()]
        return None, {"cases": names}, "\n".join(names)
    outcomes = vp.run_verify(args.case)
    text = "\n".join(("ok      " if o.passed else "FAILED  ") + o.name
                     + ("" if o.passed else f": {o.detail}") for o in outcomes)
    return "verify", vp.verify_record(outcomes), text


_COMMANDS = {
    "gram": run_gram,
    "kacdet": run_kacdet,
    "curves": run_curves,
    "blockgram": run_blockgram,
    "kernel": run_kernel,
    "singvec": run_singvec,
    "kappa": run_kappa,
    "classify": run_classify,
    "socrad": run_socrad,
    "vir": run_vir_pstr,
    "heis": run_heis_pstr,
    "verify": run_verify,
}


def setup_logging(verbose):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def parse_args(argv=None):
    return build_parser().parse_args(argv)


def main(argv=None):
    """Run one subcommand.

    Returns
    -------
    status : `int`
        0 on success, 1 if the operation rejected its input or a
        regression case failed. Argument errors exit with status 2.
    """
    args = parse_args(argv)
    setup_logging(args.verbose)
    try:
        kind, record, text = _COMMANDS[args.command](args)
        if args.output and kind is not None:
            vp.store_results(args.output, kind, [record])
    except (ValueError, KeyError, ArithmeticError, RuntimeError) as e:
        _LOG.debug("Command %s failed", args.command, exc_info=True)
        print(f"pseudotrace.py: error: {e}", file=sys.stderr)
        return 1
    if args.json:
        vp.write_json(record, sys.stdout)
    else:
        print(text)
    if kind == "verify" and record["failed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

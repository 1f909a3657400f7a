"""Command line front end.

Every input is a JSON document (or a list of them) passed with ``--input``;
files are read in order, so spaces must come before the documents that name
them. Output is a single JSON document on stdout or in ``--output``.

Exit codes: 0 success, 1 a check failed (the counterexample report is
written), 2 usage, schema or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import axioms, codec
from .behrend import BehrendData, Cycle, EuMatrix, closure_matrix, dt_morphism, dt_space, eu_apply, eu_invert
from .bivariant import beh_subgroup, membership, verify_certificate
from .cellspace import CellMap, CellSpace
from .constructible import ConstructibleFunction, constant, euler_integral, genus_integral, pullback_cf, pushforward_cf
from .errors import DtcalcError
from .motivic import (
    MotivicClass,
    chi_y_dt,
    class_of,
    genus_eval,
    k0_pullback,
    k0_pushforward,
    one_star,
    psi_poly,
    psi_product,
    scissor_nf,
    unit_class,
)
from .poly import IntPoly
from .series import macmahon_series


class CheckFailed(Exception):
    """Carries a report whose checks did not all pass."""

    def __init__(self, doc):
        super().__init__("check failed")
        self.doc = doc


class Inputs:
    """Documents from every ``--input`` file, loaded against one space registry."""

    def __init__(self, paths):
        self.spaces: dict[str, CellSpace] = {}
        self.objects: list = []
        self.raw: list = []
        for path in paths or []:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
            docs = data if isinstance(data, list) else [data]
            self.raw.extend(docs)
            self.objects.extend(codec.load_bundle(docs, self.spaces))

    def of(self, typ) -> list:
        return [o for o in self.objects if isinstance(o, typ)]

    def one(self, typ, what: str, optional: bool = False):
        found = self.of(typ)
        if not found:
            if optional:
                return None
            raise DtcalcError(f"this command needs a {what} document")
        return found[-1]

    def space(self):
        return self.one(CellSpace, "space")

    def presentations(self):
        return [o for o in self.objects if isinstance(o, tuple)]


def cmd_space_validate(args, inp):
    spaces = inp.of(CellSpace)
    if not spaces:
        raise DtcalcError("space validate needs a space document")
    docs = [codec.save(s) for s in spaces]
    return docs[0] if len(docs) == 1 else docs


def cmd_euler(args, inp):
    alpha = inp.one(ConstructibleFunction, "cf", optional=True)
    if alpha is None:
        b = inp.one(BehrendData, "behrend", optional=True)
        alpha = b.function if b is not None else ConstructibleFunction(inp.space(), dict.fromkeys(inp.space().cells, 1))
    return codec.value_doc(euler_integral(alpha))


def cmd_chi_y(args, inp):
    b = inp.one(BehrendData, "behrend", optional=True)
    if b is not None:
        return codec.save(chi_y_dt(b))
    xi = inp.one(MotivicClass, "k0class", optional=True)
    if xi is not None:
        return codec.save(genus_eval(xi))
    alpha = inp.one(ConstructibleFunction, "cf", optional=True)
    if alpha is not None:
        return codec.save(genus_integral(alpha))
    return codec.save(genus_eval(unit_class(inp.space())))


def cmd_dt(args, inp):
    return codec.value_doc(dt_space(inp.one(BehrendData, "behrend")))


def cmd_dt_morphism(args, inp):
    f = inp.one(CellMap, "map")
    b = _behrend_on(inp, f.target)
    return codec.value_doc(dt_morphism(f, b))


def _behrend_on(inp, space):
    for b in reversed(inp.of(BehrendData)):
        if b.space == space:
            return b
    raise DtcalcError(f"no Behrend document on {space.name}")


def _on(inp, typ, space, what):
    for o in reversed(inp.of(typ)):
        if o.space == space:
            return o
    return None


def cmd_pushforward(args, inp):
    """Push a k0class or cf forward along the map (the cf defaults to the constant 1)."""
    f = inp.one(CellMap, "map")
    xi = _on(inp, MotivicClass, f.source, "k0class")
    if xi is not None:
        return codec.save(k0_pushforward(f, xi))
    alpha = _on(inp, ConstructibleFunction, f.source, "cf") or constant(f.source, 1)
    return codec.save(pushforward_cf(f, alpha))


def cmd_pullback(args, inp):
    f = inp.one(CellMap, "map")
    xi = _on(inp, MotivicClass, f.target, "k0class")
    if xi is not None:
        return codec.save(k0_pullback(f, xi))
    beta = _on(inp, ConstructibleFunction, f.target, "cf") or constant(f.target, 1)
    return codec.save(pullback_cf(f, beta))


def cmd_k0_nf(args, inp):
    pres = inp.presentations()
    if pres:
        target, terms = pres[-1]
        return codec.save(scissor_nf(terms, target))
    maps = inp.of(CellMap)
    if not maps:
        raise DtcalcError("k0 nf needs a presentation or map documents")
    return codec.save(scissor_nf([(1, h) for h in maps]))


def cmd_k0_onestar(args, inp):
    return codec.save(one_star(inp.one(MotivicClass, "k0class")))


def cmd_k0_psi(args, inp):
    classes = inp.of(MotivicClass)
    if not classes:
        raise DtcalcError("k0 psi needs at least one k0class document")
    poly = inp.one(IntPoly, "poly", optional=True)
    if poly is not None:
        return codec.save(psi_poly(poly.coeffs, classes[-1]))
    out = classes[0]
    for xi in classes[1:]:
        out = psi_product(out, xi)
    return codec.save(out)


def cmd_k0_genus(args, inp):
    xi = inp.one(MotivicClass, "k0class", optional=True)
    if xi is None:
        maps = inp.of(CellMap)
        xi = class_of(maps[-1]) if maps else unit_class(inp.space())
    return codec.save(genus_eval(xi))


def cmd_biv_membership(args, inp):
    f = inp.one(CellMap, "map")
    b = _behrend_on(inp, f.target)
    alpha = _on(inp, ConstructibleFunction, f.source, "cf")
    if alpha is None:
        raise DtcalcError(f"membership needs a cf on {f.source.name}")
    lattice = beh_subgroup(f, b, args.locally_closed_generators)
    result = membership(lattice, alpha)
    return codec.membership_doc(result, verify_certificate(lattice, alpha, result))


def cmd_biv_check_axioms(args, inp):
    report = axioms.check_axioms(args.seed, args.count, locally_closed=args.locally_closed_generators)
    if report["failures"]:
        raise CheckFailed(report)
    return report


def cmd_transport(args, inp):
    """Apply ``Theta`` (cf -> cycle) or its inverse (cycle -> cf); the matrix defaults to the closure one."""
    arg = inp.one((ConstructibleFunction, Cycle), "cf or cycle")
    matrix = _on(inp, EuMatrix, arg.space, "eumatrix") or closure_matrix(arg.space)
    if isinstance(arg, Cycle):
        return codec.save(eu_apply(matrix, arg))
    return codec.save(eu_invert(matrix, arg))


def cmd_macmahon(args, inp):
    order = 10 if args.truncation is None else args.truncation
    if order < 0:
        raise DtcalcError("--truncation must be non-negative")
    return codec.save(macmahon_series(order))


def cmd_report(args, inp):
    reports = [d for d in inp.raw if isinstance(d, dict) and d.get("kind") == "report"]
    if not reports:
        raise DtcalcError("report needs a report document")
    replayed = axioms.replay_report(reports[-1])
    if replayed["failures"]:
        raise CheckFailed(replayed)
    return replayed


COMMANDS = {
    ("space", "validate"): cmd_space_validate,
    ("euler",): cmd_euler,
    ("chi-y",): cmd_chi_y,
    ("dt",): cmd_dt,
    ("dt-morphism",): cmd_dt_morphism,
    ("pushforward",): cmd_pushforward,
    ("pullback",): cmd_pullback,
    ("k0", "nf"): cmd_k0_nf,
    ("k0", "onestar"): cmd_k0_onestar,
    ("k0", "psi"): cmd_k0_psi,
    ("k0", "genus"): cmd_k0_genus,
    ("biv", "membership"): cmd_biv_membership,
    ("biv", "check-axioms"): cmd_biv_check_axioms,
    ("transport",): cmd_transport,
    ("macmahon",): cmd_macmahon,
    ("report",): cmd_report,
}


class _Parser(argparse.ArgumentParser):
    """Raise instead of exiting so ``run_command`` can map usage errors to code 2."""

    def error(self, message):
        raise argparse.ArgumentError(None, message)


def _add_common(p):
    p.add_argument("--input", action="append", default=[], metavar="FILE", help="input document (repeatable)")
    p.add_argument("--output", metavar="FILE", help="write the result here instead of stdout")
    p.add_argument("--truncation", type=int, metavar="N", help="series truncation order")
    p.add_argument("--seed", type=int, default=0, metavar="S", help="base seed for randomized checks")
    p.add_argument("--count", type=int, default=1000, metavar="K", help="number of randomized instances")
    p.add_argument("--locally-closed-generators", action="store_true",
                   help="build Behrend-subgroup generators from single cells instead of cell closures")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dtcalc", description="Constructible-function and DT-type invariant calculator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    groups: dict[str, argparse._SubParsersAction] = {}
    for key, fn in COMMANDS.items():
        if len(key) == 1:
            p = sub.add_parser(key[0], help=(fn.__doc__ or "").split("\n")[0] or None)
        else:
            if key[0] not in groups:
                grp = sub.add_parser(key[0])
                groups[key[0]] = grp.add_subparsers(dest="action", required=True, parser_class=_Parser)
            p = groups[key[0]].add_parser(key[1])
        _add_common(p)
        p.set_defaults(handler=fn)
    return parser


def _emit(doc, output):
    text = codec.dumps(doc)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    try:
        doc = args.handler(args, Inputs(args.input))
    except CheckFailed as failed:
        _emit(failed.doc, args.output)
        return 1
    except (DtcalcError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(doc, args.output)
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()

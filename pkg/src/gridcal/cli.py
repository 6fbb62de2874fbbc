"""Command-line interface.

Exit codes: 0 for a completed command, 2 for input that does not parse,
3 when an answer is indeterminate because a search or closure hit its
caps, 4 when a verification (certificate replay, table check) fails.
With --json every result and every error is a JSON document.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .atlas import AtlasTable, atlas_verify, default_atlas_caps
from .census import (HARD_SIZE_LIMIT, KnotFilter, anchor_caps,
                     enumerate_sharded, nonsimplifiable_census)
from .exchange import CapExceeded, exchange_class, is_simplifiable
from .grid_core import (Diagram, DiagramError, FIGURE_EIGHT_6, ParseError,
                        TREFOIL_5, UNKNOT_2, canonical_form, canonical_key,
                        decode_key, encode, encode_key, key_from_hex,
                        key_hex, parse)
from .invariants import classical_invariants
from .moves import ALL_MOVES, ORIENTED_TYPES, enumerate_moves, \
    filter_from_token
from .search import (MalformedCertificate, ReplayFailed, SearchCaps,
                     certificate_text, default_caps, equiv_legendrian,
                     equiv_transverse, find_middle, lambda_classes,
                     pad_diagram, replay_certificate)

BUILTIN_DIAGRAMS = {
    "unknot2": UNKNOT_2,
    "trefoil5": TREFOIL_5,
    "figeight6": FIGURE_EIGHT_6,
}

OK, PARSE_FAILED, CAPS_HIT, VERIFY_FAILED = 0, 2, 3, 4


def _load_diagram(ref: str) -> Diagram:
    """A diagram argument: a file path, '-' for stdin, or a builtin name."""
    if ref == "-":
        return parse(sys.stdin.read())
    if ref in BUILTIN_DIAGRAMS:
        return BUILTIN_DIAGRAMS[ref]
    try:
        with open(ref, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise ParseError("cannot read %r: %s" % (ref, err), 1, 1) from None
    return parse(text)


def _parse_caps(text: str) -> SearchCaps:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("caps must be size:nodes:seconds, got %r" % text)
    size, nodes = int(parts[0]), int(parts[1])
    seconds = math.inf if parts[2] in ("inf", "") else float(parts[2])
    if size < 2 or nodes < 1 or seconds <= 0:
        raise ValueError("caps out of range: %r" % text)
    return SearchCaps(max_grid_size=size, max_nodes=nodes,
                      max_seconds=seconds)


def _caps_for(args, *diagrams) -> SearchCaps:
    if args.caps is not None:
        return args.caps
    return default_caps(*diagrams)


def _emit(args, doc: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _error(args, code: int, kind: str, message: str) -> int:
    if args.json:
        print(json.dumps({"error": kind, "message": message}),
              file=sys.stderr)
    else:
        print("gridcal: %s: %s" % (kind, message), file=sys.stderr)
    return code


def _verdict_doc(verdict) -> dict:
    doc = {"status": verdict.status, "report": verdict.report}
    if verdict.witness is not None:
        doc["witness"] = {"invariant": verdict.witness[0],
                          "first": verdict.witness[1],
                          "second": verdict.witness[2]}
    if verdict.chain:
        doc["chain"] = list(verdict.chain)
    return doc


def cmd_validate(args) -> int:
    docs = []
    lines = []
    for ref in args.diagram:
        d = _load_diagram(ref)
        docs.append({"input": ref, "n": d.n,
                     "components": d.num_components,
                     "key": key_hex(encode_key(d))})
        lines.append("%s: valid, n=%d, %d component(s)"
                     % (ref, d.n, d.num_components))
    _emit(args, {"diagrams": docs}, lines)
    return OK


def cmd_canon(args) -> int:
    d = _load_diagram(args.diagram)
    rep, shift = canonical_form(d, ignore_numbering=args.ignore_numbering)
    hexkey = key_hex(canonical_key(d, ignore_numbering=args.ignore_numbering))
    _emit(args, {"key": hexkey, "shift": list(shift)}, [hexkey])
    return OK


def cmd_invariants(args) -> int:
    d = _load_diagram(args.diagram)
    ci = classical_invariants(d)
    doc = {"n": ci.n, "components": ci.components, "writhe": ci.writhe,
           "corner_counts": dict(ci.corner_counts),
           "tb+": ci.tb_plus, "tb-": ci.tb_minus,
           "tb+_components": list(ci.tb_plus_components),
           "tb-_components": list(ci.tb_minus_components),
           "rot+": ci.rot_plus, "rot-": ci.rot_minus,
           "rot+_components": list(ci.rot_plus_components),
           "rot-_components": list(ci.rot_minus_components),
           "det": ci.determinant}
    doc.update(dict(ci.self_linking))
    lines = ["n=%d components=%d writhe=%d det=%d"
             % (ci.n, ci.components, ci.writhe, ci.determinant),
             "tb+=%d tb-=%d rot+=%d rot-=%d"
             % (ci.tb_plus, ci.tb_minus, ci.rot_plus, ci.rot_minus),
             "per component: tb+=%s tb-=%s rot+=%s rot-=%s"
             % (list(ci.tb_plus_components), list(ci.tb_minus_components),
                list(ci.rot_plus_components), list(ci.rot_minus_components)),
             " ".join("%s=%d" % kv for kv in ci.self_linking),
             "corners: " + " ".join("%s=%d" % kv for kv in ci.corner_counts)]
    _emit(args, doc, lines)
    return OK


def cmd_neighbors(args) -> int:
    d = _load_diagram(args.diagram)
    move_filter = filter_from_token(args.filter)
    pairs = enumerate_moves(d, move_filter)
    if args.limit is not None:
        pairs = pairs[:args.limit]
    docs = []
    lines = []
    for mv, out in pairs:
        rep, _ = canonical_form(out)
        docs.append({"move": mv.serialize(), "kind": mv.kind,
                     "local": mv.local, "component": mv.component,
                     "key": key_hex(encode_key(rep))})
        lines.append("%-28s -> %s" % (mv.serialize(),
                                      key_hex(encode_key(rep))))
    _emit(args, {"count": len(docs), "moves": docs},
          lines + ["%d move(s)" % len(docs)])
    return OK


def cmd_exchange_class(args) -> int:
    d = _load_diagram(args.diagram)
    try:
        cls = exchange_class(d, node_cap=args.node_cap)
    except CapExceeded as err:
        return _error(args, CAPS_HIT, "caps",
                      "exchange closure exceeded %d nodes (%s)"
                      % (args.node_cap, err))
    if args.save:
        with open(args.save, "w", encoding="utf-8") as handle:
            handle.write(cls.to_jsonl())
    doc = {"representative": key_hex(cls.representative),
           "size": len(cls.keys), "n": cls.size_n,
           "simplifiable": cls.simplifiable,
           "fingerprint": cls.fingerprint}
    if args.save:
        doc["saved"] = args.save
    _emit(args, doc, [
        "representative %s" % key_hex(cls.representative),
        "members %d, grid size %d" % (len(cls.keys), cls.size_n),
        "simplifiable: %s" % ("yes" if cls.simplifiable else "no"),
        "fingerprint %s" % cls.fingerprint]
        + (["saved to %s" % args.save] if args.save else []))
    return OK


def cmd_simplifiable(args) -> int:
    d = _load_diagram(args.diagram)
    try:
        answer = is_simplifiable(d, node_cap=args.node_cap)
    except CapExceeded as err:
        return _error(args, CAPS_HIT, "caps",
                      "closure exceeded %d nodes (%s)" % (args.node_cap, err))
    _emit(args, {"simplifiable": answer},
          ["simplifiable" if answer else "non-simplifiable"])
    return OK


def _apply_padding(args, d1: Diagram, d2: Diagram):
    for spec_txt in args.pad or ():
        parts = spec_txt.split(":")
        if len(parts) != 3 or parts[0] not in ("1", "2") \
                or parts[1] not in ORIENTED_TYPES:
            raise ValueError(
                "pad must be index:type:count with index 1 or 2 and type "
                "one of %s, got %r" % ("/".join(ORIENTED_TYPES), spec_txt))
        count = int(parts[2])
        if parts[0] == "1":
            d1 = pad_diagram(d1, parts[1], count)
        else:
            d2 = pad_diagram(d2, parts[1], count)
    return d1, d2


def _equiv_common(args, verdict, d1, d2) -> int:
    doc = _verdict_doc(verdict)
    lines = ["verdict: %s" % verdict.status]
    if verdict.witness is not None:
        lines.append("witness: %s = %s vs %s" % verdict.witness)
    if verdict.is_equivalent:
        cert = certificate_text(d1, d2, verdict)
        if args.cert:
            with open(args.cert, "w", encoding="utf-8") as handle:
                handle.write(cert)
            doc["certificate"] = args.cert
            lines.append("certificate: %s" % args.cert)
        else:
            doc["certificate_text"] = cert
            lines.append(cert.rstrip("\n"))
    _emit(args, doc, lines)
    return CAPS_HIT if verdict.status == "unknown" else OK


def cmd_equiv(args) -> int:
    d1 = _load_diagram(args.first)
    d2 = _load_diagram(args.second)
    d1, d2 = _apply_padding(args, d1, d2)
    sign = "+" if args.contact == "plus" else "-"
    verdict = equiv_legendrian(d1, d2, sign, _caps_for(args, d1, d2))
    return _equiv_common(args, verdict, d1, d2)


_QUADRANT_ALIASES = {"pp": "++", "pm": "+-", "mp": "-+", "mm": "--"}


def cmd_equiv_transverse(args) -> int:
    d1 = _load_diagram(args.first)
    d2 = _load_diagram(args.second)
    d1, d2 = _apply_padding(args, d1, d2)
    quadrant = _QUADRANT_ALIASES.get(args.quadrant, args.quadrant)
    verdict = equiv_transverse(d1, d2, quadrant, _caps_for(args, d1, d2))
    return _equiv_common(args, verdict, d1, d2)


def cmd_find_middle(args) -> int:
    d1 = _load_diagram(args.first)
    d2 = _load_diagram(args.second)
    result = find_middle(d1, d2, _caps_for(args, d1, d2))
    if result.diagram is None:
        doc = {"found": False, "exhaustive": result.exhaustive,
               "report": result.report}
        _emit(args, doc, ["no middle diagram found (%s)"
                          % ("exhaustive within bound" if result.exhaustive
                             else "caps hit")])
        return OK if result.exhaustive else CAPS_HIT
    doc = {"found": True,
           "middle": key_hex(encode_key(result.diagram)),
           "chain_from_first": list(result.chain_from_first),
           "chain_from_second": list(result.chain_from_second),
           "report": result.report}
    lines = ["middle %s" % key_hex(encode_key(result.diagram)),
             "from first (%d moves):" % len(result.chain_from_first)]
    lines += ["  " + ln for ln in result.chain_from_first]
    lines.append("from second (%d moves):" % len(result.chain_from_second))
    lines += ["  " + ln for ln in result.chain_from_second]
    _emit(args, doc, lines)
    return OK


def cmd_lambda(args) -> int:
    d1 = _load_diagram(args.first)
    d2 = _load_diagram(args.second)
    result = lambda_classes(d1, d2, _caps_for(args, d1, d2))
    doc = {"classes": [{"representative": key_hex(cls.representative),
                        "size": len(cls.keys),
                        "fingerprint": cls.fingerprint}
                       for cls in result.classes],
           "truncated": result.truncated,
           "unresolved": [key_hex(k) for k in result.unresolved_keys],
           "report": result.report}
    lines = ["%d class(es)%s" % (len(result.classes),
                                 " (truncated)" if result.truncated else "")]
    for cls in result.classes:
        lines.append("  %s  members=%d  %s"
                     % (key_hex(cls.representative), len(cls.keys),
                        cls.fingerprint))
    for key in result.unresolved_keys:
        lines.append("  unresolved %s" % key_hex(key))
    _emit(args, doc, lines)
    return CAPS_HIT if result.truncated else OK


def _parse_knot_filter(text: str) -> KnotFilter:
    det = None
    components = 1
    anchor = None
    for part in text.split(","):
        name, _, value = part.partition("=")
        if name == "det":
            det = int(value)
        elif name == "components":
            components = int(value)
        elif name == "anchor":
            anchor = _load_diagram(value)
        else:
            raise ValueError("unknown knot filter field %r" % name)
    if det is None:
        raise ValueError("knot filter needs det=<determinant>")
    return KnotFilter(determinant=det, components=components, anchor=anchor,
                      label=text)


def cmd_census(args) -> int:
    if args.nonsimplifiable:
        if args.knot is None:
            raise ValueError("--nonsimplifiable needs --knot det=...")
        knot = _parse_knot_filter(args.knot)
        caps = args.caps if args.caps is not None else anchor_caps(args.n)
        result = nonsimplifiable_census(knot, args.n, caps,
                                        threads=args.threads)
        out = []
        for rec in result.records:
            out.append(json.dumps(
                {"key": rec.key.hex(), "n": rec.n,
                 "invariants": rec.invariants,
                 "fingerprint": rec.fingerprint,
                 "simplifiable": rec.simplifiable,
                 "bucket": rec.bucket}, sort_keys=True))
        for key, why in result.unresolved:
            out.append(json.dumps({"key": key.hex(), "unresolved": why},
                                  sort_keys=True))
        _write_lines(args, out)
        return OK
    keys = enumerate_sharded(args.n, components=args.components,
                             threads=args.threads)
    out = []
    for key in keys:
        d = decode_key(key)
        out.append(json.dumps({"key": key.hex(), "n": d.n,
                               "components": d.num_components},
                              sort_keys=True))
    _write_lines(args, out)
    return OK


def _write_lines(args, lines) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            for line in lines:
                handle.write(line + "\n")
        print("%d line(s) written to %s" % (len(lines), args.out))
    else:
        for line in lines:
            print(line)


def cmd_atlas_verify(args) -> int:
    with open(args.table, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        table = AtlasTable.from_json(text)
    except (ValueError, DiagramError) as err:
        return _error(args, PARSE_FAILED, "parse", str(err))
    caps = args.caps if args.caps is not None else default_atlas_caps(table)
    report = atlas_verify(table, caps)
    doc = {"overall": report.overall,
           "checks": {name: {"status": check.status,
                             "details": [list(item) for item in
                                         check.details]}
                      for name, check in report.checks.items()},
           "merge_conclusions": [list(item)
                                 for item in report.merge_conclusions],
           "caps": report.report}
    lines = ["overall: %s" % report.overall]
    for name, check in sorted(report.checks.items()):
        lines.append("  %s: %s" % (name, check.status))
        for item in check.details:
            lines.append("    %s" % " | ".join(str(x) for x in item))
    for conclusion in report.merge_conclusions:
        lines.append("  conclusion: %s (%s)" % conclusion)
    _emit(args, doc, lines)
    if report.overall == "pass":
        return OK
    if report.overall == "fail":
        return VERIFY_FAILED
    return CAPS_HIT


def cmd_replay(args) -> int:
    with open(args.certificate, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        start, end, token = replay_certificate(text)
    except MalformedCertificate as err:
        return _error(args, PARSE_FAILED, "parse", str(err))
    except ReplayFailed as err:
        return _error(args, VERIFY_FAILED, "verification", str(err))
    for ref, expect in ((args.start, start), (args.end, end)):
        if ref is not None:
            d = _load_diagram(ref)
            if encode_key(canonical_form(d)[0]) != expect:
                return _error(args, VERIFY_FAILED, "verification",
                              "%r does not match the certificate endpoint"
                              % ref)
    _emit(args, {"valid": True, "from": key_hex(start), "to": key_hex(end),
                 "filter": token},
          ["certificate valid", "from %s" % key_hex(start),
           "to %s" % key_hex(end), "filter %s" % token])
    return OK


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#17becf")


def render_svg(d: Diagram) -> str:
    """Static picture: lattice, oriented segments, verticals in front."""
    cell = 40
    margin = 30
    span = cell * (d.n - 1)
    width = span + 2 * margin
    height = span + 2 * margin

    def x(c):
        return margin + c * cell

    def y(r):
        return margin + (d.n - 1 - r) * cell

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" '
             'width="%d" height="%d" viewBox="0 0 %d %d">'
             % (width, height, width, height),
             '<rect width="%d" height="%d" fill="white"/>' % (width, height)]
    for k in range(d.n):
        parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" '
                     'stroke="#dddddd"/>'
                     % (x(k), y(d.n - 1), x(k), y(0)))
        parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" '
                     'stroke="#dddddd"/>'
                     % (x(0), y(k), x(d.n - 1), y(k)))
    inv_plus = {d.plus_row[c]: c for c in range(d.n)}
    inv_minus = {d.minus_row[c]: c for c in range(d.n)}
    for r in range(d.n):
        color = _PALETTE[d.component_of[inv_plus[r]] % len(_PALETTE)]
        parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                     'stroke-width="3"/>'
                     % (x(inv_minus[r]), y(r), x(inv_plus[r]), y(r), color))
    for c in range(d.n):
        color = _PALETTE[d.component_of[c] % len(_PALETTE)]
        parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="white" '
                     'stroke-width="9"/>'
                     % (x(c), y(d.plus_row[c]), x(c), y(d.minus_row[c])))
        parts.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                     'stroke-width="3"/>'
                     % (x(c), y(d.plus_row[c]), x(c), y(d.minus_row[c]),
                        color))
    for c in range(d.n):
        color = _PALETTE[d.component_of[c] % len(_PALETTE)]
        parts.append('<circle cx="%d" cy="%d" r="5" fill="%s"/>'
                     % (x(c), y(d.plus_row[c]), color))
        parts.append('<circle cx="%d" cy="%d" r="5" fill="white" '
                     'stroke="%s" stroke-width="2"/>'
                     % (x(c), y(d.minus_row[c]), color))
    parts.append('<text x="%d" y="%d" font-family="monospace" '
                 'font-size="12">grid %d</text>'
                 % (margin, height - 8, d.n))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_render(args) -> int:
    d = _load_diagram(args.diagram)
    svg = render_svg(d)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(svg)
        print("written to %s" % args.out)
    else:
        print(svg, end="")
    return OK


def _add_common(sub) -> None:
    sub.add_argument("--threads", type=int, default=1,
                     help="shard enumeration across this many workers")
    sub.add_argument("--caps", type=_parse_caps, default=None,
                     metavar="SIZE:NODES:SECONDS",
                     help="search caps; SECONDS may be 'inf'")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable output")
    sub.add_argument("--seed", type=int, default=None,
                     help="seed reserved for randomized helpers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridcal",
        description="Rectangular diagram calculus for knots and links.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check diagram files")
    sub.add_argument("diagram", nargs="+")
    sub.set_defaults(handler=cmd_validate)
    _add_common(sub)

    sub = subs.add_parser("canon", help="print the canonical hex key")
    sub.add_argument("diagram")
    sub.add_argument("--ignore-numbering", action="store_true")
    sub.set_defaults(handler=cmd_canon)
    _add_common(sub)

    sub = subs.add_parser("invariants", help="classical invariants")
    sub.add_argument("diagram")
    sub.set_defaults(handler=cmd_invariants)
    _add_common(sub)

    sub = subs.add_parser("neighbors", help="list elementary moves")
    sub.add_argument("diagram")
    sub.add_argument("--filter", default="all",
                     help="move filter token (default: all)")
    sub.add_argument("--limit", type=int, default=None)
    sub.set_defaults(handler=cmd_neighbors)
    _add_common(sub)

    sub = subs.add_parser("exchange-class",
                          help="exchange closure of a diagram")
    sub.add_argument("diagram")
    sub.add_argument("--node-cap", type=int, default=10 ** 6)
    sub.add_argument("--save", default=None,
                     help="write the class as JSONL to this path")
    sub.set_defaults(handler=cmd_exchange_class)
    _add_common(sub)

    sub = subs.add_parser("simplifiable",
                          help="does the exchange class admit a "
                               "destabilization")
    sub.add_argument("diagram")
    sub.add_argument("--node-cap", type=int, default=10 ** 6)
    sub.set_defaults(handler=cmd_simplifiable)
    _add_common(sub)

    sub = subs.add_parser("equiv", help="front-type equivalence search")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("--contact", choices=("plus", "minus"), default="plus")
    sub.add_argument("--pad", action="append", metavar="I:TYPE:COUNT",
                     help="stabilize input I before the search")
    sub.add_argument("--cert", default=None,
                     help="write the certificate to this path")
    sub.set_defaults(handler=cmd_equiv)
    _add_common(sub)

    sub = subs.add_parser("equiv-transverse",
                          help="transverse-type equivalence search")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("--quadrant", default="++",
                     choices=("++", "+-", "-+", "--",
                              "pp", "pm", "mp", "mm"),
                     help="push-off quadrant; spell it pp/pm/mp/mm when "
                          "the sign form collides with option parsing")
    sub.add_argument("--pad", action="append", metavar="I:TYPE:COUNT")
    sub.add_argument("--cert", default=None)
    sub.set_defaults(handler=cmd_equiv_transverse)
    _add_common(sub)

    sub = subs.add_parser("find-middle",
                          help="diagram joining the two inputs' front "
                               "families")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.set_defaults(handler=cmd_find_middle)
    _add_common(sub)

    sub = subs.add_parser("lambda",
                          help="exchange classes between two front types")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.set_defaults(handler=cmd_lambda)
    _add_common(sub)

    sub = subs.add_parser("census", help="canonical key enumeration")
    sub.add_argument("--n", type=int, required=True,
                     help="grid size (exact for the plain census, the "
                          "maximum for --nonsimplifiable)")
    sub.add_argument("--components", type=int, default=None)
    sub.add_argument("--knot", default=None,
                     metavar="det=D[,components=K][,anchor=REF]")
    sub.add_argument("--nonsimplifiable", action="store_true")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=cmd_census)
    _add_common(sub)

    sub = subs.add_parser("atlas-verify", help="check a distinguishing "
                                               "table")
    sub.add_argument("table")
    sub.set_defaults(handler=cmd_atlas_verify)
    _add_common(sub)

    sub = subs.add_parser("replay", help="re-validate a certificate")
    sub.add_argument("certificate")
    sub.add_argument("--start", default=None,
                     help="diagram that must match the 'from' key")
    sub.add_argument("--end", default=None,
                     help="diagram that must match the 'to' key")
    sub.set_defaults(handler=cmd_replay)
    _add_common(sub)

    sub = subs.add_parser("render", help="draw the diagram as SVG")
    sub.add_argument("diagram")
    sub.add_argument("--out", default=None)
    sub.set_defaults(handler=cmd_render)
    _add_common(sub)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CapExceeded as err:
        return _error(args, CAPS_HIT, "caps", str(err))
    except (DiagramError, OSError, ValueError) as err:
        return _error(args, PARSE_FAILED, "parse", str(err))


if __name__ == "__main__":
    sys.exit(main())

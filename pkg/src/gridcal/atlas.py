"""Verification of distinguishing tables.

A table declares representatives for some front-type classes: columns
for the plus family, rows for the minus family, and in each cell the
exchange classes claimed to realize that (column, row) pair of fronts.
Verifying the table means certifying three properties plus a counting
bound:

  1. all diagrams in one column share the plus Legendrian type, and all
     diagrams in one row the minus type;
  2. the referenced diagrams lie in pairwise distinct exchange classes;
  3. a bounded scan of the classes realizing each (column, row) pair
     finds nothing outside the declared cell content;

and no cell may hold more than sym_order distinct exchange classes,
where sym_order is the declared order of the symmetry group acting on
the classes.  Merging two rows (or columns) whose union would overfill
some cell is contradictory, which certifies the two rows (columns) as
genuinely distinct front types.

Checks report pass, fail or unknown; failures always come from explicit
witnesses (an invariant mismatch, a duplicated class, an extra class in
a cell, an overfull cell), so enlarging the caps can only turn unknown
into pass or fail, never pass into fail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .exchange import CapExceeded, exchange_class
from .grid_core import Diagram, decode_key, encode_key, key_from_hex, key_hex
from .search import SearchCaps, Verdict, equiv_legendrian, lambda_classes

DEFAULT_ATLAS_NODES = 20000


@dataclass(frozen=True)
class AtlasTable:
    """Rows are minus-family representatives, columns plus-family ones;
    cells[(i, j)] lists the diagrams declared for row i, column j."""

    rows: tuple
    cols: tuple
    cells: dict
    sym_order: int

    @classmethod
    def from_json(cls, text: str) -> "AtlasTable":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValueError("atlas document is not valid JSON: %s" % err)
        for name in ("rows", "cols", "cells", "sym_order"):
            if name not in doc:
                raise ValueError("atlas document lacks %r" % name)
        rows = tuple(decode_key(key_from_hex(h)) for h in doc["rows"])
        cols = tuple(decode_key(key_from_hex(h)) for h in doc["cols"])
        cells = {}
        for spot, refs in doc["cells"].items():
            i_txt, _, j_txt = spot.partition(",")
            i, j = int(i_txt), int(j_txt)
            if not (0 <= i < len(rows) and 0 <= j < len(cols)):
                raise ValueError("cell %r outside the %dx%d table"
                                 % (spot, len(rows), len(cols)))
            cells[(i, j)] = tuple(decode_key(key_from_hex(h)) for h in refs)
        sym_order = int(doc["sym_order"])
        if sym_order < 1:
            raise ValueError("sym_order must be at least 1")
        return cls(rows=rows, cols=cols, cells=cells, sym_order=sym_order)

    def to_json(self) -> str:
        doc = {
            "rows": [key_hex(encode_key(d)) for d in self.rows],
            "cols": [key_hex(encode_key(d)) for d in self.cols],
            "cells": {"%d,%d" % spot: [key_hex(encode_key(d)) for d in refs]
                      for spot, refs in sorted(self.cells.items())},
            "sym_order": self.sym_order,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def cell(self, i: int, j: int):
        return self.cells.get((i, j), ())


@dataclass(frozen=True)
class CheckResult:
    status: str  # pass | fail | unknown
    details: tuple = ()


@dataclass(frozen=True)
class AtlasReport:
    columns_consistent: CheckResult
    rows_consistent: CheckResult
    classes_distinct: CheckResult
    coverage: CheckResult
    counting: CheckResult
    merge_conclusions: tuple = ()
    report: dict = field(default_factory=dict)

    @property
    def checks(self):
        return {"columns_consistent": self.columns_consistent,
                "rows_consistent": self.rows_consistent,
                "classes_distinct": self.classes_distinct,
                "coverage": self.coverage,
                "counting": self.counting}

    @property
    def overall(self) -> str:
        statuses = {check.status for check in self.checks.values()}
        if statuses == {"pass"}:
            return "pass"
        if "fail" in statuses:
            return "fail"
        return "unknown"


def default_atlas_caps(table: AtlasTable,
                       max_nodes: int = DEFAULT_ATLAS_NODES) -> SearchCaps:
    """Node-bounded caps covering every diagram the table references."""
    top = max([d.n for d in table.rows] + [d.n for d in table.cols]
              + [d.n for refs in table.cells.values() for d in refs])
    return SearchCaps(max_grid_size=top + 1, max_nodes=max_nodes,
                      max_seconds=math.inf)


def _equiv_with_fallback(a: Diagram, b: Diagram, sign: str,
                         caps: SearchCaps) -> Verdict:
    """Try the one-extra-line bound first, then the full caps."""
    tight = SearchCaps(max_grid_size=max(a.n, b.n) + 1,
                       max_nodes=caps.max_nodes,
                       max_seconds=caps.max_seconds)
    verdict = equiv_legendrian(a, b, sign, tight)
    if verdict.status in ("equivalent", "distinct") \
            or tight.max_grid_size >= caps.max_grid_size:
        return verdict
    return equiv_legendrian(a, b, sign, caps)


def _line_consistency(table: AtlasTable, sign: str,
                      caps: SearchCaps) -> CheckResult:
    """Property 1 for one family: chain every line's members together."""
    if sign == "+":
        heads, axis = table.cols, "column"
    else:
        heads, axis = table.rows, "row"
    details = []
    status = "pass"
    for idx, head in enumerate(heads):
        members = [head]
        if sign == "+":
            spots = [(i, idx) for i in range(len(table.rows))]
        else:
            spots = [(idx, j) for j in range(len(table.cols))]
        for spot in spots:
            members.extend(table.cell(*spot))
        for a, b in zip(members, members[1:]):
            verdict = _equiv_with_fallback(a, b, sign, caps)
            if verdict.is_equivalent:
                continue
            spot_txt = "%s %d" % (axis, idx)
            if verdict.status == "distinct":
                details.append((spot_txt, "fail",
                                "witness %r" % (verdict.witness,)))
                status = "fail"
            else:
                details.append((spot_txt, "unknown", verdict.status))
                if status != "fail":
                    status = "unknown"
    return CheckResult(status=status, details=tuple(details))


def _referenced(table: AtlasTable):
    """All cell diagrams, deduplicated by canonical key, in table order."""
    seen = {}
    for spot in sorted(table.cells):
        for d in table.cells[spot]:
            seen.setdefault(encode_key(d), (spot, d))
    return seen


def _fingerprints(table: AtlasTable, caps: SearchCaps):
    """Exchange fingerprint per referenced diagram key; None when capped."""
    out = {}
    for key, (spot, d) in _referenced(table).items():
        try:
            out[key] = exchange_class(d, node_cap=caps.max_nodes).fingerprint
        except CapExceeded:
            out[key] = None
    return out


def _classes_distinct(table: AtlasTable, fps: dict) -> CheckResult:
    details = []
    status = "pass"
    by_fp = {}
    for key, fp in fps.items():
        if fp is None:
            details.append((key_hex(key), "unknown",
                            "exchange class hit the node cap"))
            if status != "fail":
                status = "unknown"
            continue
        if fp in by_fp:
            details.append((key_hex(key), "fail",
                            "same exchange class as %s" % key_hex(by_fp[fp])))
            status = "fail"
        else:
            by_fp[fp] = key
    return CheckResult(status=status, details=tuple(details))


def _coverage(table: AtlasTable, fps: dict, caps: SearchCaps) -> CheckResult:
    details = []
    status = "pass"
    for i, row in enumerate(table.rows):
        for j, col in enumerate(table.cols):
            declared = {}
            unknown_declared = False
            for d in table.cell(i, j):
                fp = fps.get(encode_key(d))
                if fp is None:
                    unknown_declared = True
                else:
                    declared[fp] = d
            lam = lambda_classes(col, row, caps)
            spot = "cell %d,%d" % (i, j)
            extra = [cls for cls in lam.classes
                     if cls.fingerprint not in declared]
            if extra:
                details.append((spot, "fail",
                                "undeclared class with representative %s"
                                % key_hex(extra[0].representative)))
                status = "fail"
                continue
            if lam.truncated or lam.unresolved_keys or unknown_declared:
                details.append((spot, "unknown", "scan hit the caps"))
                if status != "fail":
                    status = "unknown"
                continue
            missing = set(declared) - set(cls.fingerprint
                                          for cls in lam.classes)
            if missing:
                shown = key_hex(encode_key(declared[sorted(missing)[0]]))
                details.append((spot, "fail",
                                "declared diagram %s not found in the cell"
                                % shown))
                status = "fail"
    return CheckResult(status=status, details=tuple(details))


def _cell_fps(table: AtlasTable, fps: dict, i: int, j: int):
    """(set of resolved fingerprints, any-unresolved flag) for one cell."""
    got = set()
    unresolved = False
    for d in table.cell(i, j):
        fp = fps.get(encode_key(d))
        if fp is None:
            unresolved = True
        else:
            got.add(fp)
    return got, unresolved


def _counting(table: AtlasTable, fps: dict):
    """Cell size bound, plus the merge conclusions it certifies."""
    details = []
    status = "pass"
    bound = table.sym_order
    for i in range(len(table.rows)):
        for j in range(len(table.cols)):
            got, unresolved = _cell_fps(table, fps, i, j)
            if len(got) > bound:
                details.append(("cell %d,%d" % (i, j), "fail",
                                "%d distinct exchange classes exceed the "
                                "symmetry order %d" % (len(got), bound)))
                status = "fail"
            elif unresolved and status != "fail":
                details.append(("cell %d,%d" % (i, j), "unknown",
                                "unresolved exchange class"))
                status = "unknown"
    conclusions = []
    for axis, count, other in (("rows", len(table.rows), len(table.cols)),
                               ("cols", len(table.cols), len(table.rows))):
        for a in range(count):
            for b in range(a + 1, count):
                for k in range(other):
                    spot_a = (a, k) if axis == "rows" else (k, a)
                    spot_b = (b, k) if axis == "rows" else (k, b)
                    got_a, un_a = _cell_fps(table, fps, *spot_a)
                    got_b, un_b = _cell_fps(table, fps, *spot_b)
                    if un_a or un_b:
                        continue
                    if len(got_a | got_b) > bound:
                        conclusions.append(
                            ("%s %d and %d are distinct" % (axis, a, b),
                             "merging overfills cell against %d" % k))
                        break
    return CheckResult(status=status, details=tuple(details)), \
        tuple(conclusions)


def atlas_verify(table: AtlasTable,
                 caps: SearchCaps | None = None) -> AtlasReport:
    """Run all table checks; the report is Pass only when every one is."""
    if caps is None:
        caps = default_atlas_caps(table)
    fps = _fingerprints(table, caps)
    counting, conclusions = _counting(table, fps)
    return AtlasReport(
        columns_consistent=_line_consistency(table, "+", caps),
        rows_consistent=_line_consistency(table, "-", caps),
        classes_distinct=_classes_distinct(table, fps),
        coverage=_coverage(table, fps, caps),
        counting=counting,
        merge_conclusions=conclusions,
        report=caps.describe())

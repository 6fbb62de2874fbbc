"""Elementary moves between rectangular diagrams.

A move replaces a diagram R1 by R2 such that, for some directed rectangle
[c1;c2] x [r1;r2] on the torus (directed arcs in the standard circle
orientation), all of the following hold:

  1. c1 != c2 and r1 != r2;
  2. the symmetric difference of R1 and R2 is the four corner points
     {c1,c2} x {r1,r2};
  3. the symmetric difference contains an edge of R1 or of R2;
  4. neither diagram contains the other;
  5. the closed rectangle meets R1 union R2 in exactly the four corners;
  6. vertices common to R1 and R2 keep their sign and component number.

Moves are exchanges (equal size), stabilizations (size +1) or
destabilizations (size -1).  A stabilization R1 -> R2 (and the inverse
destabilization) is of type I when the corner retained by the smaller
diagram lies on the main diagonal {(c1,r1),(c2,r2)} of the rectangle, of
type II when it lies on the antidiagonal.  Its oriented refinement looks
at the rectangle row phi0 whose two corners both belong to the larger
diagram: the move is '->' when the larger diagram's vertex at (c2, phi0)
is positive, '<-' when negative.  A move is local when the open annuli
spanned by the rectangle's column and row arcs contain no vertex at all.

Coordinates.  Everything is expressed on the half-integer refinement of
the source diagram's grid: column c sits at position 2c, the gap between
columns c and c+1 at position 2c+1, on the cyclic scale 0..2n-1 (likewise
for rows).  Gaps are where stabilizations and exchanges place new
meridians and longitudes; the result is re-discretized afterwards.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, replace

from .grid_core import Diagram, validate

EXCHANGE = "exchange"
STABILIZATION = "stabilization"
DESTABILIZATION = "destabilization"

ORIENTED_TYPES = ("->I", "<-I", "->II", "<-II")
_KIND_RANK = {EXCHANGE: 0, STABILIZATION: 1, DESTABILIZATION: 2}
_ORIENT_RANK = {None: 0, "->I": 1, "<-I": 2, "->II": 3, "<-II": 4}


class NotAnElementaryMove(ValueError):
    """Raised when a pair of diagrams fails the move definition.

    The condition attribute names the first failed clause (1..6).
    """

    def __init__(self, condition: int, detail: str = ""):
        msg = "not an elementary move (condition %d)" % condition
        if detail:
            msg += ": " + detail
        super().__init__(msg)
        self.condition = condition


@dataclass(frozen=True)
class Move:
    """One elementary move, in the source diagram's refined coordinates.

    removed lists the source vertices that disappear, added the vertices
    that appear, both as (column, row, sign) triples on the refined scale
    (sign is +1 or -1).  rect is (c1, c2, r1, r2), the directed rectangle
    that witnesses the definition.
    """

    kind: str
    rect: tuple[int, int, int, int]
    removed: tuple[tuple[int, int, int], ...]
    added: tuple[tuple[int, int, int], ...]
    stab_type: str | None
    oriented_type: str | None
    local: bool
    component: int

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.rect,
                _ORIENT_RANK[self.oriented_type])

    def serialize(self) -> str:
        """One-line record: kind orient c1 c2 r1 r2 local (1-based)."""
        kind_tok = {EXCHANGE: "exch", STABILIZATION: "stab",
                    DESTABILIZATION: "destab"}[self.kind]
        orient_tok = self.oriented_type or "."
        c1, c2, r1, r2 = self.rect
        return "%s %s %d %d %d %d %d" % (
            kind_tok, orient_tok, c1 + 1, c2 + 1, r1 + 1, r2 + 1,
            1 if self.local else 0)


def parse_move(line: str, source: Diagram) -> Move:
    """Rebuild a serialized move against its source diagram."""
    toks = line.split()
    if len(toks) != 7:
        raise ValueError("malformed move record: %r" % line)
    kind = {"exch": EXCHANGE, "stab": STABILIZATION,
            "destab": DESTABILIZATION}.get(toks[0])
    if kind is None:
        raise ValueError("unknown move kind %r" % toks[0])
    orient = None if toks[1] == "." else toks[1]
    if orient is not None and orient not in ORIENTED_TYPES:
        raise ValueError("unknown oriented type %r" % toks[1])
    rect = tuple(int(t) - 1 for t in toks[2:6])
    m = 2 * source.n
    if not all(0 <= x < m for x in rect):
        raise ValueError("rectangle %s outside refined scale 0..%d"
                         % (rect, m - 1))
    local = bool(int(toks[6]))
    move = _reconstruct(source, kind, rect)
    if move.oriented_type != orient or move.local != local:
        raise ValueError(
            "move record %r does not match the source diagram "
            "(reconstructed %s)" % (line, move.serialize()))
    return move


def _arc_len(a: int, b: int, m: int) -> int:
    return (b - a) % m


def _on_closed_arc(x: int, a: int, b: int, m: int) -> bool:
    return (x - a) % m <= (b - a) % m


def _strictly_inside(x: int, a: int, b: int, m: int) -> bool:
    return 0 < (x - a) % m < (b - a) % m


def _vertex_positions(d: Diagram):
    """Signed vertex map {(2c, 2r): sign} on the refined scale."""
    out = {}
    for c in range(d.n):
        out[(2 * c, 2 * d.plus_row[c])] = +1
        out[(2 * c, 2 * d.minus_row[c])] = -1
    return out


def _rediscretize(verts) -> Diagram:
    """Collapse a vertex list [(col_pos, row_pos, sign, comp)] to a Diagram."""
    cols = sorted({v[0] for v in verts})
    rows = sorted({v[1] for v in verts})
    assert len(cols) == len(rows), "occupied meridians and longitudes differ"
    cidx = {p: i for i, p in enumerate(cols)}
    ridx = {p: i for i, p in enumerate(rows)}
    n = len(cols)
    plus = [-1] * n
    minus = [-1] * n
    comp = [-1] * n
    for p, r, s, k in verts:
        c = cidx[p]
        if s > 0:
            plus[c] = ridx[r]
        else:
            minus[c] = ridx[r]
        assert comp[c] in (-1, k), "column with mixed component numbers"
        comp[c] = k
    assert -1 not in plus and -1 not in minus
    return validate(plus, minus, comp)


def _rect_choices(pa: int, pb: int, qa: int, qb: int):
    """The four directed rectangles over the corner set {pa,pb} x {qa,qb}."""
    for c1, c2 in ((pa, pb), (pb, pa)):
        for r1, r2 in ((qa, qb), (qb, qa)):
            yield (c1, c2, r1, r2)


def _condition5_ok(rect, other_positions, m) -> bool:
    """other_positions: non-corner vertices of R1 union R2."""
    c1, c2, r1, r2 = rect
    for pc, pr in other_positions:
        if _on_closed_arc(pc, c1, c2, m) and _on_closed_arc(pr, r1, r2, m):
            return False
    return True


def _is_local(rect, all_positions, m) -> bool:
    c1, c2, r1, r2 = rect
    for pc, pr in all_positions:
        if _strictly_inside(pc, c1, c2, m):
            return False
        if _strictly_inside(pr, r1, r2, m):
            return False
    return True


def is_local(d: Diagram, move: Move) -> bool:
    """Do the move's open column and row annuli avoid every vertex?

    The vertices tested are those of the union of both diagrams: the
    source's own plus the ones the move adds.  Recomputed from scratch,
    so it can double-check the cached Move.local flag.
    """
    positions = set(_vertex_positions(d))
    positions.update((v[0], v[1]) for v in move.added)
    return _is_local(move.rect, positions, 2 * d.n)


def _stab_typing(rect, small_corner, big_map):
    """Type and oriented type of a (de)stabilization.

    small_corner is the one rectangle corner kept by the smaller diagram;
    big_map holds the larger diagram's signed vertices by position.
    """
    c1, c2, r1, r2 = rect
    if small_corner in ((c1, r1), (c2, r2)):
        stab_type = "I"
    else:
        assert small_corner in ((c1, r2), (c2, r1))
        stab_type = "II"
    phi0 = None
    for r in (r1, r2):
        if (c1, r) in big_map and (c2, r) in big_map:
            assert phi0 is None, "two full corner rows in the larger diagram"
            phi0 = r
    assert phi0 is not None, "no full corner row in the larger diagram"
    arrow = "->" if big_map[(c2, phi0)] > 0 else "<-"
    return stab_type, arrow + stab_type


def _emit(kind, rect, removed, added, small_corner, big_map,
          all_positions, m, comp):
    stab_type = oriented = None
    if kind != EXCHANGE:
        stab_type, oriented = _stab_typing(rect, small_corner, big_map)
    return Move(kind=kind, rect=rect, removed=tuple(sorted(removed)),
                added=tuple(sorted(added)), stab_type=stab_type,
                oriented_type=oriented, local=_is_local(rect, all_positions, m),
                component=comp)


def _shared_vertices(d: Diagram, skip_cols=(), skip_rows=()):
    """Vertices of d away from the given refined columns/rows, as 4-tuples."""
    out = []
    for c in range(d.n):
        if 2 * c in skip_cols:
            continue
        k = d.component_of[c]
        for r, s in ((d.plus_row[c], +1), (d.minus_row[c], -1)):
            if 2 * r in skip_rows:
                continue
            out.append((2 * c, 2 * r, s, k))
    return out


def _exchange_candidates(d: Diagram):
    """Yield (rect-corner data, removed, added, result verts, component).

    Column jumps move one meridian's vertex pair to a gap; row jumps do
    the dual.  Jumps to the two gaps adjacent to the moving line are
    skipped: they re-discretize to the identical grid.
    """
    n = d.n
    m = 2 * n
    for c0 in range(n):
        ra, rb = 2 * d.plus_row[c0], 2 * d.minus_row[c0]
        sa, sb = +1, -1
        comp = d.component_of[c0]
        keep = _shared_vertices(d, skip_cols=(2 * c0,))
        for g in range(1, m, 2):
            if g == (2 * c0 + 1) % m or g == (2 * c0 - 1) % m:
                continue
            removed = [(2 * c0, ra, sa), (2 * c0, rb, sb)]
            added = [(g, ra, sa), (g, rb, sb)]
            result = keep + [(g, ra, sa, comp), (g, rb, sb, comp)]
            yield (2 * c0, g, ra, rb), removed, added, result, comp
    for r0 in range(n):
        plus_col = d.plus_row.index(r0)
        minus_col = d.minus_row.index(r0)
        ca, cb = 2 * plus_col, 2 * minus_col
        comp = d.component_of[plus_col]
        keep = _shared_vertices(d, skip_rows=(2 * r0,))
        for g in range(1, m, 2):
            if g == (2 * r0 + 1) % m or g == (2 * r0 - 1) % m:
                continue
            removed = [(ca, 2 * r0, +1), (cb, 2 * r0, -1)]
            added = [(ca, g, +1), (cb, g, -1)]
            result = keep + [(ca, g, +1, comp), (cb, g, -1, comp)]
            yield (ca, cb, 2 * r0, g), removed, added, result, comp


def _stab_candidates(d: Diagram):
    """Yield corner data for every vertex split (vertex, column gap, row gap)."""
    n = d.n
    m = 2 * n
    for c0, r0, s in d.vertices():
        comp = d.component_of[c0]
        pc, pr = 2 * c0, 2 * r0
        keep = [v for v in _shared_vertices(d) if (v[0], v[1]) != (pc, pr)]
        for gc in range(1, m, 2):
            for gr in range(1, m, 2):
                removed = [(pc, pr, s)]
                added = [(gc, gr, -s), (gc, pr, s), (pc, gr, s)]
                result = keep + [(gc, gr, -s, comp), (gc, pr, s, comp),
                                 (pc, gr, s, comp)]
                yield (pc, gc, pr, gr), removed, added, result, comp


def _destab_candidates(d: Diagram):
    """Yield corner data for every L-shaped corner triple of the diagram."""
    vmap = _vertex_positions(d)
    for c0, r0, s in d.vertices():
        rb = d.minus_row[c0] if s > 0 else d.plus_row[c0]
        cb = d.minus_row.index(r0) if s > 0 else d.plus_row.index(r0)
        pa, pb = 2 * c0, 2 * cb
        qa, qb = 2 * r0, 2 * rb
        if (pb, qb) in vmap:
            continue
        comp = d.component_of[c0]
        removed = [(pa, qa, s), (pa, qb, -s), (pb, qa, -s)]
        added = [(pb, qb, -s)]
        keep = [v for v in _shared_vertices(d)
                if (v[0], v[1]) not in ((pa, qa), (pa, qb), (pb, qa))]
        result = keep + [(pb, qb, -s, comp)]
        yield (pa, pb, qa, qb), removed, added, result, comp


@dataclass(frozen=True)
class MoveFilter:
    """Which moves a search or enumeration may use.

    None fields mean unrestricted.  oriented_types applies to
    stabilizations and destabilizations only.
    """

    kinds: frozenset | None = None
    oriented_types: frozenset | None = None
    components: frozenset | None = None

    def allows_kind(self, kind: str) -> bool:
        return self.kinds is None or kind in self.kinds

    def allows(self, move: Move) -> bool:
        if not self.allows_kind(move.kind):
            return False
        if move.kind != EXCHANGE and self.oriented_types is not None \
                and move.oriented_type not in self.oriented_types:
            return False
        if self.components is not None \
                and move.component not in self.components:
            return False
        return True

    def token(self) -> str:
        if self == ALL_MOVES:
            return "all"
        if self == EXCHANGES_ONLY:
            return "exchanges"
        for sign in "+-":
            if self == legendrian_filter(sign):
                return "legendrian:" + sign
        for quad in ("++", "+-", "-+", "--"):
            if self == transverse_filter(quad):
                return "transverse:" + quad
        parts = []
        if self.kinds is not None:
            parts.append("kinds=" + ",".join(sorted(self.kinds)))
        if self.oriented_types is not None:
            parts.append("oriented=" + ",".join(sorted(self.oriented_types)))
        if self.components is not None:
            parts.append("components="
                         + ",".join(str(c) for c in sorted(self.components)))
        return ";".join(parts) if parts else "all"


ALL_MOVES = MoveFilter()
EXCHANGES_ONLY = MoveFilter(kinds=frozenset({EXCHANGE}))

# Each transverse class is blind to exactly one oriented type.
_QUADRANT_EXCLUDES = {"++": "<-II", "+-": "->II", "-+": "<-I", "--": "->I"}


def legendrian_filter(sign: str) -> MoveFilter:
    """Moves preserving the given front: type II excluded for '+', I for '-'."""
    if sign == "+":
        return MoveFilter(oriented_types=frozenset({"->I", "<-I"}))
    if sign == "-":
        return MoveFilter(oriented_types=frozenset({"->II", "<-II"}))
    raise ValueError("sign must be '+' or '-', got %r" % sign)


def transverse_filter(quadrant: str) -> MoveFilter:
    excluded = _QUADRANT_EXCLUDES.get(quadrant)
    if excluded is None:
        raise ValueError("quadrant must be one of ++ +- -+ --, got %r"
                         % quadrant)
    return MoveFilter(oriented_types=frozenset(
        t for t in ORIENTED_TYPES if t != excluded))


def filter_from_token(token: str) -> MoveFilter:
    if token == "all":
        return ALL_MOVES
    if token == "exchanges":
        return EXCHANGES_ONLY
    if token.startswith("legendrian:"):
        return legendrian_filter(token.split(":", 1)[1])
    if token.startswith("transverse:"):
        return transverse_filter(token.split(":", 1)[1])
    fields = {}
    for part in token.split(";"):
        key, _, val = part.partition("=")
        fields[key] = val.split(",")
    kwargs = {}
    if "kinds" in fields:
        kwargs["kinds"] = frozenset(fields["kinds"])
    if "oriented" in fields:
        kwargs["oriented_types"] = frozenset(fields["oriented"])
    if "components" in fields:
        kwargs["components"] = frozenset(int(c) for c in fields["components"])
    if not kwargs:
        raise ValueError("unknown move filter token %r" % token)
    return MoveFilter(**kwargs)


def _candidate_moves(d: Diagram, kind, cand_iter):
    """Check condition 5 over the four directed rectangles of a candidate.

    Yields (moves, result_verts) per candidate; moves lists one Move per
    satisfying rectangle and may be empty.  Conditions 1, 2, 3, 4 and 6
    hold for every generated candidate by construction.
    """
    m = 2 * d.n
    for (pa, pb, qa, qb), removed, added, result, comp in cand_iter:
        corners = {(pa, qa), (pa, qb), (pb, qa), (pb, qb)}
        if kind == EXCHANGE:
            small_corner = big_map = None
        else:
            big_side, small_side = ((removed, added)
                                    if len(removed) > len(added)
                                    else (added, removed))
            big_map = {(v[0], v[1]): v[2] for v in big_side}
            small_corner = (small_side[0][0], small_side[0][1])
        all_pos = [(v[0], v[1]) for v in result] \
            + [(v[0], v[1]) for v in removed]
        others = [p for p in all_pos if p not in corners]
        moves = []
        for rect in _rect_choices(pa, pb, qa, qb):
            if _condition5_ok(rect, others, m):
                moves.append(_emit(kind, rect, removed, added, small_corner,
                                   big_map, all_pos, m, comp))
        yield moves, result


def _kind_candidates(d: Diagram, kind):
    if kind == EXCHANGE:
        return _exchange_candidates(d)
    if kind == STABILIZATION:
        return _stab_candidates(d)
    return _destab_candidates(d)


def enumerate_moves(d: Diagram, move_filter: MoveFilter = ALL_MOVES):
    """All elementary moves out of d, as (Move, result Diagram) pairs.

    Deterministic order: exchanges, then stabilizations, then
    destabilizations, each sorted by rectangle then oriented type.
    """
    pairs = []
    for kind in (EXCHANGE, STABILIZATION, DESTABILIZATION):
        if not move_filter.allows_kind(kind):
            continue
        for moves, result in _candidate_moves(d, kind,
                                              _kind_candidates(d, kind)):
            kept = [mv for mv in moves if move_filter.allows(mv)]
            if kept:
                out = _rediscretize(result)
                pairs.extend((mv, out) for mv in kept)
    pairs.sort(key=lambda pair: pair[0].sort_key())
    return pairs


def apply_move(d: Diagram, move: Move) -> Diagram:
    """Apply a move to d after re-checking the full definition.

    Raises NotAnElementaryMove when a clause fails against d, ValueError
    when the record's metadata disagrees with what the rectangle encodes.
    """
    vmap = _vertex_positions(d)
    for v in move.removed:
        if vmap.get((v[0], v[1])) != v[2]:
            raise NotAnElementaryMove(
                2, "removed vertex %s not in the diagram" % (v,))
    for v in move.added:
        if (v[0], v[1]) in vmap:
            raise NotAnElementaryMove(
                2, "added vertex %s collides with the diagram" % (v,))
    rebuilt = _reconstruct(d, move.kind, move.rect)
    if rebuilt.removed != move.removed or rebuilt.added != move.added:
        raise NotAnElementaryMove(
            2, "move record does not match the diagram at its rectangle")
    if (rebuilt.oriented_type != move.oriented_type
            or rebuilt.local != move.local
            or rebuilt.component != move.component):
        raise ValueError("move metadata disagrees with the diagram: "
                         "expected %s" % rebuilt.serialize())
    removed_pos = {(v[0], v[1]) for v in move.removed}
    result = [(2 * c, 2 * r, s, d.component_of[c])
              for c, r, s in d.vertices()
              if (2 * c, 2 * r) not in removed_pos]
    result += [(v[0], v[1], v[2], move.component) for v in move.added]
    return _rediscretize(result)


def _reconstruct(d: Diagram, kind: str, rect) -> Move:
    """Find the enumerated move of the given kind at the given rectangle."""
    for moves, _ in _candidate_moves(d, kind, _kind_candidates(d, kind)):
        for mv in moves:
            if mv.rect == rect:
                return mv
    raise NotAnElementaryMove(
        5, "no %s at rectangle %s in this diagram" % (kind, rect))


def classify_all(d1: Diagram, d2: Diagram):
    """Every move carrying d1 exactly onto d2 (as arrays), sorted.

    Raises NotAnElementaryMove with the first failing condition when the
    pair admits no move.
    """
    if d1.n == d2.n and d1.plus_row == d2.plus_row \
            and d1.minus_row == d2.minus_row:
        raise NotAnElementaryMove(4, "the diagrams are equal")
    dn = d2.n - d1.n
    if dn == 0:
        kind = EXCHANGE
    elif dn == 1:
        kind = STABILIZATION
    elif dn == -1:
        kind = DESTABILIZATION
    else:
        raise NotAnElementaryMove(
            2, "sizes differ by %d, moves change size by at most 1" % dn)
    target = (d2.plus_row, d2.minus_row)
    matches = []
    rect_blocked = False
    numbering_clash = False
    for moves, result in _candidate_moves(d1, kind,
                                          _kind_candidates(d1, kind)):
        out = _rediscretize(result)
        if (out.plus_row, out.minus_row) != target:
            continue
        if out.component_of != d2.component_of:
            numbering_clash = True
            continue
        if moves:
            matches.extend(moves)
        else:
            rect_blocked = True
    if matches:
        matches.sort(key=Move.sort_key)
        return matches
    if numbering_clash:
        raise NotAnElementaryMove(
            6, "component numbering differs on shared vertices")
    if rect_blocked:
        raise NotAnElementaryMove(
            5, "every candidate rectangle contains extra vertices")
    if kind == EXCHANGE:
        _diagnose_same_size(d1, d2)
    raise NotAnElementaryMove(
        2, "no %s carries the first diagram onto the second" % kind)


def classify(d1: Diagram, d2: Diagram) -> Move:
    """The least move carrying d1 onto d2; see classify_all."""
    return classify_all(d1, d2)[0]


def _diagnose_same_size(d1: Diagram, d2: Diagram):
    """Name the failed condition for equal-size non-exchange pairs."""
    v1 = _vertex_positions(d1)
    v2 = _vertex_positions(d2)
    only1 = sorted(set(v1) - set(v2))
    only2 = sorted(set(v2) - set(v1))
    sym = only1 + only2
    cols = {p[0] for p in sym}
    rows = {p[1] for p in sym}
    if not (len(sym) == 4 and len(cols) == 2 and len(rows) == 2
            and len(set(sym)) == 4):
        raise NotAnElementaryMove(
            2, "symmetric difference is not a corner rectangle")
    for pos in set(v1) & set(v2):
        if v1[pos] != v2[pos]:
            raise NotAnElementaryMove(
                6, "shared vertex at %s changes sign" % (pos,))
    # A clean 2+2 split along a side would have made some candidate match,
    # so the four corners split diagonally between the diagrams here.
    raise NotAnElementaryMove(
        3, "neither diagram contributes a full edge of the rectangle")


def transport_move(move: Move, n: int, row_shift: int, col_shift: int) -> Move:
    """Rewrite a move on an n-diagram after shifting the diagram.

    Matches Diagram shifting: new column c holds old column (c+col_shift),
    so old refined position p becomes (p - 2*shift) mod 2n.
    """
    m = 2 * n
    dc = (2 * col_shift) % m
    dr = (2 * row_shift) % m

    def map_vertex(v):
        return ((v[0] - dc) % m, (v[1] - dr) % m, v[2])

    c1, c2, r1, r2 = move.rect
    return replace(
        move,
        rect=((c1 - dc) % m, (c2 - dc) % m, (r1 - dr) % m, (r2 - dr) % m),
        removed=tuple(sorted(map_vertex(v) for v in move.removed)),
        added=tuple(sorted(map_vertex(v) for v in move.added)))


def inverse_move(d: Diagram, move: Move) -> Move:
    """The move undoing `move`, in the coordinates of its result diagram.

    A source line keeps a coordinate in the result exactly when it still
    carries a vertex after the move; everything else lands in a gap.
    Applying the inverse returns to the source's combinatorial type.
    The arrays themselves come back cyclically rotated when the move
    jumped a line over the window origin, so callers comparing raw
    diagrams must compare canonical keys instead.
    """
    removed_pos = {(v[0], v[1]) for v in move.removed}
    surviving_cols = {v[0] for v in move.added}
    surviving_rows = {v[1] for v in move.added}
    for c, r, s in d.vertices():
        if (2 * c, 2 * r) not in removed_pos:
            surviving_cols.add(2 * c)
            surviving_rows.add(2 * r)
    oc = sorted(surviving_cols)
    orr = sorted(surviving_rows)
    m_new = 2 * len(oc)
    cmap = {p: 2 * i for i, p in enumerate(oc)}
    rmap = {p: 2 * i for i, p in enumerate(orr)}

    def map_col(p):
        if p in cmap:
            return cmap[p]
        return (2 * bisect.bisect_left(oc, p) - 1) % m_new

    def map_row(p):
        if p in rmap:
            return rmap[p]
        return (2 * bisect.bisect_left(orr, p) - 1) % m_new

    inv_kind = {EXCHANGE: EXCHANGE, STABILIZATION: DESTABILIZATION,
                DESTABILIZATION: STABILIZATION}[move.kind]
    c1, c2, r1, r2 = move.rect
    return Move(
        kind=inv_kind,
        rect=(map_col(c1), map_col(c2), map_row(r1), map_row(r2)),
        removed=tuple(sorted((map_col(v[0]), map_row(v[1]), v[2])
                             for v in move.added)),
        added=tuple(sorted((map_col(v[0]), map_row(v[1]), v[2])
                           for v in move.removed)),
        stab_type=move.stab_type,
        oriented_type=move.oriented_type,
        local=move.local,
        component=move.component)

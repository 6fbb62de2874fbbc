"""Oriented rectangular diagrams on the torus.

A rectangular diagram of size n is a set of 2n marked points on the torus
occupying n meridians and n longitudes, exactly two points per occupied
circle, one '+' and one '-'.  After numbering the occupied meridians and
longitudes cyclically we store, for every column c, the row of its '+'
vertex and the row of its '-' vertex.  Both arrays are permutations of
0..n-1 (one '+' and one '-' per row), and plus_row[c] != minus_row[c].

Vertical edges run from '+' to '-', horizontal edges from '-' to '+'.
Following edges, the successor column of c is the column whose '-' vertex
sits in the row of c's '+' vertex; cycles of that permutation are the
link components.  Components carry numbers, which are part of the data.

Two diagrams are combinatorially equivalent when they differ by
orientation preserving homeomorphisms of the two circle factors, which at
this level of description means independent cyclic shifts of rows and
columns.  The canonical key below is the lexicographically least byte
encoding over all n*n shift pairs, so equal keys mean equivalent diagrams
with matching component numbering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class DiagramError(ValueError):
    """Base class for diagram validation failures."""


class SizeTooSmall(DiagramError):
    pass


class NotAPermutation(DiagramError):
    pass


class SignClash(DiagramError):
    """A column carries its '+' and '-' vertex in the same row."""


class BadComponentNumbering(DiagramError):
    pass


class ParseError(ValueError):
    """Text format violation, with 1-based line and column of the offence."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Diagram:
    """Immutable rectangular diagram; construct through validate()."""

    n: int
    plus_row: tuple[int, ...]
    minus_row: tuple[int, ...]
    component_of: tuple[int, ...]

    @property
    def num_components(self) -> int:
        return max(self.component_of) + 1

    def vertices(self):
        """Yield (column, row, sign) with sign +1 for '+' and -1 for '-'."""
        for c in range(self.n):
            yield (c, self.plus_row[c], +1)
            yield (c, self.minus_row[c], -1)

    def __repr__(self) -> str:
        return "Diagram(n=%d, plus=%s, minus=%s, comp=%s)" % (
            self.n, list(self.plus_row), list(self.minus_row),
            list(self.component_of))


def _inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


def component_cycles(plus_row, minus_row) -> list[list[int]]:
    """Column cycles of the successor permutation, in first-seen order."""
    n = len(plus_row)
    inv_minus = _inverse(tuple(minus_row))
    succ = [inv_minus[plus_row[c]] for c in range(n)]
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        c = start
        while not seen[c]:
            seen[c] = True
            cyc.append(c)
            c = succ[c]
        cycles.append(cyc)
    return cycles


def default_numbering(plus_row, minus_row) -> tuple[int, ...]:
    """Number components 0.. by the smallest column they contain."""
    n = len(plus_row)
    comp = [0] * n
    for k, cyc in enumerate(component_cycles(plus_row, minus_row)):
        for c in cyc:
            comp[c] = k
    return tuple(comp)


def validate(plus_row, minus_row, component_of=None) -> Diagram:
    """Check the diagram axioms and return a Diagram.

    Raises SizeTooSmall, NotAPermutation, SignClash or
    BadComponentNumbering.  When component_of is omitted, components are
    numbered by the smallest column index they contain.
    """
    plus_row = tuple(int(x) for x in plus_row)
    minus_row = tuple(int(x) for x in minus_row)
    n = len(plus_row)
    if n < 2:
        raise SizeTooSmall("diagram size must be at least 2, got %d" % n)
    if len(minus_row) != n:
        raise NotAPermutation(
            "plus and minus arrays differ in length (%d vs %d)"
            % (n, len(minus_row)))
    for name, arr in (("plus_row", plus_row), ("minus_row", minus_row)):
        if sorted(arr) != list(range(n)):
            raise NotAPermutation("%s is not a permutation of 0..%d: %s"
                                  % (name, n - 1, list(arr)))
    for c in range(n):
        if plus_row[c] == minus_row[c]:
            raise SignClash("column %d has both vertices in row %d"
                            % (c, plus_row[c]))
    cycles = component_cycles(plus_row, minus_row)
    if component_of is None:
        comp = default_numbering(plus_row, minus_row)
    else:
        comp = tuple(int(x) for x in component_of)
        if len(comp) != n:
            raise BadComponentNumbering(
                "component array has length %d, expected %d" % (len(comp), n))
        labels = set()
        for cyc in cycles:
            vals = {comp[c] for c in cyc}
            if len(vals) != 1:
                raise BadComponentNumbering(
                    "columns %s form one component but carry numbers %s"
                    % (cyc, sorted(vals)))
            labels.add(vals.pop())
        if labels != set(range(len(cycles))):
            raise BadComponentNumbering(
                "component numbers must be exactly 0..%d, got %s"
                % (len(cycles) - 1, sorted(labels)))
    return Diagram(n, plus_row, minus_row, comp)


def flip_orientation(d: Diagram) -> Diagram:
    """Reverse the orientation of every component (swap '+' and '-').

    An involution; the column partition into components is unchanged, so
    the numbering carries over.
    """
    return Diagram(d.n, d.minus_row, d.plus_row, d.component_of)


def reflect_theta(d: Diagram) -> Diagram:
    """Reverse the cyclic order of columns (a mirror of the link)."""
    n = d.n
    rng = range(n - 1, -1, -1)
    return Diagram(n,
                   tuple(d.plus_row[c] for c in rng),
                   tuple(d.minus_row[c] for c in rng),
                   tuple(d.component_of[c] for c in rng))


def shift(d: Diagram, row_shift: int, col_shift: int) -> Diagram:
    """Cyclic torus shift: new column c is old column c+col_shift, and row
    values drop by row_shift (all mod n)."""
    n = d.n
    sr = row_shift % n
    sc = col_shift % n
    return Diagram(
        n,
        tuple((d.plus_row[(c + sc) % n] - sr) % n for c in range(n)),
        tuple((d.minus_row[(c + sc) % n] - sr) % n for c in range(n)),
        tuple(d.component_of[(c + sc) % n] for c in range(n)),
    )


@lru_cache(maxsize=64)
def _subtract_tables(n: int) -> tuple[bytes, ...]:
    """Translation tables mapping byte v to (v - s) mod n, one per s."""
    tables = []
    for s in range(n):
        tab = bytearray(range(256))
        for v in range(n):
            tab[v] = (v - s) % n
        tables.append(bytes(tab))
    return tuple(tables)


def _relabel_first_seen(comp: bytes) -> bytes:
    """Relabel component numbers by first occurrence (lex-least relabel)."""
    mapping = {}
    out = bytearray(len(comp))
    for i, v in enumerate(comp):
        if v not in mapping:
            mapping[v] = len(mapping)
        out[i] = mapping[v]
    return bytes(out)


def _shift_encodings(d: Diagram, ignore_numbering: bool):
    """Yield ((row_shift, col_shift), encoded bytes) for all n*n shifts."""
    n = d.n
    plus = bytes(d.plus_row)
    minus = bytes(d.minus_row)
    comp = bytes(d.component_of)
    single = d.num_components == 1
    tables = _subtract_tables(n)
    head = bytes((n,))
    for sc in range(n):
        plus_rot = plus[sc:] + plus[:sc]
        minus_rot = minus[sc:] + minus[:sc]
        comp_rot = comp[sc:] + comp[:sc]
        if ignore_numbering and not single:
            comp_rot = _relabel_first_seen(comp_rot)
        for sr in range(n):
            tab = tables[sr]
            yield (sr, sc), (head + plus_rot.translate(tab)
                             + minus_rot.translate(tab) + comp_rot)


def canonical_key(d: Diagram, ignore_numbering: bool = False) -> bytes:
    """Lexicographically least encoding over all torus shifts.

    Equal keys mean combinatorially equivalent diagrams with matching
    component numbering; with ignore_numbering the key is additionally
    minimized over renumberings of the components.
    """
    return min(enc for _, enc in _shift_encodings(d, ignore_numbering))


def canonical_form(d: Diagram, ignore_numbering: bool = False):
    """Return (canonical diagram, (row_shift, col_shift)).

    The shift pair is the smallest one attaining the canonical key, so
    certificate reconstruction is deterministic.
    """
    best_shift, best = min(_shift_encodings(d, ignore_numbering),
                           key=lambda it: (it[1], it[0]))
    canon = decode_key(best)
    return canon, best_shift


def encode_key(d: Diagram) -> bytes:
    """Byte encoding of the diagram as presented (no shift minimization)."""
    return bytes((d.n,)) + bytes(d.plus_row) + bytes(d.minus_row) \
        + bytes(d.component_of)


def decode_key(key: bytes) -> Diagram:
    """Inverse of encode_key / canonical_key."""
    n = key[0]
    if len(key) != 1 + 3 * n:
        raise ValueError("malformed key of length %d for size %d"
                         % (len(key), n))
    return validate(key[1:1 + n], key[1 + n:1 + 2 * n],
                    key[1 + 2 * n:1 + 3 * n])


def key_hex(key: bytes) -> str:
    return key.hex()


def key_from_hex(text: str) -> bytes:
    return bytes.fromhex(text)


def encode(d: Diagram) -> str:
    """Text form: size line, '+' rows, '-' rows, optional component line.

    Row indices are 1-based on disk.  The component line is omitted when
    the numbering is the default first-seen one.
    """
    lines = ["grid %d" % d.n,
             "+ " + " ".join(str(r + 1) for r in d.plus_row),
             "- " + " ".join(str(r + 1) for r in d.minus_row)]
    if d.component_of != default_numbering(d.plus_row, d.minus_row):
        lines.append("comp " + " ".join(str(k + 1) for k in d.component_of))
    return "\n".join(lines) + "\n"


def _parse_ints(tokens, line_no, line_text, what, lo, hi):
    vals = []
    for tok in tokens:
        col = line_text.index(tok) + 1
        try:
            v = int(tok)
        except ValueError:
            raise ParseError("%s entry %r is not an integer" % (what, tok),
                             line_no, col) from None
        if not (lo <= v <= hi):
            raise ParseError("%s entry %d out of range %d..%d"
                             % (what, v, lo, hi), line_no, col)
        vals.append(v)
    return vals


def parse(text: str) -> Diagram:
    """Parse the text form produced by encode()."""
    raw_lines = text.splitlines()
    lines = [(i + 1, ln) for i, ln in enumerate(raw_lines) if ln.strip()]
    if not lines:
        raise ParseError("empty input", 1, 1)
    line_no, header = lines[0]
    toks = header.split()
    if toks[0] != "grid":
        raise ParseError("expected 'grid <n>' header", line_no, 1)
    if len(toks) != 2:
        raise ParseError("header must be 'grid <n>'", line_no, len(toks[0]) + 2)
    try:
        n = int(toks[1])
    except ValueError:
        raise ParseError("size %r is not an integer" % toks[1],
                         line_no, header.index(toks[1]) + 1) from None
    if n < 2:
        raise ParseError("size must be at least 2", line_no,
                         header.index(toks[1]) + 1)
    if len(lines) < 3:
        raise ParseError("expected '+' and '-' rows after header",
                         line_no, 1)
    rows = {}
    comp = None
    for line_no, ln in lines[1:]:
        toks = ln.split()
        tag = toks[0]
        if tag in ("+", "-"):
            if tag in rows:
                raise ParseError("duplicate %r line" % tag, line_no, 1)
            vals = _parse_ints(toks[1:], line_no, ln, "row", 1, n)
            if len(vals) != n:
                raise ParseError("expected %d entries, got %d"
                                 % (n, len(vals)), line_no, 1)
            rows[tag] = [v - 1 for v in vals]
        elif tag == "comp":
            vals = _parse_ints(toks[1:], line_no, ln, "component", 1, n)
            if len(vals) != n:
                raise ParseError("expected %d entries, got %d"
                                 % (n, len(vals)), line_no, 1)
            comp = [v - 1 for v in vals]
        else:
            raise ParseError("unknown line tag %r" % tag, line_no, 1)
    for tag in "+-":
        if tag not in rows:
            raise ParseError("missing %r line" % tag, lines[0][0], 1)
    try:
        return validate(rows["+"], rows["-"], comp)
    except DiagramError as err:
        raise ParseError(str(err), lines[0][0], 1) from err


UNKNOT_2 = validate((0, 1), (1, 0))
TREFOIL_5 = validate((2, 3, 4, 0, 1), (0, 1, 2, 3, 4))
# Figure-eight knot on the smallest possible grid.  The only knots that
# fit on six or fewer lines are the unknot, the two trefoils and the
# figure-eight; determinant 5 picks out the last.
FIGURE_EIGHT_6 = validate((0, 1, 3, 2, 5, 4), (2, 5, 0, 4, 3, 1))

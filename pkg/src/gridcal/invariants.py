"""Classical invariants read off a rectangular diagram.

The planar picture puts column c at x = c and row r at y = r, joins the
two vertices of a column by a straight vertical segment (oriented from
the positive vertex to the negative one) and the two vertices of a row
by a horizontal segment (negative to positive), with vertical segments
always passing in front.

Rotating the picture by -45 degrees turns it into a front projection
whose cusps are the NW and SE corners; rotating by +45 degrees uses the
NE and SW corners instead.  The two readings give the 'plus' and 'minus'
families below:

  tb_plus  = writhe - (#NW + #SE) / 2        tb_minus = -writhe - (#NE + #SW) / 2
  rot_plus = (down_plus - up_plus) / 2       likewise for rot_minus

where a NW corner is an up cusp at a positive vertex and a down cusp at
a negative one, and a SE corner the other way around (for the minus
family: NE is a down cusp at a positive vertex, SW a down cusp at a
negative one).  The four framed push-offs are

  sl++ = writhe - down_plus      sl+- = writhe - up_plus
  sl-+ = -writhe - down_minus    sl-- = -writhe - up_minus

and satisfy sl++ = tb_plus - rot_plus, sl+- = tb_plus + rot_plus,
sl-+ = tb_minus - rot_minus, sl-- = tb_minus + rot_minus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid_core import Diagram
from .moves import (DESTABILIZATION, EXCHANGE, Move, STABILIZATION)

SL_KEYS = ("sl++", "sl+-", "sl-+", "sl--")
DELTA_KEYS = ("tb+", "tb-", "rot+", "rot-") + SL_KEYS + ("det", "components")


def crossings(d: Diagram):
    """All crossings as (column, row, sign) with the vertical in front.

    The sign convention: a crossing of an upward vertical with a
    rightward horizontal is negative.
    """
    out = []
    spans = []
    for c in range(d.n):
        lo, hi = sorted((d.plus_row[c], d.minus_row[c]))
        up = d.minus_row[c] > d.plus_row[c]
        spans.append((lo, hi, up))
    for r in range(d.n):
        pc = d.plus_row.index(r)
        mc = d.minus_row.index(r)
        clo, chi = sorted((pc, mc))
        right = pc > mc
        for c in range(clo + 1, chi):
            lo, hi, up = spans[c]
            if lo < r < hi:
                sign = -1 if up == right else +1
                out.append((c, r, sign))
    return out


def writhe(d: Diagram) -> int:
    return sum(s for _, _, s in crossings(d))


def corner_counts(d: Diagram):
    """Corner headings of every vertex: {'NE': k, 'NW': k, 'SE': k, 'SW': k}.

    A vertex's vertical edge heads N when its column partner sits on a
    higher row, and its horizontal edge heads E when its row partner
    sits in a column further right.
    """
    counts = {"NE": 0, "NW": 0, "SE": 0, "SW": 0}
    for c, r, s, partner_row, partner_col in _corners(d):
        ns = "N" if partner_row > r else "S"
        ew = "E" if partner_col > c else "W"
        counts[ns + ew] += 1
    return counts


def _corners(d: Diagram):
    inv_plus = [0] * d.n
    inv_minus = [0] * d.n
    for c in range(d.n):
        inv_plus[d.plus_row[c]] = c
        inv_minus[d.minus_row[c]] = c
    for c in range(d.n):
        for r, s in ((d.plus_row[c], +1), (d.minus_row[c], -1)):
            partner_row = d.minus_row[c] if s > 0 else d.plus_row[c]
            partner_col = inv_minus[r] if s > 0 else inv_plus[r]
            yield c, r, s, partner_row, partner_col


def cusp_counts(d: Diagram):
    """(down_plus, up_plus, down_minus, up_minus) cusp counts."""
    dp = up = dm = um = 0
    for c, r, s, partner_row, partner_col in _corners(d):
        ns = "N" if partner_row > r else "S"
        ew = "E" if partner_col > c else "W"
        kind = ns + ew
        if kind == "NW":
            if s > 0:
                up += 1
            else:
                dp += 1
        elif kind == "SE":
            if s > 0:
                dp += 1
            else:
                up += 1
        elif kind == "NE":
            if s > 0:
                dm += 1
            else:
                um += 1
        else:
            if s > 0:
                um += 1
            else:
                dm += 1
    return dp, up, dm, um


def thurston_bennequin(d: Diagram):
    """(tb_plus, tb_minus); their sum is always -n."""
    w = writhe(d)
    counts = corner_counts(d)
    tb_plus = w - (counts["NW"] + counts["SE"]) // 2
    tb_minus = -w - (counts["NE"] + counts["SW"]) // 2
    assert (counts["NW"] + counts["SE"]) % 2 == 0
    assert (counts["NE"] + counts["SW"]) % 2 == 0
    return tb_plus, tb_minus


def rotation(d: Diagram):
    """(rot_plus, rot_minus), summed over components."""
    dp, up, dm, um = cusp_counts(d)
    assert (dp - up) % 2 == 0 and (dm - um) % 2 == 0
    return (dp - up) // 2, (dm - um) // 2


def _rotation_vectors(d: Diagram):
    """Per-component rotation numbers, ordered by component index."""
    plus = [0] * d.num_components
    minus = [0] * d.num_components
    for c, r, s, partner_row, partner_col in _corners(d):
        ns = "N" if partner_row > r else "S"
        ew = "E" if partner_col > c else "W"
        kind = ns + ew
        comp = d.component_of[c]
        if kind == "NW":
            plus[comp] += -1 if s > 0 else 1
        elif kind == "SE":
            plus[comp] += 1 if s > 0 else -1
        elif kind == "NE":
            minus[comp] += 1 if s > 0 else -1
        else:
            minus[comp] += -1 if s > 0 else 1
    assert all(v % 2 == 0 for v in plus + minus)
    return (tuple(v // 2 for v in plus), tuple(v // 2 for v in minus))


def rotation_multisets(d: Diagram):
    """Per-component rotation numbers, as two sorted tuples (plus, minus)."""
    plus, minus = _rotation_vectors(d)
    return tuple(sorted(plus)), tuple(sorted(minus))


def self_linking(d: Diagram):
    """The four push-off framings keyed 'sl++', 'sl+-', 'sl-+', 'sl--'."""
    w = writhe(d)
    dp, up, dm, um = cusp_counts(d)
    return {"sl++": w - dp, "sl+-": w - up,
            "sl-+": -w - dm, "sl--": -w - um}


@dataclass(frozen=True)
class ClassicalInvariants:
    """Everything classical about one diagram in a single record.

    The per-component entries are indexed by component number; the
    component versions of tb count only the component's self-crossings,
    so for links they do not sum to the totals.
    """

    n: int
    components: int
    writhe: int
    corner_counts: tuple
    tb_plus: int
    tb_minus: int
    tb_plus_components: tuple
    tb_minus_components: tuple
    rot_plus: int
    rot_minus: int
    rot_plus_components: tuple
    rot_minus_components: tuple
    self_linking: tuple
    determinant: int


def classical_invariants(d: Diagram) -> ClassicalInvariants:
    """Compute the full ClassicalInvariants record of a diagram."""
    k = d.num_components
    inv_plus = {d.plus_row[c]: c for c in range(d.n)}
    self_writhe = [0] * k
    for c, r, sign in crossings(d):
        cv = d.component_of[c]
        ch = d.component_of[inv_plus[r]]
        if cv == ch:
            self_writhe[cv] += sign
    front = [0] * k
    back = [0] * k
    for c, r, s, partner_row, partner_col in _corners(d):
        ns = "N" if partner_row > r else "S"
        ew = "E" if partner_col > c else "W"
        comp = d.component_of[c]
        if ns + ew in ("NW", "SE"):
            front[comp] += 1
        else:
            back[comp] += 1
    assert all(v % 2 == 0 for v in front + back)
    tb_plus, tb_minus = thurston_bennequin(d)
    rot_plus, rot_minus = rotation(d)
    rot_plus_vec, rot_minus_vec = _rotation_vectors(d)
    return ClassicalInvariants(
        n=d.n, components=k, writhe=writhe(d),
        corner_counts=tuple(sorted(corner_counts(d).items())),
        tb_plus=tb_plus, tb_minus=tb_minus,
        tb_plus_components=tuple(self_writhe[i] - front[i] // 2
                                 for i in range(k)),
        tb_minus_components=tuple(-self_writhe[i] - back[i] // 2
                                  for i in range(k)),
        rot_plus=rot_plus, rot_minus=rot_minus,
        rot_plus_components=rot_plus_vec,
        rot_minus_components=rot_minus_vec,
        self_linking=tuple(sorted(self_linking(d).items())),
        determinant=determinant(d))


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _crossing_linked_classes(d: Diagram, xs) -> int:
    """Number of groups of link components joined by shared crossings."""
    uf = _UnionFind(d.num_components)
    inv_plus = {d.plus_row[c]: c for c in range(d.n)}
    for c, r, _ in xs:
        uf.union(d.component_of[c], d.component_of[inv_plus[r]])
    return len({uf.find(k) for k in range(d.num_components)})


def _bareiss_abs_det(mat) -> int:
    """|det| of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in mat]
    k = len(m)
    if k == 0:
        return 1
    prev = 1
    for i in range(k - 1):
        if m[i][i] == 0:
            for j in range(i + 1, k):
                if m[j][i] != 0:
                    m[i], m[j] = m[j], m[i]
                    break
            else:
                return 0
        for j in range(i + 1, k):
            for col in range(i + 1, k):
                m[j][col] = (m[j][col] * m[i][i]
                             - m[j][i] * m[i][col]) // prev
            m[j][i] = 0
        prev = m[i][i]
    return abs(m[k - 1][k - 1])


def determinant(d: Diagram) -> int:
    """The link determinant, via the checkerboard form of the planar picture.

    Unit cells (i, j) = [i, i+1] x [j, j+1] for i, j in -1..n-1 tile a
    neighbourhood of the diagram; two neighbours get equal colours across
    a free side and opposite colours across a side covered by an edge.
    Each crossing contributes -eta to the entry of its two white
    quadrants, eta depending on which diagonal is white (the in-front
    strand is always vertical, so this fixes the class of the crossing
    up to one global sign, which the absolute value forgets).  Diagrams
    whose components fall into several crossing-connected groups are
    split and get 0 straight away.
    """
    xs = crossings(d)
    if not xs:
        return 1 if d.num_components == 1 else 0
    if _crossing_linked_classes(d, xs) > 1:
        return 0
    n = d.n
    side = n + 1

    def cell_id(i: int, j: int) -> int:
        return (i + 1) * side + (j + 1)

    vert_cover = [set() for _ in range(n)]
    for c in range(n):
        lo, hi = sorted((d.plus_row[c], d.minus_row[c]))
        vert_cover[c] = set(range(lo, hi))
    horiz_cover = [set() for _ in range(n)]
    for r in range(n):
        clo, chi = sorted((d.plus_row.index(r), d.minus_row.index(r)))
        horiz_cover[r] = set(range(clo, chi))

    def covered_between(i, j, ni, nj):
        # Horizontal neighbours share the vertical side x = max(i, ni);
        # vertical neighbours share the horizontal side y = max(j, nj).
        if ni != i:
            x = max(i, ni)
            return 0 <= x < n and j in vert_cover[x]
        y = max(j, nj)
        return 0 <= y < n and i in horiz_cover[y]

    color = {}
    faces = _UnionFind(side * side)
    start = (-1, -1)
    color[start] = 0
    queue = [start]
    while queue:
        i, j = queue.pop()
        here = color[(i, j)]
        for ni, nj in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if not (-1 <= ni <= n - 1 and -1 <= nj <= n - 1):
                continue
            covered = covered_between(i, j, ni, nj)
            tint = here ^ (1 if covered else 0)
            if (ni, nj) in color:
                assert color[(ni, nj)] == tint, "inconsistent chessboard"
            else:
                color[(ni, nj)] = tint
                queue.append((ni, nj))
            if not covered:
                faces.union(cell_id(i, j), cell_id(ni, nj))
    assert len(color) == side * side

    white_faces = sorted({faces.find(cell_id(i, j))
                          for (i, j), tint in color.items() if tint == 0})
    index = {f: k for k, f in enumerate(white_faces)}
    size = len(white_faces)
    g = [[0] * size for _ in range(size)]
    for c, r, _ in xs:
        ne, nw = (c, r), (c - 1, r)
        sw, se = (c - 1, r - 1), (c, r - 1)
        assert color[ne] == color[sw] and color[nw] == color[se]
        assert color[ne] != color[nw], "crossing without colour change"
        if color[ne] == 0:
            eta = +1
            u, v = faces.find(cell_id(*ne)), faces.find(cell_id(*sw))
        else:
            eta = -1
            u, v = faces.find(cell_id(*nw)), faces.find(cell_id(*se))
        if u == v:
            continue
        iu, iv = index[u], index[v]
        g[iu][iv] -= eta
        g[iv][iu] -= eta
        g[iu][iu] += eta
        g[iv][iv] += eta
    outer = index[faces.find(cell_id(-1, -1))]
    minor = [[g[i][j] for j in range(size) if j != outer]
             for i in range(size) if i != outer]
    return _bareiss_abs_det(minor)


def all_invariants(d: Diagram):
    """Every invariant this module knows, in one dictionary."""
    tb_plus, tb_minus = thurston_bennequin(d)
    rot_plus, rot_minus = rotation(d)
    out = {"n": d.n, "components": d.num_components, "writhe": writhe(d),
           "tb+": tb_plus, "tb-": tb_minus,
           "rot+": rot_plus, "rot-": rot_minus}
    out.update(self_linking(d))
    out["det"] = determinant(d)
    return out


# Forced changes of a stabilization, by oriented type; destabilizations
# negate these and exchanges change nothing.
_STAB_DELTAS = {
    "->I": {"tb-": -1, "rot-": -1},
    "<-I": {"tb-": -1, "rot-": +1},
    "->II": {"tb+": -1, "rot+": -1},
    "<-II": {"tb+": -1, "rot+": +1},
}


def invariant_delta(move: Move):
    """Predicted change of each DELTA_KEYS entry under the move."""
    delta = {key: 0 for key in DELTA_KEYS}
    if move.kind == EXCHANGE:
        return delta
    sign = 1 if move.kind == STABILIZATION else -1
    assert move.kind in (STABILIZATION, DESTABILIZATION)
    for key, change in _STAB_DELTAS[move.oriented_type].items():
        delta[key] = sign * change
    delta["sl++"] = delta["tb+"] - delta["rot+"]
    delta["sl+-"] = delta["tb+"] + delta["rot+"]
    delta["sl-+"] = delta["tb-"] - delta["rot-"]
    delta["sl--"] = delta["tb-"] + delta["rot-"]
    return delta

"""Exhaustive diagram census and the non-simplifiability survey.

Every combinatorial type of size n is a pair of permutations with no
common fixed position, taken up to torus shifts (and up to component
renumbering, for multi-component diagrams).  Keys compare plus-row
bytes first, so only plus permutations that are lexicographically least
within their own shift orbit can start a canonical key; for those the
orbit stabilizer is almost always trivial, making every relative
derangement self-canonical with no further minimization.  The minus
permutation runs over tau o plus with tau fixed-point-free, and the
diagram's column cycles are conjugate to tau, so component counts come
for free.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .exchange import CapExceeded, exchange_class, is_simplifiable
from .grid_core import (Diagram, canonical_key, decode_key,
                        default_numbering, validate)
from .invariants import all_invariants, determinant
from .moves import ALL_MOVES
from .search import SearchCaps, _bidirectional, default_caps

HARD_SIZE_LIMIT = 8


def canonical_plus_perms(n: int):
    """Permutations that are lex-least in their shift orbit, with stabilizers.

    Returns a list of (perm, stabilizer) where stabilizer lists the
    (row_shift, col_shift) pairs fixing the permutation; (0, 0) always
    belongs to it.
    """
    out = []
    for perm in itertools.permutations(range(n)):
        best = perm
        stab = []
        smallest = True
        for sc in range(n):
            rotated = perm[sc:] + perm[:sc]
            for sr in range(n):
                cand = tuple((v - sr) % n for v in rotated)
                if cand < best:
                    smallest = False
                    break
                if cand == best:
                    stab.append((sr, sc))
            if not smallest:
                break
        if smallest:
            out.append((perm, stab))
    return out


def fixed_point_free_perms(n: int):
    """All fixed-point-free permutations of 0..n-1 with their cycle counts."""
    out = []
    for perm in itertools.permutations(range(n)):
        if any(perm[i] == i for i in range(n)):
            continue
        seen = [False] * n
        cycles = 0
        for i in range(n):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
        out.append((perm, cycles))
    return out


def _self_canonical_key(plus, minus, trivial_stabilizer: bool):
    """Canonical (numbering-blind) key of the pair, or None when the
    canonical representative is a different shift of it."""
    n = len(plus)
    comp = default_numbering(plus, minus)
    zero_shift = bytes((n,)) + bytes(plus) + bytes(minus) + bytes(comp)
    if trivial_stabilizer:
        return zero_shift
    d = validate(plus, minus, comp)
    key = canonical_key(d, ignore_numbering=True)
    return zero_shift if key == zero_shift else None


def enumerate_all(n: int, components: int | None = None,
                  plus_perms=None):
    """Yield every canonical key of size exactly n, each exactly once.

    Multi-component keys are canonical ignoring component numbering, so
    renumberings do not produce duplicates.  components restricts to
    diagrams with that many link components.  plus_perms optionally
    injects a pre-sharded subset of canonical_plus_perms(n).
    """
    if not 2 <= n <= HARD_SIZE_LIMIT:
        raise ValueError("census size must be between 2 and %d, got %d"
                         % (HARD_SIZE_LIMIT, n))
    taus = [(tau, cyc) for tau, cyc in fixed_point_free_perms(n)
            if components is None or cyc == components]
    if plus_perms is None:
        plus_perms = canonical_plus_perms(n)
    for plus, stab in plus_perms:
        trivial = len(stab) == 1
        for tau, _ in taus:
            minus = tuple(tau[plus[c]] for c in range(n))
            key = _self_canonical_key(plus, minus, trivial)
            if key is not None:
                yield key


def enumerate_sharded(n: int, components: int | None = None,
                      threads: int = 1):
    """Sorted canonical keys of size n, sharded across worker threads.

    The canonical plus permutations are split into contiguous chunks,
    each chunk enumerated by one worker, and the union sorted before it
    is returned, so the output bytes never depend on the thread count.
    """
    perms = canonical_plus_perms(n)
    if threads <= 1 or len(perms) <= 1:
        return sorted(enumerate_all(n, components=components,
                                    plus_perms=perms))
    workers = min(threads, len(perms))
    step = -(-len(perms) // workers)
    chunks = [perms[k:k + step] for k in range(0, len(perms), step)]

    def run(chunk):
        return list(enumerate_all(n, components=components,
                                  plus_perms=chunk))

    keys = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(run, chunks):
            keys.extend(part)
    return sorted(keys)


@dataclass(frozen=True)
class KnotFilter:
    """Cheap knot-type bucket: determinant and component count, plus an
    optional anchor diagram that certifies bucket membership by a
    bounded full-move search."""

    determinant: int
    components: int = 1
    anchor: Diagram | None = None
    label: str = ""

    def name(self) -> str:
        return self.label or "det=%d,components=%d" % (self.determinant,
                                                       self.components)


@dataclass(frozen=True)
class CensusRecord:
    key: bytes
    n: int
    invariants: dict
    fingerprint: str
    simplifiable: bool
    bucket: str


@dataclass(frozen=True)
class CensusResult:
    records: tuple
    unresolved: tuple
    bucket: str
    n_max: int
    report: dict = field(default_factory=dict)


ANCHOR_NODE_CAP = 2000


def anchor_caps(n_max: int, max_nodes: int = ANCHOR_NODE_CAP) -> SearchCaps:
    """Node-bounded caps for anchor searches.

    No time cap: a pure node budget makes the anchored/unresolved split
    a deterministic function of the inputs, independent of machine speed
    and thread count.
    """
    return SearchCaps(max_grid_size=n_max + 1, max_nodes=max_nodes,
                      max_seconds=math.inf)


def nonsimplifiable_census(knot: KnotFilter, n_max: int,
                           caps: SearchCaps | None = None,
                           node_cap: int = 10 ** 6,
                           threads: int = 1) -> CensusResult:
    """All non-simplifiable canonical types in the knot bucket, n <= n_max.

    Records are certified members: when the filter carries an anchor,
    each exchange class must be connected to it by a bounded search and
    classes the search cannot connect are reported as unresolved rather
    than counted.  Cap overruns are likewise reported per diagram, never
    silently dropped.  The anchor search runs once per exchange class,
    from the class representative, so the outcome does not depend on
    which member the scan happened to reach first.
    """
    if caps is None:
        caps = anchor_caps(n_max)
    records = []
    unresolved = []
    certified_classes = {}
    scanned = 0
    for n in range(2, n_max + 1):
        for key in enumerate_sharded(n, components=knot.components,
                                     threads=threads):
            scanned += 1
            d = decode_key(key)
            if determinant(d) != knot.determinant:
                continue
            try:
                if is_simplifiable(d, node_cap):
                    continue
                cls = exchange_class(d, node_cap)
            except CapExceeded as exc:
                unresolved.append((key, "cap exceeded: %s" % exc))
                continue
            fp = cls.fingerprint
            if fp not in certified_classes:
                rep = decode_key(cls.representative)
                certified_classes[fp] = _anchor_status(rep, knot, caps)
            status = certified_classes[fp]
            if status == "anchored":
                records.append(CensusRecord(
                    key=key, n=n, invariants=all_invariants(d),
                    fingerprint=fp, simplifiable=False,
                    bucket=knot.name()))
            else:
                unresolved.append((key, status))
    records.sort(key=lambda rec: rec.key)
    unresolved.sort()
    return CensusResult(records=tuple(records), unresolved=tuple(unresolved),
                        bucket=knot.name(), n_max=n_max,
                        report={"scanned": scanned,
                                "classes": len(certified_classes),
                                "caps": caps.describe()})


def _anchor_status(d: Diagram, knot: KnotFilter, caps: SearchCaps) -> str:
    if knot.anchor is None:
        return "anchored"
    chain, exhausted, _ = _bidirectional(d, knot.anchor, ALL_MOVES, caps)
    if chain is not None:
        return "anchored"
    if exhausted:
        return "unresolved: anchor unreachable within grid size %d" \
            % caps.max_grid_size
    return "unresolved: anchor search hit caps"

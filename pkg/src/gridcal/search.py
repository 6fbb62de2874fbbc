"""Type-restricted reachability and equivalence searches.

The front-preserving ('+', no type II stabilizations) and the
back-preserving ('-', no type I) move families, as well as the four
transverse families (one excluded oriented type each), are all closed
under move inversion.  Equivalence within such a family is therefore
searched bidirectionally: two breadth-first enumerations over canonical
representatives, alternating expansion on the smaller frontier, meeting
in the middle.  All searches are bounded by explicit caps and report
honestly whether they were exhaustive within the size bound.

Chains run from canonical representative to canonical representative:
each line is a move in the coordinates of the current representative,
and replaying means apply, then re-canonicalize, then read the next
line.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .exchange import CapExceeded, ExchangeClass, exchange_class
from .grid_core import (Diagram, canonical_form, decode_key, encode_key,
                        key_hex)
from .invariants import (determinant, rotation_multisets, self_linking,
                         thurston_bennequin)
from .moves import (ALL_MOVES, Move, MoveFilter, STABILIZATION, apply_move,
                    enumerate_moves, inverse_move, legendrian_filter,
                    parse_move, transport_move, transverse_filter)

DEFAULT_MAX_NODES = 10 ** 6
DEFAULT_MAX_SECONDS = 60.0


@dataclass(frozen=True)
class SearchCaps:
    max_grid_size: int
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = DEFAULT_MAX_SECONDS

    def describe(self) -> dict:
        return {"max_grid_size": self.max_grid_size,
                "max_nodes": self.max_nodes,
                "max_seconds": self.max_seconds}


def default_caps(*diagrams: Diagram, extra: int = 3,
                 max_nodes: int = DEFAULT_MAX_NODES,
                 max_seconds: float = DEFAULT_MAX_SECONDS) -> SearchCaps:
    top = max(d.n for d in diagrams)
    return SearchCaps(max_grid_size=top + extra, max_nodes=max_nodes,
                      max_seconds=max_seconds)


@dataclass
class ReachableSet:
    """Closure of one diagram under filtered moves, with parent links.

    parents maps each reached canonical key to (parent key, move line)
    and the start key to None.  exhaustive means the closure is complete
    within max_grid_size: neither the node budget nor the time budget
    cut it short.
    """

    start_key: bytes
    parents: dict
    exhaustive: bool
    nodes: int
    seconds: float

    @property
    def keys(self):
        return self.parents.keys()

    def chain_to(self, key: bytes):
        """Move lines from the start representative to the given key."""
        return _chain_to(self.parents, key)


def _chain_to(parents: dict, key: bytes):
    lines = []
    while True:
        entry = parents[key]
        if entry is None:
            break
        key, line = entry
        lines.append(line)
    lines.reverse()
    return lines


class _Budget:
    """Shared node/time budget across one search (both sides, if two)."""

    def __init__(self, caps: SearchCaps):
        self.caps = caps
        self.nodes = 0
        self.t0 = time.monotonic()
        self.node_truncated = False
        self.time_truncated = False

    def admit(self) -> bool:
        if self.nodes >= self.caps.max_nodes:
            self.node_truncated = True
            return False
        self.nodes += 1
        return True

    def out_of_time(self) -> bool:
        if time.monotonic() - self.t0 > self.caps.max_seconds:
            self.time_truncated = True
            return True
        return False

    @property
    def truncated(self) -> bool:
        return self.node_truncated or self.time_truncated

    @property
    def seconds(self) -> float:
        return time.monotonic() - self.t0


class _Side:
    """One breadth-first enumeration over canonical representatives."""

    def __init__(self, d: Diagram, move_filter: MoveFilter,
                 caps: SearchCaps, budget: _Budget):
        self.filter = move_filter
        self.caps = caps
        self.budget = budget
        rep, _ = canonical_form(d)
        self.start_key = encode_key(rep)
        self.parents = {self.start_key: None}
        self.frontier = [(self.start_key, rep)]
        budget.admit()

    def step(self):
        """Expand one layer; returns the newly discovered keys (sorted)."""
        if not self.frontier or self.budget.out_of_time():
            self.frontier = []
            return []
        self.frontier.sort(key=lambda item: item[0])
        fresh = []
        for key, diagram in self.frontier:
            node_filter = self.filter
            if diagram.n + 1 > self.caps.max_grid_size:
                allowed = node_filter.kinds
                if allowed is None:
                    allowed = frozenset(
                        {"exchange", "stabilization", "destabilization"})
                node_filter = replace(
                    node_filter, kinds=allowed - {STABILIZATION})
            for mv, out in enumerate_moves(diagram, node_filter):
                rep, _ = canonical_form(out)
                out_key = encode_key(rep)
                if out_key in self.parents:
                    continue
                if not self.budget.admit():
                    self.frontier = []
                    return [k for k, _ in fresh]
                self.parents[out_key] = (key, mv.serialize())
                fresh.append((out_key, rep))
        self.frontier = fresh
        return [k for k, _ in fresh]

    def chain_to(self, key: bytes):
        return _chain_to(self.parents, key)

    @property
    def done(self) -> bool:
        return not self.frontier

    def result(self) -> ReachableSet:
        return ReachableSet(start_key=self.start_key, parents=self.parents,
                            exhaustive=not self.budget.truncated,
                            nodes=self.budget.nodes,
                            seconds=self.budget.seconds)


def reachable_set(d: Diagram, move_filter: MoveFilter = ALL_MOVES,
                  caps: SearchCaps | None = None) -> ReachableSet:
    """Everything reachable from d by filtered moves within the caps."""
    if caps is None:
        caps = default_caps(d)
    budget = _Budget(caps)
    side = _Side(d, move_filter, caps, budget)
    while not side.done:
        side.step()
    return side.result()


def _reversed_chain(side: _Side, key: bytes):
    """Move lines from `key`'s representative back to the side's start."""
    lines = []
    while True:
        entry = side.parents[key]
        if entry is None:
            break
        parent_key, line = entry
        parent = decode_key(parent_key)
        mv = parse_move(line, parent)
        out = apply_move(parent, mv)
        rep, (sr, sc) = canonical_form(out)
        assert encode_key(rep) == key
        inv = transport_move(inverse_move(parent, mv), rep.n, sr, sc)
        lines.append(inv.serialize())
        key = parent_key
    return lines


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equivalence search.

    status is one of 'equivalent', 'distinct', 'distinct_within_bound'
    and 'unknown'.  Equivalent verdicts carry a replayable chain;
    distinct ones carry the witnessing invariant; the bounded and
    unknown ones carry the caps report.
    """

    status: str
    chain: tuple = ()
    witness: tuple | None = None
    report: dict = field(default_factory=dict)

    @property
    def is_equivalent(self) -> bool:
        return self.status == "equivalent"

    @property
    def is_distinct(self) -> bool:
        return self.status in ("distinct", "distinct_within_bound")


def _bidirectional(d1: Diagram, d2: Diagram, move_filter: MoveFilter,
                   caps: SearchCaps):
    """(chain or None, both_exhausted, report) for filter-equivalence.

    Only valid for move filters closed under inversion, which all the
    filters this module builds are.
    """
    budget = _Budget(caps)
    side_a = _Side(d1, move_filter, caps, budget)
    side_b = _Side(d2, move_filter, caps, budget)
    meet = min(set(side_a.parents) & set(side_b.parents), default=None)
    while meet is None and not (side_a.done and side_b.done):
        if side_b.done:
            side = side_a
        elif side_a.done:
            side = side_b
        else:
            side = (side_a if len(side_a.frontier) <= len(side_b.frontier)
                    else side_b)
        fresh = side.step()
        other = side_b if side is side_a else side_a
        hits = [k for k in fresh if k in other.parents]
        if hits:
            meet = min(hits)
    report = {"nodes": budget.nodes,
              "seconds": round(budget.seconds, 3),
              "exhaustive": not budget.truncated}
    report.update(caps.describe())
    if meet is None:
        return None, not budget.truncated, report
    chain = side_a.chain_to(meet) + _reversed_chain(side_b, meet)
    return chain, True, report


def _verdict_for(d1: Diagram, d2: Diagram, move_filter: MoveFilter,
                 witnesses, caps: SearchCaps) -> Verdict:
    for name, fn in witnesses:
        v1, v2 = fn(d1), fn(d2)
        if v1 != v2:
            return Verdict(status="distinct", witness=(name, v1, v2))
    chain, exhausted, report = _bidirectional(d1, d2, move_filter, caps)
    report["filter"] = move_filter.token()
    if chain is not None:
        return Verdict(status="equivalent", chain=tuple(chain),
                       report=report)
    if exhausted:
        return Verdict(status="distinct_within_bound", report=report)
    return Verdict(status="unknown", report=report)


def equiv_legendrian(d1: Diagram, d2: Diagram, sign: str = "+",
                     caps: SearchCaps | None = None) -> Verdict:
    """Are the diagrams related by moves avoiding the opposite type?

    sign '+' permits exchanges and type I (de)stabilizations, sign '-'
    exchanges and type II.
    """
    if caps is None:
        caps = default_caps(d1, d2)
    tb_index = 0 if sign == "+" else 1
    witnesses = [
        ("components", lambda d: d.num_components),
        ("tb" + sign, lambda d: thurston_bennequin(d)[tb_index]),
        ("rot" + sign + " multiset",
         lambda d: rotation_multisets(d)[tb_index]),
        ("det", determinant),
    ]
    return _verdict_for(d1, d2, legendrian_filter(sign), witnesses, caps)


def equiv_transverse(d1: Diagram, d2: Diagram, quadrant: str = "++",
                     caps: SearchCaps | None = None) -> Verdict:
    """Equivalence avoiding the quadrant's one excluded oriented type."""
    if caps is None:
        caps = default_caps(d1, d2)
    key = "sl" + quadrant
    witnesses = [
        ("components", lambda d: d.num_components),
        (key, lambda d: self_linking(d)[key]),
        ("det", determinant),
    ]
    return _verdict_for(d1, d2, transverse_filter(quadrant), witnesses, caps)


@dataclass(frozen=True)
class MiddleResult:
    """A diagram reachable from the first input by type-I-legal moves
    and from the second by type-II-legal moves, when one was found."""

    diagram: Diagram | None
    chain_from_first: tuple = ()
    chain_from_second: tuple = ()
    exhaustive: bool = False
    report: dict = field(default_factory=dict)


def find_middle(d1: Diagram, d2: Diagram,
                caps: SearchCaps | None = None) -> MiddleResult:
    """Alternating bidirectional hunt for a common middle diagram."""
    if caps is None:
        caps = default_caps(d1, d2)
    budget = _Budget(caps)
    side_a = _Side(d1, legendrian_filter("+"), caps, budget)
    side_b = _Side(d2, legendrian_filter("-"), caps, budget)
    meet = min(set(side_a.parents) & set(side_b.parents), default=None)
    while meet is None and not (side_a.done and side_b.done):
        if side_b.done:
            side = side_a
        elif side_a.done:
            side = side_b
        else:
            side = (side_a if len(side_a.frontier) <= len(side_b.frontier)
                    else side_b)
        fresh = side.step()
        other = side_b if side is side_a else side_a
        hits = [k for k in fresh if k in other.parents]
        if hits:
            meet = min(hits)
    report = {"nodes": budget.nodes, "seconds": round(budget.seconds, 3)}
    report.update(caps.describe())
    if meet is None:
        return MiddleResult(diagram=None, exhaustive=not budget.truncated,
                            report=report)
    return MiddleResult(diagram=decode_key(meet),
                        chain_from_first=tuple(side_a.chain_to(meet)),
                        chain_from_second=tuple(side_b.chain_to(meet)),
                        exhaustive=True, report=report)


@dataclass(frozen=True)
class LambdaResult:
    """Exchange classes certified to link the two inputs' front types."""

    classes: tuple
    fingerprints: frozenset
    truncated: bool
    unresolved_keys: tuple = ()
    report: dict = field(default_factory=dict)


def lambda_classes(d1: Diagram, d2: Diagram,
                   caps: SearchCaps | None = None) -> LambdaResult:
    """Exchange classes whose '+' front matches d1's and '-' front d2's.

    Candidates are the canonical keys in both filtered closures, so
    every returned class carries certificates by construction; the
    truncated flag warns that more classes may exist beyond the caps.
    """
    if caps is None:
        caps = default_caps(d1, d2)
    plus = reachable_set(d1, legendrian_filter("+"), caps)
    minus = reachable_set(d2, legendrian_filter("-"), caps)
    shared = sorted(set(plus.parents) & set(minus.parents))
    classes = []
    unresolved = []
    seen = set()
    for key in shared:
        if key in seen:
            continue
        try:
            cls = exchange_class(decode_key(key), node_cap=caps.max_nodes)
        except CapExceeded:
            unresolved.append(key)
            continue
        seen.update(cls.keys)
        classes.append(cls)
    classes.sort(key=lambda cls: cls.representative)
    report = {"plus_nodes": plus.nodes, "minus_nodes": minus.nodes,
              "shared_keys": len(shared)}
    report.update(caps.describe())
    return LambdaResult(
        classes=tuple(classes),
        fingerprints=frozenset(cls.fingerprint for cls in classes),
        truncated=not (plus.exhaustive and minus.exhaustive),
        unresolved_keys=tuple(unresolved),
        report=report)


def pad_diagram(d: Diagram, oriented_type: str, count: int) -> Diagram:
    """Stabilize `count` times with the given oriented type.

    Deterministic: each step applies the least stabilization of that
    type on the current canonical representative.
    """
    current, _ = canonical_form(d)
    pick = MoveFilter(kinds=frozenset({STABILIZATION}),
                      oriented_types=frozenset({oriented_type}))
    for _ in range(count):
        pairs = enumerate_moves(current, pick)
        if not pairs:
            raise ValueError("no %s stabilization available at size %d"
                             % (oriented_type, current.n))
        _, out = pairs[0]
        current, _ = canonical_form(out)
    return current


class MalformedCertificate(ValueError):
    """The certificate text itself is not well formed."""


class ReplayFailed(ValueError):
    """The certificate parses but its chain does not check out."""


def certificate_text(d1: Diagram, d2: Diagram, verdict: Verdict) -> str:
    """Serialize an Equivalent verdict as a replayable text certificate."""
    if not verdict.is_equivalent:
        raise ValueError("only equivalent verdicts carry certificates")
    rep1, _ = canonical_form(d1)
    rep2, _ = canonical_form(d2)
    lines = [
        "from %s" % key_hex(encode_key(rep1)),
        "to %s" % key_hex(encode_key(rep2)),
        "filter %s" % verdict.report.get("filter", "all"),
        "moves %d" % len(verdict.chain),
    ]
    lines.extend(verdict.chain)
    return "\n".join(lines) + "\n"


def replay_certificate(text: str):
    """Re-validate a certificate; returns (start key, end key, filter token).

    Raises MalformedCertificate when the text is not a certificate at
    all and ReplayFailed when the chain does not replay, a move violates
    the declared filter, or the end key disagrees.
    """
    from .grid_core import DiagramError, key_from_hex
    from .moves import filter_from_token
    header = {}
    move_lines = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tag, _, rest = line.partition(" ")
        if tag in ("from", "to", "filter", "moves") and tag not in header:
            header[tag] = rest
        else:
            move_lines.append(line)
    for tag in ("from", "to", "filter", "moves"):
        if tag not in header:
            raise MalformedCertificate(
                "certificate is missing its %r line" % tag)
    try:
        declared = int(header["moves"])
    except ValueError:
        raise MalformedCertificate("moves count %r is not an integer"
                                   % header["moves"]) from None
    if len(move_lines) != declared:
        raise MalformedCertificate(
            "certificate declares %d moves but carries %d"
            % (declared, len(move_lines)))
    try:
        move_filter = filter_from_token(header["filter"])
        start = key_from_hex(header["from"])
        to_key = key_from_hex(header["to"])
        current = decode_key(start)
    except (ValueError, DiagramError) as err:
        raise MalformedCertificate(str(err)) from None
    for line in move_lines:
        try:
            mv = parse_move(line, current)
        except (ValueError, DiagramError) as err:
            raise ReplayFailed("move %r does not apply: %s"
                               % (line, err)) from None
        if not move_filter.allows(mv):
            raise ReplayFailed("move %r violates the filter %s"
                               % (line, header["filter"]))
        current, _ = canonical_form(apply_move(current, mv))
    end = encode_key(current)
    if end != to_key:
        raise ReplayFailed("chain replays to %s, certificate claims %s"
                           % (key_hex(end), header["to"]))
    return (start, end, header["filter"])

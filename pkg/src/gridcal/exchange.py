"""Exchange classes: closures of diagrams under exchange moves.

Exchanges preserve the grid size, so every exchange class is finite and
can be computed outright; the node cap is a safety valve, not a search
bound.  Class members all present the same link and share every
classical invariant, which the tests lean on heavily.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .grid_core import Diagram, canonical_form, decode_key, encode_key
from .moves import (DESTABILIZATION, EXCHANGES_ONLY, _candidate_moves,
                    _destab_candidates, enumerate_moves)

DEFAULT_NODE_CAP = 10 ** 7


class CapExceeded(RuntimeError):
    """A closure hit its node cap before completing."""

    def __init__(self, visited: int):
        super().__init__("closure incomplete after %d diagrams" % visited)
        self.visited = visited


@dataclass(frozen=True)
class ExchangeClass:
    keys: frozenset
    representative: bytes
    size_n: int
    simplifiable: bool

    @property
    def fingerprint(self) -> str:
        return class_fingerprint(self.keys)

    def to_jsonl(self) -> str:
        header = json.dumps({
            "representative": self.representative.hex(),
            "n": self.size_n,
            "size": len(self.keys),
            "simplifiable": self.simplifiable,
            "fingerprint": self.fingerprint,
        }, sort_keys=True)
        return "\n".join([header] + [k.hex() for k in sorted(self.keys)])

    @staticmethod
    def from_jsonl(text: str) -> "ExchangeClass":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = json.loads(lines[0])
        keys = frozenset(bytes.fromhex(ln) for ln in lines[1:])
        cls = ExchangeClass(keys=keys,
                            representative=bytes.fromhex(
                                header["representative"]),
                            size_n=header["n"],
                            simplifiable=header["simplifiable"])
        if len(keys) != header["size"]:
            raise ValueError("key count disagrees with header")
        if cls.representative != min(keys):
            raise ValueError("representative is not the least key")
        if cls.fingerprint != header["fingerprint"]:
            raise ValueError("fingerprint disagrees with key set")
        return cls


def class_fingerprint(keys) -> str:
    """Order-independent 128-bit digest of a key set."""
    h = hashlib.blake2b(digest_size=16)
    for k in sorted(keys):
        h.update(k)
    return h.hexdigest()


def admits_destabilization(d: Diagram) -> bool:
    for moves, _ in _candidate_moves(d, DESTABILIZATION,
                                     _destab_candidates(d)):
        if moves:
            return True
    return False


def _closure(d: Diagram, node_cap: int, stop_when_simplifiable: bool):
    """BFS over exchange moves; returns (seen key set, simplifiable flag).

    Raises CapExceeded when the closure outgrows node_cap, except that
    with stop_when_simplifiable the walk may conclude early on a
    destabilizable member regardless of the cap.
    """
    rep, _ = canonical_form(d)
    start = encode_key(rep)
    seen = {start}
    frontier = [(start, rep)]
    simplifiable = admits_destabilization(rep)
    if simplifiable and stop_when_simplifiable:
        return seen, True
    while frontier:
        frontier.sort(key=lambda item: item[0])
        next_frontier = []
        for _, diagram in frontier:
            for _, out in enumerate_moves(diagram, EXCHANGES_ONLY):
                out_rep, _ = canonical_form(out)
                key = encode_key(out_rep)
                if key in seen:
                    continue
                if len(seen) >= node_cap:
                    raise CapExceeded(len(seen))
                seen.add(key)
                if not simplifiable and admits_destabilization(out_rep):
                    simplifiable = True
                    if stop_when_simplifiable:
                        return seen, True
                next_frontier.append((key, out_rep))
        frontier = next_frontier
    return seen, simplifiable


def exchange_class(d: Diagram, node_cap: int = DEFAULT_NODE_CAP
                   ) -> ExchangeClass:
    """The complete exchange class of d.  Raises CapExceeded if truncated."""
    seen, simplifiable = _closure(d, node_cap, stop_when_simplifiable=False)
    return ExchangeClass(keys=frozenset(seen), representative=min(seen),
                         size_n=d.n, simplifiable=simplifiable)


def is_simplifiable(d: Diagram, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Whether some exchange-equivalent diagram admits a destabilization.

    May conclude True before the closure is complete; False requires the
    full closure and can raise CapExceeded.
    """
    _, simplifiable = _closure(d, node_cap, stop_when_simplifiable=True)
    return simplifiable


def class_members(cls: ExchangeClass):
    """Decode every key of the class back into a Diagram."""
    return [decode_key(k) for k in sorted(cls.keys)]

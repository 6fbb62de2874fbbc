"""Acceptance checks: censuses, move calculus, searches, certificates,
and table verification, each at its stated budget."""

import math
import random
import time
from collections import deque

from gridcal import (
    DELTA_KEYS,
    EXCHANGES_ONLY,
    FIGURE_EIGHT_6,
    STABILIZATION,
    TREFOIL_5,
    UNKNOT_2,
    AtlasTable,
    KnotFilter,
    MoveFilter,
    SearchCaps,
    all_invariants,
    apply_move,
    atlas_verify,
    canonical_form,
    canonical_key,
    certificate_text,
    decode_key,
    default_caps,
    determinant,
    enumerate_all,
    enumerate_moves,
    equiv_legendrian,
    equiv_transverse,
    exchange_class,
    find_middle,
    flip_orientation,
    invariant_delta,
    key_from_hex,
    legendrian_filter,
    nonsimplifiable_census,
    pad_diagram,
    parse_move,
    replay_certificate,
    rotation,
    self_linking,
    shift,
    thurston_bennequin,
    transverse_filter,
    validate,
)
from gridcal.cli import main
from oracles import dfs_exchange_closure, random_diagram, random_walk

T34 = validate(tuple(range(7)), tuple((c + 3) % 7 for c in range(7)))

STABS_ONLY = MoveFilter(kinds=(STABILIZATION,))

CHEAP_KEYS = tuple(k for k in DELTA_KEYS if k != "det")


def cheap_invariants(d):
    """The move-tracked invariants except the determinant."""
    tb_plus, tb_minus = thurston_bennequin(d)
    rot_plus, rot_minus = rotation(d)
    doc = {"tb+": tb_plus, "tb-": tb_minus, "rot+": rot_plus,
           "rot-": rot_minus, "components": d.num_components}
    doc.update(self_linking(d))
    return doc


def replay_chain(start, lines, move_filter=None):
    """Walk serialized moves from the start's representative."""
    rep, _ = canonical_form(start)
    for line in lines:
        mv = parse_move(line, rep)
        if move_filter is not None:
            assert move_filter.allows(mv)
        rep, _ = canonical_form(apply_move(rep, mv))
    return canonical_key(rep)


def exchange_connected(key_a, key_b, node_cap=10 ** 5):
    """Bidirectional exchange-graph search between two canonical keys."""
    if key_a == key_b:
        return True
    sides = ({key_a: None}, {key_b: None})
    queues = (deque([key_a]), deque([key_b]))
    while queues[0] or queues[1]:
        if len(sides[0]) + len(sides[1]) > node_cap:
            return False
        pick = 0 if (queues[0] and (not queues[1]
                     or len(sides[0]) <= len(sides[1]))) else 1
        seen, other = sides[pick], sides[1 - pick]
        key = queues[pick].popleft()
        for mv, out in enumerate_moves(decode_key(key), EXCHANGES_ONLY):
            nk = canonical_key(out)
            if nk in other:
                return True
            if nk not in seen:
                seen[nk] = None
                queues[pick].append(nk)
    return False


def middle_for(a, b):
    """find_middle under escalating grid bounds, final bound eight."""
    for size in (6, 7, 8):
        caps = SearchCaps(max_grid_size=size, max_nodes=10 ** 5,
                          max_seconds=120.0)
        result = find_middle(a, b, caps)
        if result.diagram is not None:
            return result
    return None


def check_middle(a, b):
    result = middle_for(a, b)
    assert result is not None
    mid = canonical_key(result.diagram)
    ia, ib = cheap_invariants(a), cheap_invariants(b)
    im = cheap_invariants(result.diagram)
    assert (im["tb+"], im["rot+"]) == (ia["tb+"], ia["rot+"])
    assert (im["tb-"], im["rot-"]) == (ib["tb-"], ib["rot-"])
    assert replay_chain(a, result.chain_from_first,
                        legendrian_filter("+")) == mid
    assert replay_chain(b, result.chain_from_second,
                        legendrian_filter("-")) == mid


def test_unknot_census_within_a_minute():
    """Sizes up to 6 hold exactly one non-simplifiable unknot type."""
    knot = KnotFilter(determinant=1, components=1, anchor=UNKNOT_2,
                      label="unknot")
    start = time.monotonic()
    result = nonsimplifiable_census(knot, n_max=6)
    elapsed = time.monotonic() - start
    assert [rec.key for rec in result.records] == \
        [key_from_hex("02000101000000")]
    assert result.unresolved == ()
    assert elapsed < 60.0


def test_trefoil_census_two_chiralities():
    """Sizes up to 7 hold exactly the two mirror trefoil types."""
    knot = KnotFilter(determinant=3, components=1, anchor=TREFOIL_5,
                      label="trefoil")
    start = time.monotonic()
    result = nonsimplifiable_census(knot, n_max=7)
    elapsed = time.monotonic() - start
    keys = [rec.key for rec in result.records]
    assert keys == [key_from_hex("05000102030402030400010000000000"),
                    key_from_hex("05000102030403040001020000000000")]
    assert canonical_key(flip_orientation(decode_key(keys[0]))) == keys[1]
    assert all_invariants(decode_key(keys[0]))["rot+"] == -1
    assert all_invariants(decode_key(keys[1]))["rot+"] == 1
    assert len(result.unresolved) == 6
    assert elapsed < 600.0


def test_figure_eight_census_two_types():
    """Sizes up to 7 hold exactly two non-simplifiable fig-8 types."""
    knot = KnotFilter(determinant=5, components=1, anchor=FIGURE_EIGHT_6,
                      label="figure-eight")
    start = time.monotonic()
    result = nonsimplifiable_census(knot, n_max=7)
    elapsed = time.monotonic() - start
    keys = [rec.key for rec in result.records]
    assert keys == [
        key_from_hex("06000103020504020500040301000000000000"),
        key_from_hex("06000104050302030500020104000000000000")]
    assert canonical_key(flip_orientation(decode_key(keys[0]))) == keys[1]
    assert len(result.unresolved) == 36
    assert elapsed < 600.0


def test_move_deltas_exact():
    """Observed invariant changes equal the predicted deltas exactly."""
    rng = random.Random(401)
    for trial in range(10000):
        d = random_diagram(rng, rng.randint(2, 7))
        before = cheap_invariants(d)
        for mv, out in enumerate_moves(d):
            after = cheap_invariants(out)
            predicted = invariant_delta(mv)
            for key in CHEAP_KEYS:
                assert after[key] - before[key] == predicted[key], (key, mv)


def test_moves_preserve_determinant():
    """The determinant delta is zero for every legal move."""
    rng = random.Random(402)
    for trial in range(300):
        d = random_diagram(rng, rng.randint(2, 7))
        det = determinant(d)
        for mv, out in enumerate_moves(d):
            assert invariant_delta(mv)["det"] == 0
            assert determinant(out) == det, mv


def test_stabilizations_share_exchange_class():
    """Same-type same-component stabilizations land in one class."""
    rng = random.Random(501)
    groups_checked = 0
    for trial in range(1000):
        d = random_diagram(rng, rng.randint(2, 6))
        groups = {}
        for mv, out in enumerate_moves(d, STABS_ONLY):
            groups.setdefault((mv.oriented_type, mv.component),
                              []).append(out)
        for outs in groups.values():
            keys = sorted({canonical_key(o) for o in outs})
            if len(keys) < 2:
                continue
            groups_checked += 1
            for a, b in zip(keys, keys[1:]):
                assert exchange_connected(a, b)
    assert groups_checked > 1000


def test_middles_join_front_families():
    """A middle diagram joining both front families is always found."""
    rng = random.Random(601)
    for trial in range(100):
        a = random_walk(rng, UNKNOT_2, steps=8, max_size=5)
        b = random_walk(rng, UNKNOT_2, steps=8, max_size=5)
        check_middle(a, b)
    for trial in range(50):
        base = TREFOIL_5 if trial % 2 == 0 else flip_orientation(TREFOIL_5)
        a = shift(base, rng.randrange(5), rng.randrange(5))
        b = shift(base, rng.randrange(5), rng.randrange(5))
        check_middle(a, b)


def test_exchange_closures_match_oracle():
    """Library closures equal an independent DFS on every small type."""
    for n in range(2, 6):
        for key in enumerate_all(n):
            d = decode_key(key)
            assert exchange_class(d).keys == dfs_exchange_closure(d)


def test_certificates_respect_filters():
    """Certificates replay and never contain excluded move types."""
    cases = (("+", None, "->I", ("->II", "<-II")),
             ("-", None, "->II", ("->I", "<-I")),
             (None, "++", "->II", ("<-II",)),
             (None, "+-", "<-II", ("->II",)),
             (None, "-+", "->I", ("<-I",)),
             (None, "--", "<-I", ("->I",)))
    for sign, quadrant, pad_type, excluded in cases:
        a = UNKNOT_2
        b = pad_diagram(UNKNOT_2, pad_type, 1)
        caps = default_caps(a, b)
        if sign is not None:
            verdict = equiv_legendrian(a, b, sign, caps)
            token = legendrian_filter(sign).token()
        else:
            verdict = equiv_transverse(a, b, quadrant, caps)
            token = transverse_filter(quadrant).token()
        assert verdict.status == "equivalent", (sign, quadrant)
        assert len(verdict.chain) >= 1
        text = certificate_text(a, b, verdict)
        start, end, tok = replay_certificate(text)
        assert start == canonical_key(a)
        assert end == canonical_key(b)
        assert tok == token
        for line in text.splitlines()[4:]:
            assert line.split()[1] not in excluded, (line, excluded)


def test_census_output_thread_agnostic(tmp_path, capsys):
    """Census files are byte-identical across worker counts."""
    plain = {}
    knotted = {}
    for threads in (1, 4, 16):
        p = tmp_path / ("plain%d.jsonl" % threads)
        k = tmp_path / ("knot%d.jsonl" % threads)
        assert main(["census", "--n", "5", "--out", str(p),
                     "--threads", str(threads)]) == 0
        assert main(["census", "--n", "6", "--nonsimplifiable",
                     "--knot", "det=3,anchor=trefoil5",
                     "--out", str(k), "--threads", str(threads)]) == 0
        plain[threads] = p.read_bytes()
        knotted[threads] = k.read_bytes()
    capsys.readouterr()
    assert plain[1] == plain[4] == plain[16]
    assert knotted[1] == knotted[4] == knotted[16]
    assert plain[1].count(b"\n") == 224
    assert knotted[1].count(b"\n") >= 2


def test_counting_bound_flags_contradiction():
    """Two classes in one cell contradict symmetry order one, not two."""
    reversed_t34 = canonical_form(flip_orientation(T34))[0]
    caps = SearchCaps(max_grid_size=8, max_nodes=400, max_seconds=math.inf)
    crowded = AtlasTable(rows=(T34,), cols=(T34,),
                         cells={(0, 0): (T34, reversed_t34)}, sym_order=1)
    report = atlas_verify(crowded, caps)
    assert report.counting.status == "fail"
    assert report.counting.details[0][2] == \
        "2 distinct exchange classes exceed the symmetry order 1"
    assert report.overall == "fail"
    roomy = AtlasTable(rows=(T34,), cols=(T34,),
                       cells={(0, 0): (T34, reversed_t34)}, sym_order=2)
    assert atlas_verify(roomy, caps).counting.status == "pass"

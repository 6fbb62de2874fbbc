"""Classical invariants: frozen values, identities, symmetries, deltas."""

import random

from gridcal import (
    DELTA_KEYS,
    FIGURE_EIGHT_6,
    TREFOIL_5,
    UNKNOT_2,
    all_invariants,
    apply_move,
    classical_invariants,
    corner_counts,
    crossings,
    cusp_counts,
    determinant,
    enumerate_moves,
    flip_orientation,
    invariant_delta,
    reflect_theta,
    rotation,
    rotation_multisets,
    shift,
    validate,
    writhe,
)
from oracles import alexander_abs, crossing_list, random_diagram

HOPF_4 = validate((2, 3, 0, 1), (0, 1, 2, 3))
UNLINK_4 = validate((1, 0, 3, 2), (0, 1, 2, 3))


def test_unknot_frozen_values():
    """The minimal unknot has tb -1, rot 0 and determinant 1."""
    assert all_invariants(UNKNOT_2) == {
        "n": 2, "components": 1, "writhe": 0, "tb+": -1, "tb-": -1,
        "rot+": 0, "rot-": 0, "sl++": -1, "sl+-": -1, "sl-+": -1,
        "sl--": -1, "det": 1}
    assert corner_counts(UNKNOT_2) == {"NE": 1, "NW": 1, "SE": 1, "SW": 1}
    assert cusp_counts(UNKNOT_2) == (1, 1, 1, 1)


def test_trefoil_frozen_values():
    """The size-5 trefoil's classical numbers."""
    assert all_invariants(TREFOIL_5) == {
        "n": 5, "components": 1, "writhe": -3, "tb+": -6, "tb-": 1,
        "rot+": 1, "rot-": 0, "sl++": -7, "sl+-": -5, "sl-+": 1,
        "sl--": 1, "det": 3}
    assert corner_counts(TREFOIL_5) == {"NE": 2, "NW": 3, "SE": 3, "SW": 2}
    assert cusp_counts(TREFOIL_5) == (4, 2, 2, 2)


def test_figure_eight_frozen_values():
    """The size-6 figure-eight's classical numbers."""
    assert all_invariants(FIGURE_EIGHT_6) == {
        "n": 6, "components": 1, "writhe": 1, "tb+": -3, "tb-": -3,
        "rot+": 0, "rot-": 0, "sl++": -3, "sl+-": -3, "sl-+": -3,
        "sl--": -3, "det": 5}


def test_link_determinants():
    """The Hopf link has determinant 2, a split unlink 0."""
    assert HOPF_4.num_components == 2
    assert determinant(HOPF_4) == 2
    assert UNLINK_4.num_components == 2
    assert determinant(UNLINK_4) == 0


def test_crossings_match_independent_scan():
    """The crossing enumeration agrees with a from-scratch scan."""
    rng = random.Random(40)
    for _ in range(40):
        d = random_diagram(rng, rng.randrange(2, 8))
        assert sorted(crossings(d)) == sorted(crossing_list(d))


def test_writhe_is_signed_crossing_sum():
    """Writhe sums the crossing signs."""
    rng = random.Random(41)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        assert writhe(d) == sum(s for _, _, s in crossing_list(d))


def test_tb_sum_identity():
    """The two Thurston-Bennequin framings always sum to -n."""
    rng = random.Random(42)
    for _ in range(40):
        d = random_diagram(rng, rng.randrange(2, 8))
        inv = all_invariants(d)
        assert inv["tb+"] + inv["tb-"] == -d.n


def test_self_linking_identities():
    """Each push-off framing is tb -/+ rot of its family."""
    rng = random.Random(43)
    for _ in range(40):
        d = random_diagram(rng, rng.randrange(2, 8))
        inv = all_invariants(d)
        assert inv["sl++"] == inv["tb+"] - inv["rot+"]
        assert inv["sl+-"] == inv["tb+"] + inv["rot+"]
        assert inv["sl-+"] == inv["tb-"] - inv["rot-"]
        assert inv["sl--"] == inv["tb-"] + inv["rot-"]


def test_invariants_shift_invariant():
    """Torus shifts preserve tb, rot, sl and det.

    Writhe and the corner counts are window quantities: sliding a strand
    over the boundary trades crossings against cusps, leaving only the
    combinations above unchanged.
    """
    stable = ("n", "components", "tb+", "tb-", "rot+", "rot-",
              "sl++", "sl+-", "sl-+", "sl--", "det")
    rng = random.Random(44)
    for _ in range(25):
        d = random_diagram(rng, rng.randrange(2, 8))
        inv = all_invariants(d)
        s = shift(d, rng.randrange(d.n), rng.randrange(d.n))
        sinv = all_invariants(s)
        assert {k: sinv[k] for k in stable} == {k: inv[k] for k in stable}
        assert rotation_multisets(s) == rotation_multisets(d)


def test_flip_symmetry():
    """Orientation flip keeps tb and det, negates rot, swaps arrows."""
    rng = random.Random(45)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        inv = all_invariants(d)
        f = all_invariants(flip_orientation(d))
        assert (f["tb+"], f["tb-"]) == (inv["tb+"], inv["tb-"])
        assert (f["rot+"], f["rot-"]) == (-inv["rot+"], -inv["rot-"])
        assert (f["sl++"], f["sl+-"]) == (inv["sl+-"], inv["sl++"])
        assert (f["sl-+"], f["sl--"]) == (inv["sl--"], inv["sl-+"])
        assert f["writhe"] == inv["writhe"]
        assert f["det"] == inv["det"]


def test_reflect_symmetry():
    """Reflection swaps the two fronts and negates writhe and rot."""
    rng = random.Random(46)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        inv = all_invariants(d)
        r = all_invariants(reflect_theta(d))
        assert (r["tb+"], r["tb-"]) == (inv["tb-"], inv["tb+"])
        assert r["writhe"] == -inv["writhe"]
        assert r["det"] == inv["det"]
        rp, rm = rotation_multisets(d)
        rrp, rrm = rotation_multisets(reflect_theta(d))
        assert rrp == tuple(sorted(-x for x in rm))
        assert rrm == tuple(sorted(-x for x in rp))


def test_determinant_matches_alexander_at_minus_one():
    """The Goeritz determinant equals |Alexander at -1| on knots."""
    assert determinant(TREFOIL_5) == alexander_abs(TREFOIL_5, -1) == 3
    assert determinant(FIGURE_EIGHT_6) == alexander_abs(FIGURE_EIGHT_6, -1) == 5
    rng = random.Random(47)
    for _ in range(40):
        d = random_diagram(rng, rng.randrange(2, 8), components=1)
        assert determinant(d) == alexander_abs(d, -1)


def test_determinant_move_invariant():
    """Elementary moves never change the determinant."""
    rng = random.Random(48)
    for _ in range(10):
        d = random_diagram(rng, rng.randrange(2, 6))
        det = determinant(d)
        for _, out in enumerate_moves(d):
            assert determinant(out) == det


def test_invariant_delta_spot_check():
    """Observed invariant changes match the predicted table exactly."""
    rng = random.Random(49)
    for _ in range(10):
        d = random_diagram(rng, rng.randrange(2, 6))
        before = all_invariants(d)
        for mv, out in enumerate_moves(d):
            after = all_invariants(out)
            predicted = invariant_delta(mv)
            for key in DELTA_KEYS:
                assert after[key] - before[key] == predicted[key], (mv, key)


def test_classical_invariants_totals():
    """The per-component records are consistent with the totals."""
    rng = random.Random(50)
    for _ in range(25):
        d = random_diagram(rng, rng.randrange(2, 8))
        rec = classical_invariants(d)
        inv = all_invariants(d)
        assert rec.n == d.n and rec.components == d.num_components
        assert rec.writhe == inv["writhe"]
        assert (rec.tb_plus, rec.tb_minus) == (inv["tb+"], inv["tb-"])
        assert (rec.rot_plus, rec.rot_minus) == (inv["rot+"], inv["rot-"])
        assert sum(rec.rot_plus_components) == rec.rot_plus
        assert sum(rec.rot_minus_components) == rec.rot_minus
        assert dict(rec.self_linking) == {
            k: inv[k] for k in ("sl++", "sl+-", "sl-+", "sl--")}
        assert rec.determinant == inv["det"]
        assert dict(rec.corner_counts) == corner_counts(d)
        if d.num_components == 1:
            assert rec.tb_plus_components == (rec.tb_plus,)
            assert rec.tb_minus_components == (rec.tb_minus,)
            assert rec.rot_plus_components == (rec.rot_plus,)


def test_rotation_multisets_sorted():
    """Rotation multisets are the sorted per-component vectors."""
    rng = random.Random(51)
    for _ in range(20):
        d = random_diagram(rng, rng.randrange(2, 8))
        rec = classical_invariants(d)
        rp, rm = rotation_multisets(d)
        assert rp == tuple(sorted(rec.rot_plus_components))
        assert rm == tuple(sorted(rec.rot_minus_components))
        assert rotation(d) == (rec.rot_plus, rec.rot_minus)

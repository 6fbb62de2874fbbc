"""Diagram representation, torus symmetries and canonical keys."""

import random

import pytest

from gridcal import (
    BadComponentNumbering,
    FIGURE_EIGHT_6,
    NotAPermutation,
    ParseError,
    SignClash,
    SizeTooSmall,
    TREFOIL_5,
    UNKNOT_2,
    canonical_form,
    canonical_key,
    component_cycles,
    decode_key,
    default_numbering,
    encode,
    encode_key,
    flip_orientation,
    key_from_hex,
    key_hex,
    parse,
    reflect_theta,
    shift,
    validate,
)
from oracles import random_diagram

UNLINK_4 = validate((1, 0, 3, 2), (0, 1, 2, 3))


def test_builtin_keys():
    """The bundled diagrams canonicalize to their frozen keys."""
    assert key_hex(canonical_key(UNKNOT_2)) == "02000101000000"
    assert key_hex(canonical_key(TREFOIL_5)) == \
        "05000102030403040001020000000000"
    assert key_hex(canonical_key(FIGURE_EIGHT_6)) == \
        "06000103020504020500040301000000000000"


def test_builtin_components():
    """The bundled diagrams are knots; the size-4 unlink is not."""
    assert UNKNOT_2.num_components == 1
    assert TREFOIL_5.num_components == 1
    assert FIGURE_EIGHT_6.num_components == 1
    assert UNLINK_4.num_components == 2
    assert UNLINK_4.component_of == (0, 0, 1, 1)


def test_validate_rejects_small():
    """Grids need at least two columns."""
    with pytest.raises(SizeTooSmall):
        validate((0,), (0,))


def test_validate_rejects_non_permutation():
    """Both rows must be permutations of the same length."""
    with pytest.raises(NotAPermutation):
        validate((0, 0), (1, 0))
    with pytest.raises(NotAPermutation):
        validate((0, 1, 2), (1, 0))


def test_validate_rejects_sign_clash():
    """A column may not carry both vertices in one row."""
    with pytest.raises(SignClash):
        validate((0, 1), (0, 1))


def test_validate_rejects_bad_numbering():
    """Component numbers must be constant on cycles and cover 0..k-1."""
    with pytest.raises(BadComponentNumbering):
        validate((1, 0, 3, 2), (0, 1, 2, 3), component_of=(0, 1, 1, 0))
    with pytest.raises(BadComponentNumbering):
        validate((1, 0, 3, 2), (0, 1, 2, 3), component_of=(0, 0, 2, 2))
    with pytest.raises(BadComponentNumbering):
        validate((1, 0, 3, 2), (0, 1, 2, 3), component_of=(0, 0, 1))


def test_component_cycles_partition():
    """Cycles partition the columns and follow the strand walk."""
    rng = random.Random(1)
    for _ in range(50):
        d = random_diagram(rng, rng.randrange(2, 8))
        cycles = component_cycles(d.plus_row, d.minus_row)
        cols = sorted(c for cyc in cycles for c in cyc)
        assert cols == list(range(d.n))
        inv_minus = {d.minus_row[c]: c for c in range(d.n)}
        for cyc in cycles:
            for i, c in enumerate(cyc):
                assert inv_minus[d.plus_row[c]] == cyc[(i + 1) % len(cyc)]


def test_default_numbering_first_seen():
    """Components are numbered by their smallest column index."""
    rng = random.Random(2)
    for _ in range(50):
        d = random_diagram(rng, rng.randrange(2, 8))
        comp = default_numbering(d.plus_row, d.minus_row)
        first = {}
        for c in range(d.n):
            first.setdefault(comp[c], c)
        assert sorted(first) == list(range(len(first)))
        assert [first[k] for k in sorted(first)] == sorted(first.values())


def test_canonical_key_shift_invariant():
    """Every torus shift of a diagram has the same canonical key."""
    rng = random.Random(3)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 7))
        key = canonical_key(d)
        for _ in range(5):
            s = shift(d, rng.randrange(d.n), rng.randrange(d.n))
            assert canonical_key(s) == key


def test_canonical_form_is_orbit_member():
    """canonical_form returns the shift that realizes the key."""
    rng = random.Random(4)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 7))
        rep, (sr, sc) = canonical_form(d)
        assert rep == shift(d, sr, sc)
        assert encode_key(rep) == canonical_key(d)


def test_canonical_key_separates_orbits():
    """Diagrams with equal canonical keys are torus shifts of each other."""
    rng = random.Random(5)
    for _ in range(20):
        d = random_diagram(rng, rng.randrange(2, 6))
        orbit = {encode_key(shift(d, i, j))
                 for i in range(d.n) for j in range(d.n)}
        e = random_diagram(rng, d.n)
        same = canonical_key(e) == canonical_key(d)
        assert same == (encode_key(e) in orbit)


def test_ignore_numbering_quotient():
    """Relabeling components changes only the numbering-aware key."""
    d = validate((1, 0, 3, 4, 2), (0, 1, 2, 3, 4))
    assert d.num_components == 2
    relabeled = validate(d.plus_row, d.minus_row, component_of=(1, 1, 0, 0, 0))
    assert canonical_key(relabeled) != canonical_key(d)
    assert canonical_key(relabeled, ignore_numbering=True) == \
        canonical_key(d, ignore_numbering=True)


def test_shift_composition():
    """Shifts compose additively mod n."""
    rng = random.Random(6)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        a, b, c, e = (rng.randrange(d.n) for _ in range(4))
        assert shift(shift(d, a, b), c, e) == shift(d, a + c, b + e)
    assert shift(UNKNOT_2, 0, 0) == UNKNOT_2


def test_flip_and_reflect_are_involutions():
    """Orientation flip and theta reflection undo themselves."""
    rng = random.Random(7)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        assert flip_orientation(flip_orientation(d)) == d
        assert reflect_theta(reflect_theta(d)) == d


def test_flip_swaps_vertex_roles():
    """Flipping exchanges the '+' and '-' rows."""
    f = flip_orientation(TREFOIL_5)
    assert f.plus_row == TREFOIL_5.minus_row
    assert f.minus_row == TREFOIL_5.plus_row


def test_key_roundtrips():
    """Byte keys and their hex form reconstruct the representative."""
    rng = random.Random(8)
    for _ in range(30):
        d = random_diagram(rng, rng.randrange(2, 8))
        rep, _ = canonical_form(d)
        key = canonical_key(d)
        assert decode_key(key) == rep
        assert key_from_hex(key_hex(key)) == key


def test_encode_parse_roundtrip():
    """Text encoding feeds back through the parser unchanged."""
    rng = random.Random(9)
    for _ in range(40):
        d = random_diagram(rng, rng.randrange(2, 8))
        assert parse(encode(d)) == d


def test_encode_nondefault_numbering_roundtrip():
    """A component line appears exactly when the numbering needs one."""
    d = validate((1, 0, 3, 4, 2), (0, 1, 2, 3, 4), component_of=(1, 1, 0, 0, 0))
    text = encode(d)
    assert "comp 2 2 1 1 1" in text
    assert parse(text) == d
    assert "comp" not in encode(UNLINK_4)


def test_parse_error_positions():
    """Parse failures name the offending line and column."""
    with pytest.raises(ParseError) as info:
        parse("grid x\n+ 1 2\n- 2 1\n")
    assert (info.value.line, info.value.column) == (1, 6)
    with pytest.raises(ParseError) as info:
        parse("grid 2\n+ 1 two\n- 2 1\n")
    assert info.value.line == 2
    assert info.value.column == 5
    with pytest.raises(ParseError) as info:
        parse("grid 2\n+ 1 2\n- 2 9\n")
    assert (info.value.line, info.value.column) == (3, 5)


def test_parse_error_structure():
    """Missing or duplicate sections are parse errors, not crashes."""
    for text in ("", "grid 2\n+ 1 2\n", "grid 2\n+ 1 2\n+ 2 1\n- 2 1\n",
                 "grid 2\n+ 1 2\n- 2 1\nwhat 1 1\n", "grid 1\n+ 1\n- 1\n",
                 "grid 2\n+ 1 2\n- 1 2\n"):
        with pytest.raises(ParseError):
            parse(text)

import random

import pytest

from obfloer.heegaard import build_diagram
from obfloer.mapping import TwistWord
from obfloer.nicify import (FingerMoveSpec, bad_regions, elementary_moves,
                            finger_move, lazy_frontier, make_nice)
from obfloer.surface import make_page, parse_curve

annulus = make_page(0, 2)
four_holed = make_page(0, 4)


def region_shapes(diagram):
    return sorted((r.euler, r.corner_count, len(r.cycles), r.pointed)
                  for r in diagram.regions)


def lantern_book():
    """Boundary twists times one negative interior twist on S_{0,4}."""
    d1 = parse_curve(four_holed, [(1, 1)])
    d2 = parse_curve(four_holed, [(2, 1)])
    d3 = parse_curve(four_holed, [(3, 1)])
    d4 = parse_curve(four_holed, [(1, 1), (2, 1), (3, 1)])
    f1 = parse_curve(four_holed, [(1, 1), (3, 1)])
    word = TwistWord(((d1, 1), (d2, 1), (d3, 1), (d4, 1), (f1, -1)))
    return build_diagram(four_holed, word)


def random_book(rng):
    specs = [(0, 2), (0, 3), (0, 4), (1, 1), (1, 2)]
    while True:
        g, b = rng.choice(specs)
        page = make_page(g, b)
        letters = []
        for _ in range(rng.randint(0, 4)):
            ln = rng.randint(1, 2)
            sides = tuple((rng.randint(1, page.n_arcs), rng.choice((1, -1)))
                          for _ in range(ln))
            try:
                letters.append((parse_curve(page, sides), rng.choice((1, -1))))
            except ValueError:
                continue
        return build_diagram(page, TwistWord(tuple(letters)))


def test_lantern_flattening_census_and_trace():
    dia = lantern_book()
    assert dia.n_vertices == 10
    # three squares, two hexagons, and the pointed 16-gon
    assert region_shapes(dia) == [
        (1, 4, 1, False), (1, 4, 1, False), (1, 4, 1, False),
        (1, 6, 1, False), (1, 6, 1, False), (1, 16, 1, True)]
    assert bad_regions(dia) == [1, 3]

    lines = []
    nice = make_nice(dia, trace=lines.append)
    assert lines == [
        "finger region=1 sides=6 crossings=1 rest=0 vertices=12",
        "finger region=3 sides=6 crossings=1 rest=0 vertices=14"]
    assert nice.n_vertices == 14
    assert nice.bad_regions() == []
    assert region_shapes(nice) == [
        (1, 2, 1, False), (1, 2, 1, False),
        (1, 4, 1, False), (1, 4, 1, False), (1, 4, 1, False),
        (1, 4, 1, False), (1, 4, 1, False), (1, 4, 1, False),
        (1, 4, 1, False), (1, 24, 1, True)]
    # the input diagram is untouched
    assert dia.n_vertices == 10


def test_make_nice_is_idempotent():
    nice = make_nice(lantern_book())
    assert make_nice(nice) is nice


def test_lazy_frontier_lantern_matches_full():
    # both oversized regions touch the page crossings here, so the lazy
    # pass flattens everything the full pass does
    lz = lazy_frontier(lantern_book())
    assert lz.n_vertices == 14
    assert lz.bad_regions() == []


def test_nicification_preserves_page_data():
    dia = lantern_book()
    nice = make_nice(dia)
    assert [t for t in nice.v_tag if t[0] != "finger"] == dia.v_tag
    assert nice.contact_tuple() == dia.contact_tuple()
    assert nice.z0_region == dia.z0_region


def test_each_poke_adds_two_crossings():
    dia = lantern_book()
    for move in list(elementary_moves(dia))[:12]:
        out = finger_move(dia, move)
        assert out.n_vertices == dia.n_vertices + 2 * len(move.crossings)
        out.validate()


def test_finger_move_rejects_bad_specs():
    dia = lantern_book()
    move = next(iter(elementary_moves(dia)))
    with pytest.raises(TypeError, match="FingerMoveSpec"):
        finger_move(dia, (move.source, move.crossings, move.terminal))
    with pytest.raises(ValueError, match="at least one"):
        finger_move(dia, FingerMoveSpec(move.source, (), move.terminal))
    with pytest.raises(ValueError, match="does not exist"):
        finger_move(dia, FingerMoveSpec(10 ** 6, move.crossings,
                                        move.terminal))
    # a half-edge of the wrong family on either end
    a_half = next(h for h in range(2 * dia.n_edges)
                  if dia.label(h)[0] == "a")
    b_half = next(h for h in range(2 * dia.n_edges)
                  if dia.label(h)[0] == "b")
    with pytest.raises(ValueError, match="b family"):
        finger_move(dia, FingerMoveSpec(a_half, move.crossings,
                                        move.terminal))
    with pytest.raises(ValueError, match="a family"):
        finger_move(dia, FingerMoveSpec(move.source, (b_half,),
                                        move.terminal))
    with pytest.raises(ValueError, match="not the declared terminal"):
        finger_move(dia, FingerMoveSpec(move.source, move.crossings,
                                        move.terminal + 1))


def test_finger_move_rejects_detached_crossing():
    dia = lantern_book()
    move = next(iter(elementary_moves(dia)))
    enter = dia.he_region[move.source]
    off = next(h for h in range(2 * dia.n_edges)
               if dia.label(h)[0] == "a" and dia.he_region[h] != enter)
    with pytest.raises(ValueError, match="does not bound"):
        finger_move(dia, FingerMoveSpec(move.source, (off,), move.terminal))


def test_basepoint_region_is_never_pushed_through():
    dia = lantern_book()
    z = dia.z0_region
    b_half = next(h for h in range(2 * dia.n_edges)
                  if dia.label(h)[0] == "b" and dia.he_region[h] == z)
    a_half = next(h for h in dia.regions[z].cycles[0]
                  if dia.label(h)[0] == "a")
    with pytest.raises(ValueError, match="basepoint region"):
        finger_move(dia, FingerMoveSpec(b_half, (a_half,), 0))


def test_flattening_a_region_with_two_boundary_circles():
    # the identity annulus book is flat, but moving the basepoint onto a
    # bigon exposes the annular region; a merge poke must join its two
    # circles before the usual chopping applies
    dia = build_diagram(annulus, TwistWord(()))
    wrapped = dia.clone()
    ring = next(r for r, reg in enumerate(wrapped.regions)
                if len(reg.cycles) == 2)
    bigon = next(r for r, reg in enumerate(wrapped.regions) if reg.is_bigon)
    wrapped.regions[ring].pointed = False
    wrapped.regions[bigon].pointed = True
    wrapped.z0_region = bigon
    wrapped.validate()
    assert wrapped.bad_regions() == [ring]

    nice = make_nice(wrapped)
    assert nice.bad_regions() == []
    nice.validate()
    assert all(len(reg.cycles) == 1 for reg in nice.regions)


def test_random_books_flatten_clean():
    rng = random.Random(411)
    for _ in range(40):
        dia = random_book(rng)
        nice = make_nice(dia)
        assert nice.bad_regions() == []
        nice.validate()
        assert [t for t in nice.v_tag if t[0] != "finger"] == dia.v_tag
        assert nice.contact_tuple() == dia.contact_tuple()
        assert make_nice(nice) is nice
        lz = lazy_frontier(dia)
        lz.validate()
        contact = set(lz.contact_tuple())
        for r in lz.bad_regions():
            touched = {lz.he_origin[h]
                       for cyc in lz.regions[r].cycles for h in cyc}
            assert not touched & contact

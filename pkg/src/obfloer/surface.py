"""Pages presented as cut polygons, and curves on them in normal coordinates.

The page is a compact oriented surface with boundary.  Cutting it along a
fixed arc basis turns it into a single polygon, and every closed curve or
properly embedded arc is recorded by its cut sequence: the cyclic (or
linear) word of signed crossings with the basis arcs.  A reduced word is a
minimal position representative with respect to the arc system, so
crossing counts between paths can be computed from a canonical
arrangement of chords inside the polygon.

Conventions (documented in docs/conventions.md):

* The polygon boundary is traversed counterclockwise.  Sides alternate
  between arc copies and boundary segments: occurrence j of an arc sits at
  polygon position 2*j and boundary segment j at position 2*j + 1.
* The first occurrence of an arc carries the parameter t increasing along
  the counterclockwise direction; the second occurrence carries it
  decreasing, which is what the orientation-preserving regluing demands.
* A token (i, +1) crosses arc i entering on the side of the first copy
  and leaving on the side of the second copy; (i, -1) is the reverse.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

__all__ = [
    "Side",
    "Page",
    "Slot",
    "Curve",
    "ArcImage",
    "Arrangement",
    "make_page",
    "parse_curve",
    "normalize",
    "geometric_intersection",
    "pushoff",
    "basis_arc_image",
    "euler_characteristic_from_cut",
]

Token = tuple[int, int]


# ---------------------------------------------------------------------------
# word utilities


def invert_word(word: tuple[Token, ...]) -> tuple[Token, ...]:
    """Return the word of the same path traversed backwards."""
    return tuple((arc, -sign) for arc, sign in reversed(word))


def reduce_linear(word: tuple[Token, ...]) -> tuple[Token, ...]:
    """Cancel adjacent inverse pairs until none remain (stack pass)."""
    out: list[Token] = []
    for tok in word:
        if out and out[-1][0] == tok[0] and out[-1][1] == -tok[1]:
            out.pop()
        else:
            out.append(tok)
    return tuple(out)


def reduce_cyclic(word: tuple[Token, ...]) -> tuple[Token, ...]:
    """Cancel adjacent inverse pairs around the cycle until none remain."""
    w = list(reduce_linear(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def canonical_rotation(word: tuple[Token, ...]) -> tuple[Token, ...]:
    if not word:
        return word
    return min(word[k:] + word[:k] for k in range(len(word)))


def is_primitive(word: tuple[Token, ...]) -> bool:
    """A cyclic word is primitive when no proper rotation reproduces it."""
    n = len(word)
    return all(word != word[p:] + word[:p] for p in range(1, n))


def unoriented_canonical(word: tuple[Token, ...]) -> tuple[Token, ...]:
    """Canonical form of a cyclic word up to rotation and reversal."""
    return min(canonical_rotation(word), canonical_rotation(invert_word(word)))


# ---------------------------------------------------------------------------
# pages


@dataclass(frozen=True)
class Side:
    """One side of the cut polygon.

    kind is "arc" for a copy of a basis arc (with 1-based arc index, copy
    label "L" for the first occurrence or "R" for the second, and
    orientation +1 when the arc parameter increases along the
    counterclockwise boundary) or "boundary" for a segment of the page
    boundary (with its component and segment indices).
    """

    kind: str
    arc: int | None = None
    copy: str | None = None
    orientation: int | None = None
    component: int | None = None
    segment: int | None = None

    def __post_init__(self):
        if self.kind not in ("arc", "boundary"):
            raise ValueError(f"unknown side kind {self.kind!r}")


@dataclass(frozen=True)
class Page:
    """A page together with its cut polygon.

    occurrence_word lists the arc index at each of the 2n arc-side
    occurrences in counterclockwise order; the remaining tables are
    derived from it and kept for O(1) lookups.
    """

    genus: int
    boundary_components: int
    n_arcs: int
    cut_polygon: tuple[Side, ...]
    occurrence_word: tuple[int, ...]
    twin_occurrence: tuple[int, ...]
    first_occurrence: tuple[int, ...]
    second_occurrence: tuple[int, ...]
    segment_component: tuple[int, ...]
    boundary_cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_arcs != 2 * self.genus + self.boundary_components - 1:
            raise ValueError("arc count must equal 2*genus + boundary components - 1")
        if len(self.boundary_cycles) != self.boundary_components:
            raise ValueError("boundary walk does not close up into the right number of circles")

    @property
    def n_sides(self) -> int:
        return len(self.cut_polygon)

    def arc_side_pos(self, occ: int) -> int:
        """Polygon position of arc occurrence occ."""
        return 2 * occ

    def segment_side_pos(self, seg: int) -> int:
        return 2 * seg + 1

    def occurrence_of(self, arc: int, *, entry_sign: int) -> int:
        """Occurrence index where a token of the given sign enters the arc."""
        return self.first_occurrence[arc - 1] if entry_sign > 0 else self.second_occurrence[arc - 1]

    def twin_side(self, side_pos: int) -> int:
        occ = side_pos // 2
        return 2 * self.twin_occurrence[occ]

    def check_arc_index(self, arc: int) -> None:
        if not 1 <= arc <= self.n_arcs:
            raise ValueError(f"unknown arc index {arc} (page has {self.n_arcs} arcs)")


def make_page(genus: int, boundary_components: int) -> Page:
    """Build the canonical page model for the given topological type.

    The attachment word is planar slits first (one arc per extra boundary
    component, its two copies adjacent), then one interleaved quadruple
    u v u v per handle.  The boundary walk of the resulting polygon is
    checked to close up into exactly boundary_components circles.
    """
    if boundary_components < 1:
        raise ValueError("a page needs at least one boundary component")
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    n = 2 * genus + boundary_components - 1

    if n == 0:
        side = Side(kind="boundary", component=0, segment=0)
        return Page(
            genus=0,
            boundary_components=1,
            n_arcs=0,
            cut_polygon=(side,),
            occurrence_word=(),
            twin_occurrence=(),
            first_occurrence=(),
            second_occurrence=(),
            segment_component=(0,),
            boundary_cycles=((0,),),
        )

    occ_word: list[int] = []
    for k in range(1, boundary_components):
        occ_word += [k, k]
    for h in range(genus):
        u = (boundary_components - 1) + 2 * h + 1
        v = u + 1
        occ_word += [u, v, u, v]
    assert len(occ_word) == 2 * n

    first = [-1] * n
    second = [-1] * n
    for j, arc in enumerate(occ_word):
        if first[arc - 1] < 0:
            first[arc - 1] = j
        else:
            second[arc - 1] = j
    twin = [0] * (2 * n)
    for i in range(n):
        twin[first[i]] = second[i]
        twin[second[i]] = first[i]

    # Walking along the page boundary, the segment after segment j is the
    # one following the twin of the next arc occurrence.
    def next_segment(j: int) -> int:
        return twin[(j + 1) % (2 * n)]

    seen = [False] * (2 * n)
    cycles: list[tuple[int, ...]] = []
    for start in range(2 * n):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = next_segment(j)
        cycles.append(tuple(cyc))
    cycles.sort(key=min)
    # Rotate each cycle to start at its smallest segment for stable labels.
    cycles = [c[c.index(min(c)):] + c[:c.index(min(c))] for c in cycles]
    if len(cycles) != boundary_components:
        raise AssertionError("attachment word produced the wrong boundary count")

    seg_component = [0] * (2 * n)
    seg_index = [0] * (2 * n)
    for comp, cyc in enumerate(cycles):
        for idx, seg in enumerate(cyc):
            seg_component[seg] = comp
            seg_index[seg] = idx

    sides: list[Side] = []
    for j, arc in enumerate(occ_word):
        is_first = first[arc - 1] == j
        sides.append(
            Side(
                kind="arc",
                arc=arc,
                copy="L" if is_first else "R",
                orientation=+1 if is_first else -1,
            )
        )
        sides.append(Side(kind="boundary", component=seg_component[j], segment=seg_index[j]))

    return Page(
        genus=genus,
        boundary_components=boundary_components,
        n_arcs=n,
        cut_polygon=tuple(sides),
        occurrence_word=tuple(occ_word),
        twin_occurrence=tuple(twin),
        first_occurrence=tuple(first),
        second_occurrence=tuple(second),
        segment_component=tuple(seg_component),
        boundary_cycles=tuple(tuple(c) for c in cycles),
    )


def euler_characteristic_from_cut(page: Page) -> int:
    """Recompute the page's Euler characteristic from the identifications.

    The polygon contributes one face; arc sides glue in pairs and corners
    glue along arc endpoints.  The result must equal 2 - 2g - b.
    """
    n = page.n_arcs
    if n == 0:
        return 1
    # Corner before occurrence j is the same page point as the corner
    # after its twin occurrence; the matching pairs up all 4n corners.
    parent = list(range(4 * n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    # Encode corner-before-occ-j as 2j and corner-after-occ-j as 2j + 1.
    for j in range(2 * n):
        union(2 * j, 2 * page.twin_occurrence[j] + 1)
    vertices = len({find(x) for x in range(4 * n)})
    edges = n + 2 * n  # glued arc sides + boundary segments
    faces = 1
    return vertices - edges + faces


# ---------------------------------------------------------------------------
# curves and arcs


@dataclass(frozen=True)
class Slot:
    """A marked point on a boundary segment; rank orders points within it."""

    segment: int
    rank: int


@dataclass(frozen=True)
class Curve:
    """A closed curve as a cyclic reduced word of arc crossings."""

    crossings: tuple[Token, ...]
    normalized: bool = False


@dataclass(frozen=True)
class ArcImage:
    """A properly embedded arc rel endpoints, as a linear crossing word.

    along_arc marks the degenerate representation of basis arc i itself,
    which runs along the cut and crosses nothing; such objects only
    support intersection queries.
    """

    start_slot: Slot
    end_slot: Slot
    crossings: tuple[Token, ...]
    normalized: bool = False
    along_arc: int | None = None


def _check_tokens(page: Page, tokens) -> tuple[Token, ...]:
    word = []
    for tok in tokens:
        arc, sign = tok
        page.check_arc_index(arc)
        if sign not in (1, -1):
            raise ValueError(f"crossing sign must be +1 or -1, got {sign!r}")
        word.append((int(arc), int(sign)))
    return tuple(word)


def normalize(page: Page, path):
    """Reduce a path's word to its minimal position representative.

    Closed curves are reduced cyclically and stored in a canonical
    rotation; arcs are reduced linearly rel endpoints.  Idempotent.
    """
    if isinstance(path, Curve):
        word = canonical_rotation(reduce_cyclic(_check_tokens(page, path.crossings)))
        return Curve(crossings=word, normalized=True)
    if isinstance(path, ArcImage):
        if path.along_arc is not None:
            return ArcImage(
                start_slot=path.start_slot,
                end_slot=path.end_slot,
                crossings=(),
                normalized=True,
                along_arc=path.along_arc,
            )
        word = reduce_linear(_check_tokens(page, path.crossings))
        return ArcImage(
            start_slot=path.start_slot,
            end_slot=path.end_slot,
            crossings=word,
            normalized=True,
        )
    raise TypeError(f"expected Curve or ArcImage, got {type(path).__name__}")


def parse_curve(page: Page, tokens) -> Curve:
    """Build the normalized closed curve described by a crossing sequence.

    Rejects sequences that reduce to the empty word (a trivial curve is
    almost certainly user error in a twist description), non-primitive
    words (a multiply covered circle is not embedded), and words whose
    canonical arrangement forces a self-crossing.
    """
    word = _check_tokens(page, tokens)
    if not word:
        raise ValueError("empty crossing sequence does not describe a curve")
    reduced = reduce_cyclic(word)
    if not reduced:
        raise ValueError("crossing sequence trivializes under reduction (contractible curve)")
    if not is_primitive(reduced):
        raise ValueError("crossing sequence traverses a shorter curve repeatedly (not embedded)")
    curve = Curve(crossings=canonical_rotation(reduced), normalized=True)
    crossings = Arrangement(page, [curve]).self_crossings(0)
    if crossings:
        raise ValueError(f"crossing sequence describes a curve with {crossings} self-crossings")
    return curve


def pushoff(page: Page, arc: int) -> ArcImage:
    """The standard parallel copy of a basis arc, endpoints slid forward.

    Both endpoints advance along the boundary orientation past one arc
    endpoint, so the pushoff crosses its arc exactly once.  The crossing
    enters on the second-copy side, and the endpoints occupy rank 0 on
    the boundary segments following the two copies.
    """
    page.check_arc_index(arc)
    p = page.first_occurrence[arc - 1]
    q = page.second_occurrence[arc - 1]
    return ArcImage(
        start_slot=Slot(segment=q, rank=0),
        end_slot=Slot(segment=p, rank=0),
        crossings=((arc, -1),),
        normalized=True,
    )


def basis_arc_image(page: Page, arc: int) -> ArcImage:
    """Basis arc i as a degenerate intersection-query object."""
    page.check_arc_index(arc)
    return ArcImage(
        start_slot=Slot(segment=-1, rank=arc),
        end_slot=Slot(segment=-1, rank=-arc),
        crossings=(),
        normalized=True,
        along_arc=arc,
    )


# ---------------------------------------------------------------------------
# canonical arrangements

# Attachment handle roles: a crossing event has an entry attachment and an
# exit attachment on the two copies of its arc; an endpoint event has a
# single attachment on its boundary segment.
_IN, _OUT, _END = "in", "out", "end"


class Arrangement:
    """Canonical taut simultaneous realization of paths in the cut polygon.

    Every participating path must be normalized.  The arrangement orders
    all chord attachments along each polygon side so that each path is
    realized with the least possible crossings; pairs of strands through
    one arc whose side orders disagree are recorded as strip crossings.
    The minimality of the resulting counts is checked against a
    brute-force chord placement search in the test suite.
    """

    def __init__(self, page: Page, paths):
        if page.n_arcs == 0:
            raise ValueError("the disk page carries no essential curves or arcs")
        self.page = page
        self.paths = list(paths)
        self.events: list[list[tuple]] = []
        self.cyclic: list[bool] = []
        for path in self.paths:
            if isinstance(path, Curve):
                if not path.normalized:
                    raise ValueError("arrangement requires normalized curves")
                if not path.crossings:
                    raise ValueError("cannot arrange a trivial curve")
                self.events.append([("x", a, s) for a, s in path.crossings])
                self.cyclic.append(True)
            elif isinstance(path, ArcImage):
                if path.along_arc is not None:
                    raise ValueError("basis-arc placeholders cannot be arranged")
                if not path.normalized:
                    raise ValueError("arrangement requires normalized arcs")
                evs = [("e", path.start_slot, 0)]
                evs += [("x", a, s) for a, s in path.crossings]
                evs.append(("e", path.end_slot, 1))
                self.events.append(evs)
                self.cyclic.append(False)
            else:
                raise TypeError(f"cannot arrange {type(path).__name__}")
        self._cap = 2 * sum(len(e) + 2 for e in self.events) + 16
        self._build()

    # -- sides of attachments ------------------------------------------------

    def _att_side(self, handle) -> int:
        p, k, role = handle
        ev = self.events[p][k]
        if role == _END:
            slot = ev[1]
            return self.page.segment_side_pos(slot.segment)
        arc, sign = ev[1], ev[2]
        entry = sign > 0
        if role == _OUT:
            entry = not entry
        occ = self.page.occurrence_of(arc, entry_sign=+1 if entry else -1)
        return self.page.arc_side_pos(occ)

    def _away_germ(self, handle):
        p, k, role = handle
        if role == _IN:
            return (p, k - 1, -1)
        if role == _OUT:
            return (p, k + 1, +1)
        if k == 0:
            return (p, 1, +1)
        return (p, k - 1, -1)

    def _germ_far(self, germ):
        """Far target of the germ's current chord: side and terminal data."""
        p, nxt, d = germ
        evs = self.events[p]
        nxt %= len(evs)
        ev = evs[nxt]
        if ev[0] == "e":
            slot = ev[1]
            key = (slot.rank, p, ev[2])
            return ("slot", self.page.segment_side_pos(slot.segment), key)
        arc, sign = ev[1], ev[2]
        entry = sign > 0 if d == +1 else sign < 0
        occ = self.page.occurrence_of(arc, entry_sign=+1 if entry else -1)
        return ("arc", self.page.arc_side_pos(occ), None)

    def _germ_advance(self, germ):
        p, nxt, d = germ
        return (p, (nxt + d) % len(self.events[p]), d)

    def _other_att_germ(self, handle):
        """Away germ of the twin attachment of a crossing attachment."""
        p, k, role = handle
        other = _OUT if role == _IN else _IN
        return self._away_germ((p, k, other))

    # -- the germ-chain comparator -------------------------------------------

    def _compare(self, side_pos: int, h1, h2, *, allow_fallback: bool = True) -> int:
        """Return -1 when h1 attaches counterclockwise-before h2.

        Walks both away-germs hop by hop.  While they cross the same arcs
        the order is preserved (the reversal from entering a side cancels
        the reversal from switching to the twin copy), so the first
        divergence decides: of two non-crossing chords leaving one side,
        the one aiming at the counterclockwise-later target attaches
        earlier.
        """
        g1 = self._away_germ(h1)
        g2 = self._away_germ(h2)
        cur = side_pos
        n_sides = self.page.n_sides
        for _ in range(self._cap):
            k1, s1, key1 = self._germ_far(g1)
            k2, s2, key2 = self._germ_far(g2)
            if s1 != s2:
                off1 = (s1 - cur) % n_sides
                off2 = (s2 - cur) % n_sides
                return -1 if off1 > off2 else 1
            if k1 == "slot" and k2 == "slot":
                if key1 == key2:
                    raise AssertionError("two distinct attachments reached one slot")
                return -1 if key1 > key2 else 1
            if k1 != k2:
                raise AssertionError("side kind mismatch on equal sides")
            cur = self.page.twin_side(s1)
            g1 = self._germ_advance(g1)
            g2 = self._germ_advance(g2)
        # The away directions track each other beyond any honest divergence
        # bound.  For two attachments of one embedded path this happens when
        # the word matches its own reverse in phase; the strands then run
        # parallel and their order is fixed by the far side of the arc,
        # where the germs point the other way.
        if allow_fallback and h1[0] == h2[0] and h1[2] in (_IN, _OUT) and h2[2] in (_IN, _OUT):
            t1 = (h1[0], h1[1], _OUT if h1[2] == _IN else _IN)
            t2 = (h2[0], h2[1], _OUT if h2[2] == _IN else _IN)
            return -self._compare(self.page.twin_side(side_pos), t1, t2, allow_fallback=False)
        raise RuntimeError("internal error: could not separate parallel strands")

    # -- construction ----------------------------------------------------------

    def _build(self) -> None:
        page = self.page
        by_side: dict[int, list] = {pos: [] for pos in range(page.n_sides)}
        for p, evs in enumerate(self.events):
            for k, ev in enumerate(evs):
                if ev[0] == "x":
                    by_side[self._att_side((p, k, _IN))].append((p, k, _IN))
                    by_side[self._att_side((p, k, _OUT))].append((p, k, _OUT))
                else:
                    by_side[self._att_side((p, k, _END))].append((p, k, _END))

        self.att_order: dict[int, list] = {}
        for pos in range(page.n_sides):
            atts = by_side[pos]
            side = page.cut_polygon[pos]
            if side.kind == "boundary":
                def slot_key(handle):
                    p, k, _role = handle
                    ev = self.events[p][k]
                    return (ev[1].rank, p, ev[2])

                atts.sort(key=slot_key)
            elif len(atts) > 1:
                atts.sort(key=functools.cmp_to_key(
                    lambda a, b, pos=pos: self._compare(pos, a, b)))
            self.att_order[pos] = atts

        self.att_index: dict[tuple, tuple[int, int]] = {}
        self.position: dict[tuple, int] = {}
        counter = 0
        for pos in range(page.n_sides):
            for idx, handle in enumerate(self.att_order[pos]):
                self.att_index[handle] = (pos, idx)
                self.position[handle] = counter
                counter += 1
        self.n_positions = counter

        self.chords: list[list[tuple]] = []
        for p, evs in enumerate(self.events):
            chords = []
            if self.cyclic[p]:
                m = len(evs)
                for k in range(m):
                    chords.append(((p, k, _OUT), (p, (k + 1) % m, _IN)))
            else:
                tail = (p, 0, _END)
                for k in range(1, len(evs) - 1):
                    chords.append((tail, (p, k, _IN)))
                    tail = (p, k, _OUT)
                chords.append((tail, (p, len(evs) - 1, _END)))
            self.chords.append(chords)

    # -- queries ----------------------------------------------------------------

    def _between(self, x: int, a: int, b: int) -> bool:
        """Is position x strictly inside the ccw interval from a to b?"""
        n = self.n_positions
        return 0 < (x - a) % n < (b - a) % n

    def _chords_cross(self, c1, c2) -> bool:
        a = self.position[c1[0]]
        b = self.position[c1[1]]
        c = self.position[c2[0]]
        d = self.position[c2[1]]
        return self._between(c, a, b) != self._between(d, a, b)

    def _handle_of_germ(self, germ):
        """The attachment whose away chord the germ is riding."""
        p, nxt, d = germ
        m = len(self.events[p])
        return (p, (nxt - d) % m, _OUT if d > 0 else _IN)

    def _walk_run(self, p: int, kp: int, q: int, kq: int, upward: bool):
        """Follow two strands sharing an arc while their itineraries agree.

        Two strands through one strip either separate at some point on each
        side or track each other forever (parallel bands).  Walking from the
        aligned pair in one direction returns the further aligned pairs met
        on the way plus the comparator order at the point of separation, or
        None for the order when the walk closes up on itself.
        """
        hp = (p, kp, _OUT if upward else _IN)
        side = self._att_side(hp)
        hq = (q, kq, _OUT)
        if self._att_side(hq) != side:
            hq = (q, kq, _IN)
        gp = self._away_germ(hp)
        gq = self._away_germ(hq)
        cur = side
        pairs = []
        seen = set()
        while True:
            state = (gp, gq, cur)
            if state in seen:
                return pairs, None
            seen.add(state)
            kind_p, side_p, _key_p = self._germ_far(gp)
            kind_q, side_q, _key_q = self._germ_far(gq)
            if kind_p == "arc" and kind_q == "arc" and side_p == side_q:
                ep = gp[1] % len(self.events[p])
                eq = gq[1] % len(self.events[q])
                pairs.append((ep, eq))
                cur = self.page.twin_side(side_p)
                gp = self._germ_advance(gp)
                gq = self._germ_advance(gq)
                continue
            order = self._compare(cur, self._handle_of_germ(gp), self._handle_of_germ(gq))
            return pairs, order

    def strands_through(self, p: int, arc: int) -> list[int]:
        """Event indices of path p crossing the given arc."""
        return [k for k, ev in enumerate(self.events[p]) if ev[0] == "x" and ev[1] == arc]

    def strand_params(self, p: int, k: int) -> tuple[int, int]:
        """Arc-parameter orders of a crossing as read from the two copies.

        Returns (t_first, t_second): the rank of the strand along the arc
        as seen from the first-copy side and from the second-copy side.
        A pair of strands whose two readings disagree must cross next to
        the arc.
        """
        arc, sign = self.events[p][k][1], self.events[p][k][2]
        first_handle = (p, k, _IN if sign > 0 else _OUT)
        second_handle = (p, k, _OUT if sign > 0 else _IN)
        _pos_f, idx_f = self.att_index[first_handle]
        _pos_s, idx_s = self.att_index[second_handle]
        # The first copy runs counterclockwise with the parameter, the
        # second copy against it.
        return idx_f, -idx_s

    def flips_between(self, p: int, q: int) -> list[tuple[int, int, int]]:
        """Strip crossings between paths p and q as (arc, event_p, event_q)."""
        out = []
        for arc in range(1, self.page.n_arcs + 1):
            sp = self.strands_through(p, arc)
            sq = self.strands_through(q, arc)
            for kp in sp:
                tf_p, ts_p = self.strand_params(p, kp)
                for kq in sq:
                    if p == q and kp >= kq:
                        continue
                    tf_q, ts_q = self.strand_params(q, kq)
                    if (tf_p - tf_q) * (ts_p - ts_q) < 0:
                        out.append((arc, kp, kq))
        return out

    def pair_crossings(self, p: int, q: int) -> int:
        """Minimal crossing count between two distinct paths.

        Crossings come in two kinds.  A pair of chords whose attachment
        sides are four distinct polygon sides crosses exactly when those
        sides interleave, whatever the orders along the sides.  All other
        potential crossings involve two strands through a common arc; such
        strands may track each other through several arcs, and the whole
        maximal run contributes one crossing or none: the strands must
        cross exactly when the comparator orders at the two separation
        points agree, because the run itself always reverses the side
        order an odd number of times.  Runs that close up are parallel
        bands and contribute nothing.
        """
        if p == q:
            raise ValueError("use self_crossings for a single path")
        count = 0
        for c1 in self.chords[p]:
            sides1 = {self._att_side(c1[0]), self._att_side(c1[1])}
            for c2 in self.chords[q]:
                sides2 = {self._att_side(c2[0]), self._att_side(c2[1])}
                shared = sides1 & sides2
                if any(self.page.cut_polygon[s].kind == "arc" for s in shared):
                    continue
                if self._chords_cross(c1, c2):
                    count += 1
        aligned = []
        for arc in range(1, self.page.n_arcs + 1):
            for kp in self.strands_through(p, arc):
                for kq in self.strands_through(q, arc):
                    aligned.append((kp, kq))
        visited = set()
        for seed in aligned:
            if seed in visited:
                continue
            up_pairs, top = self._walk_run(p, seed[0], q, seed[1], True)
            down_pairs, bottom = self._walk_run(p, seed[0], q, seed[1], False)
            run = {seed} | set(up_pairs) | set(down_pairs)
            visited |= run
            if top is None or bottom is None:
                continue
            if top == bottom:
                count += 1
        return count

    def self_crossings(self, p: int) -> int:
        count = 0
        chords = self.chords[p]
        for i in range(len(chords)):
            for j in range(i + 1, len(chords)):
                if self._chords_cross(chords[i], chords[j]):
                    count += 1
        return count + len(self.flips_between(p, p))


# ---------------------------------------------------------------------------
# intersection numbers


def _token_count(word: tuple[Token, ...], arc: int) -> int:
    return sum(1 for a, _s in word if a == arc)


def geometric_intersection(page: Page, x, y) -> int:
    """Minimal transverse crossing count between two normalized paths.

    Parallel copies count as disjoint.  When the two paths share endpoint
    slots, the second argument's endpoints are read as perturbed
    counterclockwise-past the first's; the brute-force oracle in the test
    suite uses the same convention.
    """
    for label, path in (("first", x), ("second", y)):
        if not getattr(path, "normalized", False):
            raise ValueError(f"{label} argument must be normalized")
    x_along = isinstance(x, ArcImage) and x.along_arc is not None
    y_along = isinstance(y, ArcImage) and y.along_arc is not None
    if x_along and y_along:
        return 0
    if x_along:
        page.check_arc_index(x.along_arc)
        return _token_count(y.crossings, x.along_arc)
    if y_along:
        page.check_arc_index(y.along_arc)
        return _token_count(x.crossings, y.along_arc)
    if x is y:
        return 0
    if isinstance(x, Curve) and isinstance(y, Curve):
        if unoriented_canonical(x.crossings) == unoriented_canonical(y.crossings):
            return 0
    if isinstance(x, ArcImage) and isinstance(y, ArcImage):
        same_slots = {x.start_slot, x.end_slot} == {y.start_slot, y.end_slot}
        if same_slots and (x.crossings == y.crossings or x.crossings == invert_word(y.crossings)):
            return 0
    arr = Arrangement(page, [x, y])
    return arr.pair_crossings(0, 1)

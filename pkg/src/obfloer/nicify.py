"""Flattening a doubled-page diagram into bigon and square regions.

The only primitive is a poke: one attaching-circle edge of the "b"
family is pushed through the region in front of it and across one "a"
edge on that region's far boundary, so the tip comes to rest inside
the next region over.  A poke adds two crossings, cuts the region it
passed through in two (or merges two of its boundary circles, when the
entry and exit sat on different circles), carves a small bigon out of
the region the tip rests in, and lengthens the region behind the
pushed edge by two sides.

A finger is a chain of pokes: after the first one, the tip edge itself
is pushed onward, which turns the previous tip bigon into a plain
square of the tunnel.  Fingers never cross "b" edges, since circles of
one family stay disjoint, so all routing happens across "a" edges.

The flattening strategy chops one square off the worst oversized
region per finger and routes the tip straight through squares until it
can rest in a bigon or the basepoint region, where the damage of
resting (two extra sides) is harmless.  When no harmless entry exists
the finger accepts collateral damage on a neighboring region and the
main loop picks the pieces up later; a global move budget turns any
failure of this process into a loud error instead of a spin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .heegaard import HeegaardDiagram, Region


@dataclass(frozen=True)
class FingerMoveSpec:
    """One finger move: where it starts, what it crosses, where it rests.

    source is a half-edge of the "b" family; the finger pushes that
    edge into the region on the source side.  crossings lists the "a"
    half-edges crossed in order, each seen from the region being left.
    terminal names the region the tip comes to rest in.
    """

    source: int
    crossings: tuple
    terminal: int


def bad_regions(diagram: HeegaardDiagram) -> list[int]:
    """Non-disk regions and oversized disks, worst first.

    Ordered by decreasing distance from the basepoint region, ties by
    region id.  For doubled-page diagrams every region ends up at
    distance zero, because the complement of the "b" family stays
    connected, so the order is the stable id order in practice.
    """
    dist = diagram.region_distances()
    return sorted(diagram.bad_regions(), key=lambda r: (-dist[r], r))


def _poke(d: HeegaardDiagram, h_beta: int, h_alpha: int) -> tuple:
    """Push the edge of h_beta through the region ahead, across h_alpha.

    he_region[twin(h_beta)] is the region pushed through; h_alpha must
    lie on its boundary.  Returns (tip_half_edge, rest_region): the tip
    half-edge is the one to push to extend the finger, and rest_region
    is where the tip now sits.  Mutates d in place.
    """
    if d.label(h_beta)[0] != "b":
        raise ValueError("a finger can only push an edge of the b family")
    if d.label(h_alpha)[0] != "a":
        raise ValueError("a finger can only cross edges of the a family")
    R = d.he_region[d.twin(h_beta)]
    if d.he_region[h_alpha] != R:
        raise ValueError(
            "the crossed edge must bound the region the finger enters")
    reg = d.regions[R]
    if reg.pointed:
        raise ValueError("the basepoint region cannot be pushed through")

    j = d.label(h_beta)[1]
    i = d.label(h_alpha)[1]
    v1 = d.he_origin[h_beta]
    v2 = d.head(h_beta)
    w2 = d.head(h_alpha)

    ci_b = ci_a = None
    for ci, cyc in enumerate(reg.cycles):
        if d.twin(h_beta) in cyc:
            ci_b = ci
        if h_alpha in cyc:
            ci_a = ci
    if ci_b is None or ci_a is None:
        raise RuntimeError("internal error: region lost its boundary edges")
    if ci_b == ci_a and (len(reg.cycles) > 1 or reg.euler != 1):
        raise ValueError(
            "cutting along one boundary circle of a region with handles or "
            "several boundary circles is ambiguous")

    x_L = d.n_vertices
    x_R = x_L + 1
    d.v_alpha.extend((i, i))
    d.v_beta.extend((j, j))
    d.v_tag.extend((("finger", x_L), ("finger", x_R)))

    E = d.n_edges
    e2, e3, f2, f3 = E, E + 1, E + 2, E + 3
    d.edge_label.extend((("b", j), ("b", j), ("a", i), ("a", i)))
    d.he_origin.extend((x_L, x_R,      # e2: x_L -> x_R
                        x_R, v2,       # e3: x_R -> v2
                        x_L, x_R,      # f2: x_L -> x_R
                        x_R, w2))      # f3: x_R -> w2
    d.he_region.extend((-1,) * 8)
    d.he_origin[d.twin(h_beta)] = x_L  # pushed edge now ends at x_L
    d.he_origin[d.twin(h_alpha)] = x_L  # crossed edge keeps its near piece

    # cut the region that was pushed through
    cyc_b = reg.cycles[ci_b]
    pos_b = cyc_b.index(d.twin(h_beta))
    if ci_b == ci_a:
        cyc = cyc_b[pos_b:] + cyc_b[:pos_b]
        pos_a = cyc.index(h_alpha)
        c2 = cyc[1:pos_a] + [h_alpha, d.twin(h_beta)]
        c1 = [2 * e3 + 1, 2 * f3] + cyc[pos_a + 1:]
        reg.cycles[ci_b] = c1
        new_r = len(d.regions)
        d.regions.append(Region(cycles=[c2], euler=1))
        for h in c2:
            d.he_region[h] = new_r
    else:
        cyc_a = reg.cycles[ci_a]
        pos_a = cyc_a.index(h_alpha)
        merged = ([2 * e3 + 1, 2 * f3]
                  + cyc_a[pos_a + 1:] + cyc_a[:pos_a]
                  + [h_alpha, d.twin(h_beta)]
                  + cyc_b[pos_b + 1:] + cyc_b[:pos_b])
        keep = [c for ci, c in enumerate(reg.cycles)
                if ci not in (ci_b, ci_a)]
        reg.cycles[:] = [merged] + keep
        reg.euler += 1
    d.he_region[2 * e3 + 1] = R
    d.he_region[2 * f3] = R

    # the region behind the pushed edge absorbs the strip
    r_S = d.he_region[h_beta]
    s_cycles = d.regions[r_S].cycles
    done = False
    for cyc in s_cycles:
        if h_beta in cyc:
            p = cyc.index(h_beta)
            cyc[p:p + 1] = [h_beta, 2 * f2, 2 * e3]
            done = True
            break
    if not done:
        raise RuntimeError("internal error: pushed edge left no trace")
    d.he_region[2 * f2] = r_S
    d.he_region[2 * e3] = r_S

    # the tip carves a bigon sliver out of the region past the crossing
    r_N = d.he_region[d.twin(h_alpha)]
    n_cycles = d.regions[r_N].cycles
    done = False
    for cyc in n_cycles:
        if d.twin(h_alpha) in cyc:
            p = cyc.index(d.twin(h_alpha))
            cyc[p:p + 1] = [2 * f3 + 1, 2 * e2 + 1, d.twin(h_alpha)]
            done = True
            break
    if not done:
        raise RuntimeError("internal error: crossed edge left no trace")
    d.he_region[2 * f3 + 1] = r_N
    d.he_region[2 * e2 + 1] = r_N

    bigon = len(d.regions)
    d.regions.append(Region(cycles=[[2 * e2, 2 * f2 + 1]], euler=1))
    d.he_region[2 * e2] = bigon
    d.he_region[2 * f2 + 1] = bigon

    # splice the two subdivided circles back into their walks
    walk = d.beta_walk[j - 1]
    if h_beta in walk:
        p = walk.index(h_beta)
        walk[p:p + 1] = [h_beta, 2 * e2, 2 * e3]
    else:
        p = walk.index(d.twin(h_beta))
        walk[p:p + 1] = [2 * e3 + 1, 2 * e2 + 1, d.twin(h_beta)]
    walk = d.alpha_walk[i - 1]
    if h_alpha in walk:
        p = walk.index(h_alpha)
        walk[p:p + 1] = [h_alpha, 2 * f2, 2 * f3]
    else:
        p = walk.index(d.twin(h_alpha))
        walk[p:p + 1] = [2 * f3 + 1, 2 * f2 + 1, d.twin(h_alpha)]

    return 2 * e2, r_N


def finger_move(diagram: HeegaardDiagram,
                move: FingerMoveSpec) -> HeegaardDiagram:
    """Perform one finger move and return the new diagram.

    The input diagram is not touched.  The source half-edge must carry
    a "b" label; the finger pushes its edge into the region on the
    source side, crossing the listed "a" half-edges one region at a
    time, and the tip must come to rest in move.terminal.
    """
    if not isinstance(move, FingerMoveSpec):
        raise TypeError("move must be a FingerMoveSpec")
    if not move.crossings:
        raise ValueError("a finger move must cross at least one a edge")
    if move.source >= 2 * diagram.n_edges or move.source < 0:
        raise ValueError("source half-edge does not exist")
    if diagram.label(move.source)[0] != "b":
        raise ValueError("the pushed edge must belong to the b family")
    d = diagram.clone()
    h = d.twin(move.source)
    for k, cross in enumerate(move.crossings):
        if cross >= 2 * d.n_edges or cross < 0:
            raise ValueError("crossed half-edge does not exist")
        if d.label(cross)[0] != "a":
            raise ValueError("fingers may only cross edges of the a family")
        if d.he_region[cross] != d.he_region[d.twin(h)]:
            raise ValueError(
                f"crossing {k} does not bound the region the finger is in")
        h, rest = _poke(d, h, cross)
    if rest != move.terminal:
        raise ValueError(
            f"the finger comes to rest in region {rest}, "
            f"not the declared terminal {move.terminal}")
    d.validate()
    return d


def elementary_moves(diagram: HeegaardDiagram):
    """All single-crossing finger moves legal on the diagram.

    Yields FingerMoveSpec values; useful for exercising invariance of
    downstream answers under gratuitous isotopies.
    """
    for r, reg in enumerate(diagram.regions):
        if reg.pointed:
            continue
        single = len(reg.cycles) == 1 and reg.euler == 1
        for ci, cyc in enumerate(reg.cycles):
            for hh in cyc:
                if diagram.label(hh)[0] != "b":
                    continue
                for cj, cyc2 in enumerate(reg.cycles):
                    if cj == ci and not single:
                        continue
                    for ha in cyc2:
                        if diagram.label(ha)[0] != "a":
                            continue
                        yield FingerMoveSpec(
                            source=hh, crossings=(ha,),
                            terminal=diagram.he_region[diagram.twin(ha)])


def _region_rank(d: HeegaardDiagram, r: int) -> int:
    """Cost of adding two sides to region r: 0 when harmless."""
    reg = d.regions[r]
    if reg.pointed or reg.is_bigon:
        return 0
    return 2


def _chain_from(d: HeegaardDiagram, start: int, exit_h: int, budget: int):
    """Follow a finger straight through squares from a first crossing.

    Returns (crossings, rest_region, rest_rank) or None when the chain
    runs into a region it already cut or exceeds the budget.
    """
    crossings = [exit_h]
    visited = {start}
    enter = d.twin(exit_h)
    cur = d.he_region[enter]
    while len(crossings) <= budget:
        reg = d.regions[cur]
        if reg.pointed or reg.is_bigon:
            return crossings, cur, 0
        if cur in visited:
            return None
        if not reg.is_square:
            return crossings, cur, 2
        visited.add(cur)
        cyc = reg.cycles[0]
        exit_h = cyc[(cyc.index(enter) + 2) % 4]
        enter = d.twin(exit_h)
        cur = d.he_region[enter]
        crossings.append(exit_h)
    return None


def _plan_finger(d: HeegaardDiagram, target: int) -> FingerMoveSpec:
    """Choose a finger that chops a square off the oversized disk target."""
    reg = d.regions[target]
    cyc = reg.cycles[0]
    L = len(cyc)
    budget = 4 + 2 * len(d.regions)
    best = None
    for pos, hh in enumerate(cyc):
        if d.label(hh)[0] != "b":
            continue
        absorber = d.he_region[d.twin(hh)]
        a_rank = 6 if absorber == target else _region_rank(d, absorber)
        for p in (3, L - 3):
            exit_h = cyc[(pos + p) % L]
            if d.he_region[d.twin(exit_h)] == target:
                continue
            chain = _chain_from(d, target, exit_h, budget)
            if chain is None:
                continue
            crossings, rest, r_rank = chain
            key = (a_rank + r_rank, len(crossings), hh, p)
            if best is None or key < best[0]:
                best = (key, FingerMoveSpec(
                    source=hh, crossings=tuple(crossings),
                    terminal=rest))
    if best is None:
        raise RuntimeError(
            "internal error: no finger can leave the oversized region; "
            "resting would require sliding a full circle, which the "
            "doubled-page construction rules out")
    return best[1]


def _plan_merge(d: HeegaardDiagram, target: int) -> FingerMoveSpec:
    """Choose a poke joining two boundary circles of a non-disk region."""
    reg = d.regions[target]
    best = None
    for ci, cyc in enumerate(reg.cycles):
        for hh in cyc:
            if d.label(hh)[0] != "b":
                continue
            absorber = d.he_region[d.twin(hh)]
            a_rank = 6 if absorber == target else _region_rank(d, absorber)
            for cj, cyc2 in enumerate(reg.cycles):
                if cj == ci:
                    continue
                for ha in cyc2:
                    if d.label(ha)[0] != "a":
                        continue
                    rest = d.he_region[d.twin(ha)]
                    r_rank = 2 if rest == target else _region_rank(d, rest)
                    key = (a_rank + r_rank, hh, ha)
                    if best is None or key < best[0]:
                        best = (key, FingerMoveSpec(
                            source=hh, crossings=(ha,),
                            terminal=rest))
    if best is None:
        raise RuntimeError(
            "internal error: non-disk region offers no joining poke")
    return best[1]


def _execute(d: HeegaardDiagram, move: FingerMoveSpec) -> None:
    h = d.twin(move.source)
    for cross in move.crossings:
        h, rest = _poke(d, h, cross)
    if rest != move.terminal:
        raise RuntimeError("internal error: finger rested off plan")


def _flatten(diagram: HeegaardDiagram, frontier_only: bool,
             trace) -> HeegaardDiagram:
    d = diagram.clone()
    moves = 0
    budget = 64 + 16 * (d.n_vertices + d.n_edges) ** 2
    while True:
        dist = d.region_distances()
        bad = sorted(d.bad_regions(), key=lambda r: (-dist[r], r))
        non_disks = [r for r in bad if not d.regions[r].is_disk]
        if non_disks:
            target = non_disks[0]
            move = _plan_merge(d, target)
        else:
            if frontier_only:
                keep = _frontier(d)
                bad = [r for r in bad if r in keep]
            if not bad:
                d.validate()
                return d
            target = bad[0]
            move = _plan_finger(d, target)
        moves += len(move.crossings)
        if moves > budget:
            raise RuntimeError(
                "internal error: flattening exceeded its move budget; "
                "either a finger cannot come to rest (a slide over a "
                "full circle, which the construction rules out) or the "
                "planner is looping")
        corners = d.regions[target].corner_count
        _execute(d, move)
        if trace is not None:
            trace(f"finger region={target} sides={corners} "
                  f"crossings={len(move.crossings)} rest={move.terminal} "
                  f"vertices={d.n_vertices}")


def _frontier(d: HeegaardDiagram) -> set:
    """Regions with a corner on the page, where the contact points live.

    These are the regions touching the thin strips between each arc
    and its pushoff; the distinguished generator's differentials only
    ever tile through them.
    """
    contact = {v for v in range(d.n_vertices)
               if d.v_tag[v][0] == "contact"}
    out = set()
    for r, reg in enumerate(d.regions):
        for cyc in reg.cycles:
            for h in cyc:
                if d.he_origin[h] in contact:
                    out.add(r)
    return out


def make_nice(diagram: HeegaardDiagram, trace=None) -> HeegaardDiagram:
    """Flatten every region except the basepoint one to bigons/squares.

    Returns a new diagram presenting the same open book; the input is
    untouched.  The crossings on the page, and with them the
    distinguished generator, are preserved.  Already-flat diagrams are
    returned as they are.
    """
    if not diagram.bad_regions():
        return diagram
    return _flatten(diagram, frontier_only=False, trace=trace)


def lazy_frontier(diagram: HeegaardDiagram, trace=None) -> HeegaardDiagram:
    """Flatten only the regions that touch the page crossings.

    Cheaper than make_nice: afterwards every region meeting the thin
    strips next to the arcs is a bigon or square, which is enough to
    count the differentials into the distinguished generator; other
    oversized regions may survive.
    """
    keep = _frontier(diagram)
    if not any(r in keep for r in diagram.bad_regions()):
        return diagram
    return _flatten(diagram, frontier_only=True, trace=trace)


__all__ = ["FingerMoveSpec", "bad_regions", "elementary_moves",
           "finger_move", "lazy_frontier", "make_nice"]

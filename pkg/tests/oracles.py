"""Independent brute-force oracles for curve arrangements on a page.

These deliberately avoid the library's canonical-arrangement code path.
A realization is modeled by choosing, for every basis arc, one global
order of all strands crossing it; the first copy of the arc reads that
order along the counterclockwise boundary and the second copy reads it
reversed.  Chords then cross exactly when their endpoints interleave
around the polygon, so minimal crossing numbers come from exhaustive
search over the per-arc orders.
"""

from __future__ import annotations

import itertools

from obfloer.surface import ArcImage, Curve, Page, invert_word, reduce_cyclic


def _events(path):
    if isinstance(path, Curve):
        return [("x", a, s) for a, s in path.crossings], True
    evs = [("e", path.start_slot, 0)]
    evs += [("x", a, s) for a, s in path.crossings]
    evs.append(("e", path.end_slot, 1))
    return evs, False


def _chords(events, cyclic, p):
    # A chord joins the exit attachment of one event to the entry
    # attachment of the next.  Attachment ids: (p, k, 'F'|'S'|'E').
    def entry_att(k):
        ev = events[k]
        if ev[0] == "e":
            return (p, k, "E")
        return (p, k, "F" if ev[2] > 0 else "S")

    def exit_att(k):
        ev = events[k]
        if ev[0] == "e":
            return (p, k, "E")
        return (p, k, "S" if ev[2] > 0 else "F")

    m = len(events)
    if cyclic:
        return [(exit_att(k), entry_att((k + 1) % m)) for k in range(m)]
    return [(exit_att(k), entry_att(k + 1)) for k in range(m - 1)]


def _crossing_count(page: Page, paths, orders):
    """Count chord interleavings under one choice of per-arc strand orders.

    Returns (per-path self counts, cross-count matrix entry for (0,1)).
    """
    all_events = []
    all_cyclic = []
    for path in paths:
        evs, cyc = _events(path)
        all_events.append(evs)
        all_cyclic.append(cyc)

    # Global circle positions, walking the polygon sides in order.
    position = {}
    counter = 0
    for pos in range(page.n_sides):
        side = page.cut_polygon[pos]
        if side.kind == "arc":
            occ = pos // 2
            arc = side.arc
            strand_order = orders.get(arc, ())
            seq = strand_order if side.copy == "L" else tuple(reversed(strand_order))
            for (p, k) in seq:
                role = "F" if side.copy == "L" else "S"
                position[(p, k, role)] = counter
                counter += 1
        else:
            seg = pos // 2
            ends = []
            for p, evs in enumerate(all_events):
                for k, ev in enumerate(evs):
                    if ev[0] == "e" and ev[1].segment == seg:
                        ends.append(((ev[1].rank, p, ev[2]), (p, k, "E")))
            for _key, att in sorted(ends):
                position[att] = counter
                counter += 1
    total = counter

    def between(x, a, b):
        return 0 < (x - a) % total < (b - a) % total

    def cross(c1, c2):
        a, b = position[c1[0]], position[c1[1]]
        c, d = position[c2[0]], position[c2[1]]
        return between(c, a, b) != between(d, a, b)

    chords = [_chords(evs, cyc, p) for p, (evs, cyc) in enumerate(zip(all_events, all_cyclic))]
    selfs = []
    for p in range(len(paths)):
        n = 0
        for i in range(len(chords[p])):
            for j in range(i + 1, len(chords[p])):
                if cross(chords[p][i], chords[p][j]):
                    n += 1
        selfs.append(n)
    cross_01 = 0
    if len(paths) == 2:
        for c1 in chords[0]:
            for c2 in chords[1]:
                if cross(c1, c2):
                    cross_01 += 1
    return selfs, cross_01


def _strands_by_arc(page: Page, paths):
    strands = {arc: [] for arc in range(1, page.n_arcs + 1)}
    for p, path in enumerate(paths):
        evs, _cyc = _events(path)
        for k, ev in enumerate(evs):
            if ev[0] == "x":
                strands[ev[1]].append((p, k))
    return strands


def _order_choices(page: Page, paths):
    strands = _strands_by_arc(page, paths)
    arcs = [arc for arc in strands if strands[arc]]
    perms = [list(itertools.permutations(strands[arc])) for arc in arcs]
    for combo in itertools.product(*perms):
        yield dict(zip(arcs, combo))


def oracle_pair_crossings(page: Page, x, y):
    """Minimal crossings between two embedded paths, or None if either
    path admits no embedded realization at all."""
    best = None
    for orders in _order_choices(page, [x, y]):
        selfs, cross = _crossing_count(page, [x, y], orders)
        if selfs[0] or selfs[1]:
            continue
        if best is None or cross < best:
            best = cross
            if best == 0:
                break
    return best


def oracle_is_embeddable(page: Page, x) -> bool:
    for orders in _order_choices(page, [x]):
        selfs, _ = _crossing_count(page, [x], orders)
        if selfs[0] == 0:
            return True
    return False


def oracle_min_arc_tokens(page: Page, word, arc: int, budget: int = 2) -> int:
    """Minimal count of crossings with one arc over words reachable by
    insertion or deletion of adjacent inverse pairs (cyclic words).

    Exhaustive to the given length budget above the reduced length; used
    to confirm that reduction alone realizes the minimum.
    """
    def canon(w):
        w = tuple(w)
        if not w:
            return w
        return min(w[k:] + w[:k] for k in range(len(w)))

    start = canon(reduce_cyclic(tuple(word)))
    max_len = len(start) + 2 * budget
    tokens = [(a, s) for a in range(1, page.n_arcs + 1) for s in (1, -1)]
    seen = {start}
    frontier = [start]
    best = sum(1 for a, _s in start if a == arc)
    while frontier:
        nxt = []
        for w in frontier:
            n = len(w)
            candidates = []
            for i in range(n):
                j = (i + 1) % n
                if n >= 2 and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
                    if j > i:
                        candidates.append(w[:i] + w[j + 1:])
                    else:
                        candidates.append(w[1:-1])
            if n + 2 <= max_len:
                for i in range(n + 1):
                    for t in tokens:
                        candidates.append(w[:i] + (t, (t[0], -t[1])) + w[i:])
            for c in candidates:
                c = canon(c)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    best = min(best, sum(1 for a, _s in c if a == arc))
        frontier = nxt
    return best

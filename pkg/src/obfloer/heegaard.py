"""Doubled-page Heegaard diagrams of an open book.

The Heegaard surface doubles the page: a top sheet, where each basis
arc keeps its parallel pushoff, and a bottom sheet, where the pushoffs
are replaced by their monodromy images.  Gluing the sheets along the
page boundary closes both families: every arc doubles to an attaching
circle of the "a" family, and every pushoff joins its image into a
circle of the "b" family.  All intersection points live on the arcs:
each pushoff meets its own arc once on the top sheet, and an image
word meets the arcs once per letter on the bottom sheet.  The tuple of
top-sheet points, one per arc, is the distinguished cycle whose class
the rest of the package decides about.

The region complex is assembled from two copies of the cut polygon.
Inside a sheet the chord systems are realized without crossings, so
the polygon faces are immediate; faces are then merged across the
stretches of page boundary between the sheets, since no attaching
circle runs along the binding.  Euler characteristics are tracked
through the merge, which is how non-disk regions are recognized.

The basepoint region is the one touching the binding immediately
counterclockwise of the first pushoff's starting endpoint on the top
sheet.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .mapping import TwistWord, apply_word
from .surface import ArcImage, Arrangement, Page, pushoff

_TOP, _BOTTOM = 0, 1
_END = "end"


@dataclass
class Region:
    """One complement component of the two attaching families.

    Boundary cycles list half-edge ids with the region on the left.
    A region is a disk exactly when its Euler characteristic is 1.
    """

    cycles: list
    euler: int
    pointed: bool = False

    @property
    def corner_count(self) -> int:
        return sum(len(cycle) for cycle in self.cycles)

    @property
    def is_disk(self) -> bool:
        return self.euler == 1

    @property
    def is_bigon(self) -> bool:
        return self.euler == 1 and self.corner_count == 2

    @property
    def is_square(self) -> bool:
        return self.euler == 1 and self.corner_count == 4


class HeegaardDiagram:
    """Doubled-page diagram with curves, crossings and regions.

    Half-edges come in twin pairs (2*e, 2*e + 1) for edge e; the twin
    of h is h ^ 1.  Every edge carries a label ("a", i) or ("b", j)
    naming its attaching circle.  alpha_walk[i-1] and beta_walk[j-1]
    trace each circle as a cyclic list of forward half-edges.  Regions
    own their boundary cycles, walked with the region on the left;
    he_region maps a half-edge to the region on its left.

    Instances are produced by build_diagram and later mutated in place
    by the flattening moves; consistency can be rechecked at any point
    with validate().
    """

    def __init__(self, page, n, v_alpha, v_beta, v_tag, alpha_walk,
                 beta_walk, edge_label, he_origin, regions, he_region,
                 z0_region):
        self.page = page
        self.n = n
        self.v_alpha = v_alpha
        self.v_beta = v_beta
        self.v_tag = v_tag
        self.alpha_walk = alpha_walk
        self.beta_walk = beta_walk
        self.edge_label = edge_label
        self.he_origin = he_origin
        self.regions = regions
        self.he_region = he_region
        self.z0_region = z0_region

    # -- elementary queries ------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.v_alpha)

    @property
    def n_edges(self) -> int:
        return len(self.edge_label)

    @property
    def alpha_order(self) -> list:
        """Vertices along each arc circle, in walk order."""
        return [[self.he_origin[h] for h in walk] for walk in self.alpha_walk]

    @property
    def beta_order(self) -> list:
        """Vertices along each pushoff circle, in walk order."""
        return [[self.he_origin[h] for h in walk] for walk in self.beta_walk]

    def twin(self, h: int) -> int:
        return h ^ 1

    def head(self, h: int) -> int:
        return self.he_origin[h ^ 1]

    def label(self, h: int) -> tuple:
        return self.edge_label[h // 2]

    def clone(self) -> "HeegaardDiagram":
        """Independent copy that the flattening moves may mutate."""
        return HeegaardDiagram(
            page=self.page, n=self.n,
            v_alpha=list(self.v_alpha), v_beta=list(self.v_beta),
            v_tag=list(self.v_tag),
            alpha_walk=[list(w) for w in self.alpha_walk],
            beta_walk=[list(w) for w in self.beta_walk],
            edge_label=list(self.edge_label),
            he_origin=list(self.he_origin),
            regions=[Region(cycles=[list(c) for c in r.cycles],
                            euler=r.euler, pointed=r.pointed)
                     for r in self.regions],
            he_region=list(self.he_region),
            z0_region=self.z0_region)

    def intersections(self, i: int, j: int) -> tuple[int, ...]:
        """Vertices where arc circle i meets pushoff circle j."""
        return tuple(v for v in range(self.n_vertices)
                     if self.v_alpha[v] == i and self.v_beta[v] == j)

    def contact_tuple(self) -> tuple[int, ...]:
        """The distinguished generator: the top-sheet point on each arc."""
        out = []
        for i in range(1, self.n + 1):
            hits = [v for v in range(self.n_vertices)
                    if self.v_tag[v] == ("contact", i)]
            if len(hits) != 1:
                raise RuntimeError("internal error: missing contact point")
            out.append(hits[0])
        return tuple(out)

    def corners(self, r: int):
        """Corner walk of region r: per cycle, (vertex, h_in, h_out)."""
        out = []
        for cycle in self.regions[r].cycles:
            walk = []
            for t, h in enumerate(cycle):
                nxt = cycle[(t + 1) % len(cycle)]
                walk.append((self.head(h), h, nxt))
            out.append(walk)
        return out

    def bad_regions(self) -> list[int]:
        """Regions that keep the diagram from being combinatorially flat.

        Good regions are the pointed one, bigon disks and square
        disks; everything else has to be flattened away before the
        complex is counted.
        """
        out = []
        for r, region in enumerate(self.regions):
            if region.pointed or region.is_bigon or region.is_square:
                continue
            out.append(r)
        return out

    def region_distances(self) -> list[int]:
        """Fewest pushoff-circle crossings from the basepoint region.

        An arc from the basepoint into a region crosses a sequence of
        edges; arc-circle edges are free, pushoff edges each cost one.
        Computed as a 0/1 breadth-first search over region adjacency.
        """
        dist = [None] * len(self.regions)
        dist[self.z0_region] = 0
        dq = deque([(0, self.z0_region)])
        while dq:
            d, r = dq.popleft()
            if d > dist[r]:
                continue
            for cycle in self.regions[r].cycles:
                for h in cycle:
                    w = 0 if self.label(h)[0] == "a" else 1
                    nb = self.he_region[h ^ 1]
                    if dist[nb] is None or d + w < dist[nb]:
                        dist[nb] = d + w
                        if w:
                            dq.append((d + w, nb))
                        else:
                            dq.appendleft((d, nb))
        if any(d is None for d in dist):
            raise RuntimeError("internal error: unreachable region")
        return dist

    # -- consistency ---------------------------------------------------

    def validate(self) -> None:
        n_he = 2 * self.n_edges
        seen = {}
        for r, region in enumerate(self.regions):
            for cycle in region.cycles:
                if not cycle:
                    raise RuntimeError("internal error: empty boundary cycle")
                for t, h in enumerate(cycle):
                    if h in seen:
                        raise RuntimeError("internal error: half-edge reused")
                    seen[h] = r
                    if self.he_region[h] != r:
                        raise RuntimeError("internal error: he_region mismatch")
                    nxt = cycle[(t + 1) % len(cycle)]
                    if self.he_origin[nxt] != self.head(h):
                        raise RuntimeError("internal error: broken cycle")
                    if self.label(h)[0] == self.label(nxt)[0]:
                        raise RuntimeError(
                            "internal error: boundary fails to alternate "
                            "families")
        if len(seen) != n_he:
            raise RuntimeError("internal error: unswept half-edges")
        degree = [0] * self.n_vertices
        for h in range(n_he):
            degree[self.he_origin[h]] += 1
        if any(d != 4 for d in degree):
            raise RuntimeError("internal error: vertex is not four-valent")
        euler = self.n_vertices - self.n_edges + sum(
            region.euler for region in self.regions)
        if euler != 2 - 2 * self.n:
            raise RuntimeError(
                f"internal error: region complex has Euler number {euler}, "
                f"the surface needs {2 - 2 * self.n}")
        if not self.regions[self.z0_region].pointed:
            raise RuntimeError("internal error: basepoint region lost its mark")
        if sum(1 for region in self.regions if region.pointed) != 1:
            raise RuntimeError("internal error: basepoint mark duplicated")
        by_label = {}
        for e, label in enumerate(self.edge_label):
            by_label.setdefault(label, []).append(e)
        for fam, walks in (("a", self.alpha_walk), ("b", self.beta_walk)):
            if len(walks) != self.n:
                raise RuntimeError("internal error: wrong number of circles")
            for idx, walk in enumerate(walks):
                label = (fam, idx + 1)
                if sorted(h // 2 for h in walk) != by_label.get(label, []):
                    raise RuntimeError(
                        "internal error: circle walk misses its edges")
                for t, h in enumerate(walk):
                    nxt_h = walk[(t + 1) % len(walk)]
                    if self.he_origin[nxt_h] != self.head(h):
                        raise RuntimeError("internal error: circle walk broken")


class _Chart:
    """One sheet: the cut polygon subdivided by a crossing-free family."""

    def __init__(self, page: Page, paths, sheet: int):
        self.page = page
        self.sheet = sheet
        self.arr = Arrangement(page, paths)
        self._check_embedded()
        self._build_nodes()
        self._walk_faces()

    def _check_embedded(self) -> None:
        arr = self.arr
        k = len(arr.events)
        for p in range(k):
            if arr.self_crossings(p) != 0:
                raise ValueError(
                    "arc images must be embedded to double into a diagram")
        for p in range(k):
            for q in range(p + 1, k):
                crossing = sum(
                    1 for c1 in arr.chords[p] for c2 in arr.chords[q]
                    if arr._chords_cross(c1, c2))
                if crossing or arr.flips_between(p, q):
                    raise ValueError(
                        "arc images must be pairwise disjoint to double "
                        "into a diagram")

    def _build_nodes(self) -> None:
        self.node_index = {}
        self.node_keys = []
        for pos in range(self.page.n_sides):
            for key in [("corner", pos)] + [
                    ("att", handle) for handle in self.arr.att_order[pos]]:
                self.node_index[key] = len(self.node_keys)
                self.node_keys.append(key)
        self.chord_end = {}
        for p, chords in enumerate(self.arr.chords):
            for c, (h_from, h_to) in enumerate(chords):
                for handle, direction in ((h_from, 1), (h_to, -1)):
                    node = self.node_index[("att", handle)]
                    if node in self.chord_end:
                        raise RuntimeError(
                            "internal error: two chord ends in one node")
                    self.chord_end[node] = (p, c, direction)

    def _walk_faces(self) -> None:
        """Faces of the chord-subdivided polygon, interior on the left."""
        m = len(self.node_keys)
        nxt = {}
        for v in range(m):
            head = (v + 1) % m
            if head in self.chord_end:
                p, c, direction = self.chord_end[head]
                nxt[(("i", v), 1)] = (("c", p, c), direction)
            else:
                nxt[(("i", v), 1)] = (("i", head), 1)
        for node, (p, c, direction) in self.chord_end.items():
            # the chord instance arriving at this node turns onto the boundary
            nxt[(("c", p, c), -direction)] = (("i", node), 1)
        self.next_item = nxt
        self.face_of = {}
        faces = 0
        pending = set(nxt)
        while pending:
            start = min(pending, key=_instance_key)
            cur = start
            while True:
                self.face_of[cur] = faces
                pending.discard(cur)
                cur = nxt[cur]
                if cur == start:
                    break
            faces += 1
        self.n_faces = faces
        want = 1 + sum(len(chords) for chords in self.arr.chords)
        if faces != want:
            raise RuntimeError(
                f"internal error: walked {faces} polygon faces, "
                f"expected {want}")

    def corner_node(self, pos: int) -> int:
        return self.node_index[("corner", pos)]


def _instance_key(inst):
    item, d = inst
    return (len(item), item, d)


def build_diagram(page: Page, monodromy: TwistWord) -> HeegaardDiagram:
    """Diagram of the open book with the given twist-word monodromy."""
    if not isinstance(monodromy, TwistWord):
        raise TypeError("monodromy must be a TwistWord")
    basis = tuple(pushoff(page, i) for i in range(1, page.n_arcs + 1))
    return assemble_diagram(page, apply_word(page, monodromy, basis))


def assemble_diagram(page: Page, images) -> HeegaardDiagram:
    """Diagram of the book whose monodromy sends pushoff j to images[j-1]."""
    n = page.n_arcs
    if n == 0:
        raise ValueError(
            "the disk page has no arcs to double into a diagram")
    images = list(images)
    if len(images) != n:
        raise ValueError(f"need {n} monodromy images, got {len(images)}")
    pushoffs = [pushoff(page, i) for i in range(1, n + 1)]
    for j, image in enumerate(images):
        if not isinstance(image, ArcImage) or image.along_arc is not None:
            raise ValueError("monodromy images must be concrete arc images")
        if not image.normalized:
            raise ValueError("monodromy images must be normalized")
        if (image.start_slot != pushoffs[j].start_slot
                or image.end_slot != pushoffs[j].end_slot):
            raise ValueError(
                "monodromy images must keep the pushoff endpoints")

    top = _Chart(page, pushoffs, _TOP)
    bottom = _Chart(page, images, _BOTTOM)
    charts = (top, bottom)

    # vertices: one per strand through an arc, on either sheet
    v_alpha, v_beta, v_tag = [], [], []
    vertex_of = {}
    for chart in charts:
        for p, events in enumerate(chart.arr.events):
            for k, ev in enumerate(events):
                if ev[0] != "x":
                    continue
                vertex_of[(chart.sheet, p, k)] = len(v_alpha)
                v_alpha.append(ev[1])
                v_beta.append(p + 1)
                v_tag.append(("contact", p + 1) if chart.sheet == _TOP
                             else ("token", p + 1, k - 1))
    for j in range(n):
        hits = [ev for ev in top.arr.events[j] if ev[0] == "x"]
        if len(hits) != 1 or hits[0][1] != j + 1:
            raise RuntimeError("internal error: pushoff strays off its arc")

    # strand sequences through each arc, in arc-parameter order
    def arc_sides(i):
        pos1 = page.arc_side_pos(page.occurrence_of(i, entry_sign=1))
        pos2 = page.arc_side_pos(page.occurrence_of(i, entry_sign=-1))
        if page.cut_polygon[pos1].copy == "L":
            return pos1, pos2
        return pos2, pos1

    strands = {}
    for chart in charts:
        for i in range(1, n + 1):
            pos_l, pos_r = arc_sides(i)
            seq_l = [h[:2] for h in chart.arr.att_order[pos_l]]
            seq_r = [h[:2] for h in chart.arr.att_order[pos_r]]
            if seq_l != seq_r[::-1]:
                raise RuntimeError(
                    "internal error: arc copies disagree on strand order")
            strands[(chart.sheet, i)] = seq_l

    def alpha_instance(sheet, i, t, direction):
        """Walk instance of the arc piece at parameter slot t."""
        pos_l, pos_r = arc_sides(i)
        m = len(strands[(sheet, i)])
        if (direction > 0) == (sheet == _TOP):
            item = ("i", charts[sheet].corner_node(pos_l) + t)
        else:
            item = ("i", charts[sheet].corner_node(pos_r) + (m - t))
        return (sheet, item, 1 if sheet == _TOP else -1)

    other_side = {}
    for sheet in (_TOP, _BOTTOM):
        for i in range(1, n + 1):
            for t in range(len(strands[(sheet, i)]) + 1):
                fwd = alpha_instance(sheet, i, t, 1)
                bwd = alpha_instance(sheet, i, t, -1)
                other_side[fwd] = bwd
                other_side[bwd] = fwd

    def flip_side(instance):
        """The same curve piece walked with the other side on the left."""
        sheet, item, d = instance
        if item[0] == "c":
            return (sheet, item, -d)
        return other_side[instance]

    # final edges: chains of directed pieces between consecutive crossings
    edge_label = []
    edge_chain = []
    he_origin = []
    instance_home = {}

    def emit_edges(label, elems, walk_sink):
        """Split a cyclic piece/vertex sequence into edges at the vertices."""
        first_v = next(t for t, e in enumerate(elems) if e[0] == "v")
        elems = elems[first_v:] + elems[:first_v]
        breaks = [t for t, e in enumerate(elems) if e[0] == "v"]
        for which, t in enumerate(breaks):
            end = breaks[which + 1] if which + 1 < len(breaks) else len(elems)
            chain = [e[1] for e in elems[t + 1:end]]
            if not chain:
                raise RuntimeError("internal error: edge without pieces")
            head = elems[breaks[(which + 1) % len(breaks)]][1]
            e = len(edge_label)
            edge_label.append(label)
            edge_chain.append(tuple(chain))
            he_origin.extend((elems[t][1], head))
            walk_sink.append(2 * e)
            for s, inst in enumerate(chain):
                instance_home[inst] = (2 * e, s)
            for s, inst in enumerate(reversed(chain)):
                instance_home[flip_side(inst)] = (2 * e + 1, s)

    alpha_walk = []
    for i in range(1, n + 1):
        elems = []
        seq_top = strands[(_TOP, i)]
        seq_bot = strands[(_BOTTOM, i)]
        for t in range(len(seq_top) + 1):
            elems.append(("p", alpha_instance(_TOP, i, t, 1)))
            if t < len(seq_top):
                elems.append(("v", vertex_of[(_TOP,) + seq_top[t]]))
        for t in range(len(seq_bot), -1, -1):
            elems.append(("p", alpha_instance(_BOTTOM, i, t, -1)))
            if t > 0:
                elems.append(("v", vertex_of[(_BOTTOM,) + seq_bot[t - 1]]))
        walk = []
        emit_edges(("a", i), elems, walk)
        alpha_walk.append(walk)

    beta_walk = []
    for j in range(n):
        elems = []
        for c in range(len(top.arr.chords[j])):
            elems.append(("p", (_TOP, ("c", j, c), 1)))
            if c + 1 < len(top.arr.events[j]) - 1:
                elems.append(("v", vertex_of[(_TOP, j, c + 1)]))
        for c in range(len(bottom.arr.chords[j]) - 1, -1, -1):
            elems.append(("p", (_BOTTOM, ("c", j, c), -1)))
            if c > 0:
                elems.append(("v", vertex_of[(_BOTTOM, j, c)]))
        walk = []
        emit_edges(("b", j + 1), elems, walk)
        beta_walk.append(walk)

    # region walks: sheet faces stitched across the binding; the bottom
    # sheet is walked in reverse because the doubling flips it over
    nxt = {}
    prv = {}
    for chart in charts:
        for inst, to in chart.next_item.items():
            if chart.sheet == _TOP:
                a = (_TOP,) + inst
                b = (_TOP,) + to
            else:
                a = (_BOTTOM, to[0], -to[1])
                b = (_BOTTOM, inst[0], -inst[1])
            nxt[a] = b
            prv[b] = a

    parent = {}
    euler = {}
    for chart in charts:
        for f in range(chart.n_faces):
            parent[(chart.sheet, f)] = (chart.sheet, f)
            euler[(chart.sheet, f)] = 1

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def face_of(instance):
        sheet, item, d = instance
        if sheet == _BOTTOM:
            d = -d
        return find((sheet, charts[sheet].face_of[(item, d)]))

    for pos in range(page.n_sides):
        if page.cut_polygon[pos].kind != "boundary":
            continue
        tkeys = [(top.arr.events[p][k][1], p, top.arr.events[p][k][2])
                 for p, k, _role in top.arr.att_order[pos]]
        bkeys = [(bottom.arr.events[p][k][1], p, bottom.arr.events[p][k][2])
                 for p, k, _role in bottom.arr.att_order[pos]]
        if tkeys != bkeys:
            raise RuntimeError("internal error: sheets disagree on the binding")
        for t in range(len(tkeys) + 1):
            a = (_TOP, ("i", top.corner_node(pos) + t), 1)
            b = (_BOTTOM, ("i", bottom.corner_node(pos) + t), -1)
            ra, rb = face_of(a), face_of(b)
            if ra == rb:
                euler[ra] -= 1
            else:
                parent[rb] = ra
                euler[ra] += euler[rb] - 1
            na, nb = nxt.pop(a), nxt.pop(b)
            pa, pb = prv.pop(a), prv.pop(b)
            if pa == b and pb == a:
                raise RuntimeError("internal error: bare binding circle")
            if na == b:
                nxt[pa] = nb
                prv[nb] = pa
            elif nb == a:
                nxt[pb] = na
                prv[na] = pb
            else:
                nxt[pa] = nb
                prv[nb] = pa
                nxt[pb] = na
                prv[na] = pb

    # group the stitched cycles into regions, compressed to half-edges
    cycles = []
    pending = set(nxt)
    while pending:
        start = min(pending,
                    key=lambda inst: (inst[0],) + _instance_key(inst[1:]))
        cycle = []
        cur = start
        while True:
            cycle.append(cur)
            pending.discard(cur)
            cur = nxt[cur]
            if cur == start:
                break
        cycles.append(cycle)

    region_index = {}
    regions = []
    he_region_map = {}
    for cycle in cycles:
        root = face_of(cycle[0])
        for inst in cycle:
            if face_of(inst) != root:
                raise RuntimeError("internal error: cycle spans two regions")
        if root not in region_index:
            region_index[root] = len(regions)
            regions.append(Region(cycles=[], euler=euler[root]))
        r = region_index[root]
        starts = [t for t, inst in enumerate(cycle)
                  if instance_home[inst][1] == 0]
        if not starts:
            raise RuntimeError("internal error: boundary cycle never turns")
        cycle = cycle[starts[0]:] + cycle[:starts[0]]
        compressed = []
        t = 0
        while t < len(cycle):
            h, at = instance_home[cycle[t]]
            if at != 0:
                raise RuntimeError("internal error: chain starts mid-edge")
            for s in range(len(edge_chain[h // 2])):
                if instance_home[cycle[t + s]] != (h, s):
                    raise RuntimeError("internal error: chain broken in walk")
            compressed.append(h)
            he_region_map[h] = r
            t += len(edge_chain[h // 2])
        regions[r].cycles.append(compressed)

    # the basepoint sits just counterclockwise of the first pushoff's start
    u1 = top.node_index[("att", (0, 0, _END))]
    z0_region = region_index[face_of((_TOP, ("i", u1), 1))]
    regions[z0_region].pointed = True

    he_region = [he_region_map[h] for h in range(2 * len(edge_label))]
    diagram = HeegaardDiagram(
        page=page, n=n, v_alpha=v_alpha, v_beta=v_beta, v_tag=v_tag,
        alpha_walk=alpha_walk, beta_walk=beta_walk,
        edge_label=edge_label, he_origin=he_origin, regions=regions,
        he_region=he_region, z0_region=z0_region)
    diagram.validate()
    return diagram


__all__ = ["HeegaardDiagram", "Region", "assemble_diagram", "build_diagram"]

"""Metric realisation of the dendrite: beam lengths, the tree-geodesic metric,
finite nets of truncated dendrites and of the fans D_r, and a planar picture.

Length scheme: base beams have lengths L_0 = L_1 = 1 and L_j = 2^(1-j); a star
hanging at a level-l dyadic on a beam of length Lam is scaled by
Lam * 2^-(l+2), and its j-th beam has length scale * L_j.  Every length is
then a dyadic rational and every tail bound is a geometric series.

Distances are exact ``Fraction`` values measured along the unique arc between
two points.  The planar embedding is for drawing only.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadics import Dyadic, is_dyadic
from .itinerary import (
    ORIGIN,
    Finite,
    Itinerary,
    Lazy,
    Origin,
    pair_at,
)

# ---------------------------------------------------------------------------
# beam scheme


def base_length(j: int) -> Fraction:
    if j < 0:
        raise ValueError("branch indices are nonnegative")
    return Fraction(1) if j <= 1 else Fraction(1, 1 << (j - 1))


def star_scale(level: int, incoming: Fraction) -> Fraction:
    """Scale of a star hanging at a level-``level`` dyadic on a beam of length ``incoming``."""
    return incoming / (1 << (level + 2))


def base_angle(j: int) -> float:
    if j == 0:
        return math.pi
    if j == 1:
        return math.pi / 2
    return math.pi / (1 << j)


def beam_length(prefix: Sequence[tuple[int, Dyadic]], terminal_branch: int) -> Fraction:
    scale = Fraction(1)
    for n, a in prefix:
        scale = star_scale(a.l, scale * base_length(n))
    return scale * base_length(terminal_branch)


def subtree_diameter_bound(prefix: Sequence[tuple[int, Dyadic]], terminal_branch: int) -> Fraction:
    """Upper bound 4 * beam_length on the diameter of everything at or below the address."""
    return 4 * beam_length(prefix, terminal_branch)


# Star scales shrink by at least 1/8 per level, so the height of a subtree
# above its base is at most Lam * (1 + 1/8 + 1/64 + ...) = 8 Lam / 7.
def subtree_radius_bound(length: Fraction, depth_left: int | None = None) -> Fraction:
    """Distance bound from a beam's base to any point of the beam or its descendants.

    ``depth_left`` limits how many beams deep the descendants go (None: unlimited).
    """
    if depth_left is None:
        return length * Fraction(8, 7)
    return length * sum(Fraction(1, 8**i) for i in range(max(depth_left, 0)))


# ---------------------------------------------------------------------------
# exact intrinsic metric


@dataclass(frozen=True)
class Chain:
    """Resolved address of a point: per pair the branch, parameter and beam length.

    ``error`` bounds the distance between the resolved point and the true one
    (nonzero only for truncated infinite itineraries).
    """

    branches: tuple[int, ...]
    params: tuple[Fraction, ...]
    lengths: tuple[Fraction, ...]
    error: Fraction = Fraction(0)
    heights: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        h = [Fraction(0)] * (len(self.params) + 1)
        for i in range(len(self.params) - 1, -1, -1):
            h[i] = h[i + 1] + self.params[i] * self.lengths[i]
        object.__setattr__(self, "heights", tuple(h))

    def __len__(self) -> int:
        return len(self.params)


def _chain_from_pairs(pairs, error=Fraction(0)) -> Chain:
    branches, params, lengths = [], [], []
    scale = Fraction(1)
    for n, t, lev in pairs:
        lam = scale * base_length(n)
        branches.append(n)
        params.append(t)
        lengths.append(lam)
        if lev is not None:
            scale = star_scale(lev, lam)
    return Chain(tuple(branches), tuple(params), tuple(lengths), error)


def resolve(it: Itinerary, tol: Fraction = Fraction(1, 1024)) -> Chain:
    """Chain for ``it``; infinite itineraries are cut once the rest is below tol."""
    if isinstance(it, Origin):
        return Chain((), (), ())
    if isinstance(it, Finite):
        pairs = [(n, a.value, a.l) for n, a in it.steps]
        pairs.append((it.terminal_branch, it.param, None))
        return _chain_from_pairs(pairs)
    if tol <= 0:
        raise ValueError("truncation tolerance must be positive")
    pairs = []
    scale = Fraction(1)
    j = 0
    while True:
        n, t, _ = pair_at(it, j)
        lev = Dyadic.from_fraction(t).l
        pairs.append((n, t, lev))
        scale = star_scale(lev, scale * base_length(n))
        j += 1
        if j <= len(it.steps):
            continue
        nxt = pair_at(it, j)[0]
        bound = subtree_radius_bound(scale * base_length(nxt))
        if bound < tol:
            break
    # the true point sits in the subtree hanging at the last star center
    last_n, last_t, _ = pairs[-1]
    pairs[-1] = (last_n, last_t, None)
    return _chain_from_pairs(pairs, bound)


def chain_distance(x: Chain, y: Chain) -> Fraction:
    """Exact tree-geodesic distance between two resolved points."""
    i = 0
    k = min(len(x), len(y))
    while i < k and x.branches[i] == y.branches[i] and x.params[i] == y.params[i]:
        i += 1
    if i == len(x) or i == len(y) or x.branches[i] != y.branches[i]:
        return x.heights[i] + y.heights[i]
    return abs(x.params[i] - y.params[i]) * x.lengths[i] + x.heights[i + 1] + y.heights[i + 1]


def intrinsic_distance(a: Itinerary, b: Itinerary, tol: Fraction = Fraction(1, 1024)) -> Fraction:
    """Arc length between two points; within ``tol`` of the truth when either is infinite."""
    tol = Fraction(tol)
    return chain_distance(resolve(a, tol / 2), resolve(b, tol / 2))


class TreeIndex:
    """Exact nearest-neighbour queries in the tree metric over a fixed point set.

    The points are stored in a trie following their addresses.  Every star
    center keeps the distance to its nearest stored descendant; every beam
    keeps its occupied positions sorted together with prefix/suffix minima of
    (hang - t*Lam) and (hang + t*Lam), so the best point reachable along a beam
    is found by one bisection.  A query walks its own address and takes the
    minimum over the candidates met on the way, each of which is the length
    of a path to a stored point; the true nearest one is always among them.
    """

    class _Star:
        __slots__ = ("here", "beams", "best")

        def __init__(self) -> None:
            self.here = False
            self.beams: dict[int, TreeIndex._Beam] = {}
            self.best: Fraction | None = None

    class _Beam:
        __slots__ = ("length", "nodes", "ts", "left", "right")

        def __init__(self, length: Fraction) -> None:
            self.length = length
            self.nodes: dict[Fraction, TreeIndex._Star] = {}

    def __init__(self, chains: Iterable[Chain]) -> None:
        self.root = self._Star()
        self.size = 0
        for c in chains:
            self._insert(c)
        if not self.size:
            raise ValueError("empty point set")
        self._finish(self.root)

    def _insert(self, c: Chain) -> None:
        self.size += 1
        node = self.root
        for n, t, lam in zip(c.branches, c.params, c.lengths):
            beam = node.beams.get(n)
            if beam is None:
                beam = node.beams[n] = self._Beam(lam)
            node = beam.nodes.get(t)
            if node is None:
                node = beam.nodes[t] = self._Star()
        node.here = True

    def _finish(self, root: "TreeIndex._Star") -> None:
        # iterative post-order so deep chains do not hit the recursion limit
        order, stack = [], [root]
        while stack:
            s = stack.pop()
            order.append(s)
            for beam in s.beams.values():
                stack.extend(beam.nodes.values())
        for s in reversed(order):
            best = Fraction(0) if s.here else None
            for beam in s.beams.values():
                ts = sorted(beam.nodes)
                hang = [beam.nodes[t].best for t in ts]
                lam = beam.length
                left, right = [], [None] * len(ts)
                cur = None
                for t, h in zip(ts, hang):
                    v = h - t * lam
                    cur = v if cur is None or v < cur else cur
                    left.append(cur)
                cur = None
                for i in range(len(ts) - 1, -1, -1):
                    v = hang[i] + ts[i] * lam
                    cur = v if cur is None or v < cur else cur
                    right[i] = cur
                beam.ts, beam.left, beam.right = ts, left, right
                via = right[0]  # walking out from the center: min(t*lam + hang)
                best = via if best is None or via < best else best
            s.best = best

    @staticmethod
    def _along(beam: "TreeIndex._Beam", t: Fraction) -> Fraction:
        i = bisect.bisect_right(beam.ts, t)
        out = None
        if i > 0:
            out = t * beam.length + beam.left[i - 1]
        if i < len(beam.ts):
            v = beam.right[i] - t * beam.length
            out = v if out is None or v < out else out
        return out

    def nearest_distance(self, c: Chain) -> Fraction:
        node = self.root
        best = c.heights[0] + node.best
        for j in range(len(c)):
            if j:
                v = c.heights[j] + node.best
                if v < best:
                    best = v
            beam = node.beams.get(c.branches[j])
            if beam is None:
                break
            v = c.heights[j + 1] + self._along(beam, c.params[j])
            if v < best:
                best = v
            node = beam.nodes.get(c.params[j])
            if node is None or j == len(c) - 1:
                break
        return best


# ---------------------------------------------------------------------------
# nets


@dataclass(frozen=True)
class CompactApprox:
    """A finite net standing for a compact set.

    Every point of the target set lies within ``resolution`` of a listed point.
    Points are itineraries for dendrite nets and Fractions for interval nets.
    """

    label: str
    points: tuple
    resolution: Fraction

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a net needs at least one point")
        if self.resolution < 0:
            raise ValueError("resolution must be nonnegative")

    def to_json(self) -> dict:
        res = Fraction(self.resolution)
        return {
            "label": self.label,
            "resolution": f"{res.numerator}/{res.denominator}",
            "points": [_point_str(p) for p in self.points],
        }


def _point_str(p) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return str(p)


def _beam_step(length: Fraction, eps: Fraction, min_level: int) -> int:
    # smallest s >= min_level with length / 2^s <= eps
    s = max(min_level, 0)
    while length / (1 << s) > eps:
        s += 1
    return s


def build_net_D_truncated(
    star_depth: int, branch_cutoff: int, level_cutoff: int, eps: Fraction
) -> CompactApprox:
    """Net of the depth-``star_depth`` dendrite D_d.

    Kept: beams with index <= branch_cutoff and stars at dyadics of level <=
    level_cutoff, at most ``star_depth`` beams deep.  Each kept beam is sampled
    at dyadic parameter steps of arc length <= eps (fine enough to contain
    every kept star center).  The certified resolution is eps plus the radius
    of the largest discarded subtree.
    """
    eps = Fraction(eps)
    d, J, Lmax = star_depth, branch_cutoff, level_cutoff
    if d < 1 or J < 0 or Lmax < 0 or eps <= 0:
        raise ValueError("need star_depth >= 1, cutoffs >= 0 and eps > 0")
    if eps >= 2:
        # every point of the dendrite is within 8/7 < 2 of the origin
        return CompactApprox(f"D{d}-trivial", (ORIGIN,), Fraction(2))
    branch_tail = subtree_radius_bound(base_length(J + 1), d)
    level_tail = Fraction(0)
    if d >= 2:
        # biggest skipped star: level Lmax+1 on a unit-length base beam
        level_tail = subtree_radius_bound(star_scale(Lmax + 1, Fraction(1)), d - 1)
    resolution = eps + max(branch_tail, level_tail)
    if resolution > 1:
        raise ValueError(f"certified resolution {resolution} exceeds 1; refine the parameters")
    pts: list[Itinerary] = [ORIGIN]
    stack: list[tuple[tuple, Fraction]] = [((), Fraction(1))]
    while stack:
        prefix, scale = stack.pop()
        for n in range(J + 1):
            lam = scale * base_length(n)
            s = _beam_step(lam, eps, Lmax)
            den = 1 << s
            for i in range(1, den + 1):
                t = Fraction(i, den)
                pts.append(Finite(prefix, n, t))
                if len(prefix) + 1 < d and t < 1:
                    a = Dyadic.from_fraction(t)
                    if a.l <= Lmax:
                        stack.append((prefix + ((n, a),), star_scale(a.l, lam)))
    return CompactApprox(f"D{d}[J={J},L={Lmax}]", tuple(pts), resolution)


def build_net_Dr(r: Fraction, eps: Fraction, branch_cutoff: int) -> CompactApprox:
    """Net of D_r, the union of the arcs [0, u_j] with u_j at parameter r on beam j.

    Beams j <= branch_cutoff are sampled at equal parameter steps of arc length
    <= eps, always including u_j itself.
    """
    r, eps = Fraction(r), Fraction(eps)
    if not 0 <= r <= 1:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r == 0:
        return CompactApprox("D_0", (ORIGIN,), Fraction(0))
    pts: list[Itinerary] = [ORIGIN]
    for j in range(branch_cutoff + 1):
        m = max(1, math.ceil(r * base_length(j) / eps))
        pts.extend(Finite((), j, r * i / m) for i in range(1, m + 1))
    res = eps + r * base_length(branch_cutoff + 1)
    return CompactApprox(f"D_{r}", tuple(pts), res)


# ---------------------------------------------------------------------------
# planar picture

# Child stars open on the counter-clockwise side of their parent beam.  The
# base pattern (angles in (0, pi]) is squeezed by CHILD_SPREAD around the
# parent direction + pi/2 so no child beam runs back along its parent.
CHILD_SPREAD = 0.75


@dataclass(frozen=True)
class GeomPoint:
    x: float
    y: float


def _beam_angle(parent: float | None, j: int) -> float:
    if parent is None:
        return base_angle(j)
    return parent + math.pi / 2 + (base_angle(j) - math.pi / 2) * CHILD_SPREAD


def _ccw_clearance(is_root: bool, j: int) -> float:
    """Angle between beam j and the next ray counter-clockwise around its center."""
    if is_root:
        return math.pi / 2 if j <= 1 else math.pi / (1 << j)
    if j == 0:
        return (1 - CHILD_SPREAD) * math.pi / 2
    if j == 1:
        return CHILD_SPREAD * math.pi / 2
    return CHILD_SPREAD * math.pi / (1 << j)


def _planar_shrink(is_root: bool, j: int) -> float:
    # A star at distance s along the beam has drawn radius <= shrink * 2s/7,
    # which stays below s * sin(clearance) for this factor.
    return min(1.0, 3 * math.sin(_ccw_clearance(is_root, j)))


def realize_planar(it: Itinerary, depth_cap: int = 8) -> GeomPoint:
    """Planar position of a point; infinite itineraries are cut at depth_cap pairs.

    Drawn lengths never exceed intrinsic ones (stars in narrow wedges are
    drawn smaller), so Euclidean distance <= intrinsic distance.
    """
    if depth_cap < 1:
        raise ValueError("depth_cap must be at least 1")
    if isinstance(it, Origin):
        return GeomPoint(0.0, 0.0)
    if isinstance(it, Lazy):
        pairs = [pair_at(it, j)[:2] for j in range(depth_cap)]
    else:
        pairs = [(n, a.value) for n, a in it.steps] + [(it.terminal_branch, it.param)]
    x = y = 0.0
    scale = 1.0
    direction = None
    for n, t in pairs:
        ang = _beam_angle(direction, n)
        lam = scale * float(base_length(n))
        x += float(t) * lam * math.cos(ang)
        y += float(t) * lam * math.sin(ang)
        if is_dyadic(t):
            lev = Dyadic.from_fraction(t).l
            scale = lam * 2.0 ** -(lev + 2) * _planar_shrink(direction is None, n)
        direction = ang
    return GeomPoint(x, y)


@dataclass(frozen=True)
class Segment:
    key: tuple  # (prefix, branch)
    start: tuple[float, float]
    end: tuple[float, float]
    parent: tuple | None  # key of the beam carrying this segment's center


def truncated_segments(star_depth: int, branch_cutoff: int, level_cutoff: int) -> list[Segment]:
    """Straight drawn beams of the truncated dendrite."""
    out: list[Segment] = []
    stack = [((), 1.0, (0.0, 0.0), None, None)]
    while stack:
        prefix, scale, center, direction, parent = stack.pop()
        for n in range(branch_cutoff + 1):
            ang = _beam_angle(direction, n)
            lam = scale * float(base_length(n))
            c, s = math.cos(ang), math.sin(ang)
            end = (center[0] + lam * c, center[1] + lam * s)
            key = (prefix, n)
            out.append(Segment(key, center, end, parent))
            if len(prefix) + 1 >= star_depth:
                continue
            shrink = _planar_shrink(direction is None, n)
            for lev in range(1, level_cutoff + 1):
                for p in range(1, 1 << lev, 2):
                    t = p / (1 << lev)
                    stack.append(
                        (prefix + ((n, Dyadic(p, lev)),), lam * 2.0 ** -(lev + 2) * shrink,
                         (center[0] + t * lam * c, center[1] + t * lam * s), ang, key)
                    )
    return out


def _seg_point_dist(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.hypot(p[0] - ax, p[1] - ay)
    u = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2))
    return math.hypot(p[0] - ax - u * dx, p[1] - ay - u * dy)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def segment_distance(s1: tuple, s2: tuple) -> float:
    a, b = s1
    c, d = s2
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return 0.0
    return min(
        _seg_point_dist(a, c, d), _seg_point_dist(b, c, d),
        _seg_point_dist(c, a, b), _seg_point_dist(d, a, b),
    )


def embedding_disjointness_check(star_depth: int, branch_cutoff: int, level_cutoff: int) -> dict:
    """Check that the drawn beams only meet where the dendrite says they do.

    Beams of one star share their center and a child beam touches its parent
    beam at the child's center; such incident pairs are checked for a nonzero
    angle.  Every other pair must keep a positive gap.
    """
    segs = truncated_segments(star_depth, branch_cutoff, level_cutoff)
    min_gap = math.inf
    min_angle = math.inf
    offending = []
    for i in range(len(segs)):
        si = segs[i]
        for j in range(i + 1, len(segs)):
            sj = segs[j]
            incident = si.start == sj.start or sj.parent == si.key or si.parent == sj.key
            if incident:
                v1 = (si.end[0] - si.start[0], si.end[1] - si.start[1])
                v2 = (sj.end[0] - sj.start[0], sj.end[1] - sj.start[1])
                if si.start == sj.start:
                    ang = math.acos(max(-1.0, min(1.0, (v1[0] * v2[0] + v1[1] * v2[1])
                                                  / (math.hypot(*v1) * math.hypot(*v2)))))
                else:
                    ang = abs(math.asin(max(-1.0, min(1.0, (v1[0] * v2[1] - v1[1] * v2[0])
                                                       / (math.hypot(*v1) * math.hypot(*v2))))))
                min_angle = min(min_angle, ang)
                if ang <= 1e-12:
                    offending.append((_key_str(si.key), _key_str(sj.key), "parallel"))
                continue
            g = segment_distance((si.start, si.end), (sj.start, sj.end))
            if g < min_gap:
                min_gap = g
            if g <= 1e-12:
                offending.append((_key_str(si.key), _key_str(sj.key), "touch"))
    return {
        "segments": len(segs),
        "min_gap": min_gap if min_gap != math.inf else None,
        "min_incident_angle": min_angle if min_angle != math.inf else None,
        "passed": not offending,
        "offending": offending[:20],
    }


def _key_str(key) -> str:
    prefix, n = key
    return "(" + ",".join([f"{m},{a}" for m, a in prefix] + [str(n)]) + ")"


# ---------------------------------------------------------------------------
# SVG rendering


@dataclass(frozen=True)
class SvgStyle:
    size_px: int = 800
    stroke: str = "#1f3b73"
    stroke_width: float = 0.004
    marker_radius: float = 0.01
    marker_fill: str = "#c0392b"


@dataclass(frozen=True)
class Scene:
    nets: tuple = ()  # CompactApprox
    orbits: tuple = ()  # sequences of itineraries, one marker per entry


def _beam_center(it: Finite) -> GeomPoint:
    if not it.steps:
        return GeomPoint(0.0, 0.0)
    *rest, (n, a) = it.steps
    return realize_planar(Finite(tuple(rest), n, a.value))


def _xy(p: GeomPoint) -> str:
    # y axis flipped so the picture reads with y up
    return f"{p.x:.6f},{-p.y:.6f}"


def render_svg(scene: Scene, style: SvgStyle = SvgStyle()) -> str:
    """Deterministic SVG 1.1 document of the scene on the viewport [-1.1, 1.1]^2."""
    s = style
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s.size_px}" '
        f'height="{s.size_px}" viewBox="-1.1 -1.1 2.2 2.2">',
    ]
    for net in scene.nets:
        beams: dict[tuple, list] = {}
        lone = []
        for p in net.points:
            if isinstance(p, Finite):
                beams.setdefault((p.steps, p.terminal_branch), []).append(p)
            else:
                lone.append(p)
        lines.append(f'<g class="net" fill="none" stroke="{s.stroke}" stroke-width="{s.stroke_width}">')
        for key in sorted(beams, key=lambda k: _key_str(k)):
            pts = sorted(beams[key], key=lambda q: q.param)
            verts = [_beam_center(pts[0])] + [realize_planar(q) for q in pts]
            lines.append(f'<polyline points="{" ".join(_xy(v) for v in verts)}"/>')
        lines.append("</g>")
        if lone and not beams:
            lines.append(f'<g class="net-points" fill="{s.stroke}">')
            for p in lone:
                g = realize_planar(p)
                lines.append(f'<circle cx="{g.x:.6f}" cy="{-g.y:.6f}" r="{s.marker_radius}"/>')
            lines.append("</g>")
    for orb in scene.orbits:
        lines.append(f'<g class="orbit" fill="{s.marker_fill}">')
        for p in orb:
            g = realize_planar(p)
            lines.append(f'<circle cx="{g.x:.6f}" cy="{-g.y:.6f}" r="{s.marker_radius}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

"""Example spaces with known behaviour, and checkers that measure it.

* ``interval_example``: a null point splitting an interval, where perimeter
  additivity depends on whether null vertices may be re-assigned.
* ``fat_cantor_demo``: approximants of a fat Cantor set; covering most of it
  from inside costs more perimeter at every level.
* ``triangles_atoms``: a weighted square with a fan of triangles carrying point
  masses on their bases; minimizers keep the atoms and drop the triangles.
* ``tripod`` / ``tripod_window``: three unit squares glued along an edge, with
  a domain whose slits defeat extension and John-type conditions.
* ``square``: a padded square used as a well-behaved control.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import _kernels
from .extension import non_extension_witness
from .functional import PreconditionError, essential_perimeter, perimeter, relative_perimeter
from .minimize import MinimizerResult, Problem, Variant, minimize
from .space import (
    GridSpec,
    Space,
    VertexSet,
    add_atom,
    add_edges,
    as_mask,
    build_grid,
    build_path,
    default_scale,
    exterior_boundary,
    glue,
    graph_distance_scaled,
    scaled,
)


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    space: Space
    omega: VertexSet
    params: dict
    parts: dict = field(default_factory=dict)


def _exact_scale(*values, scale: int | None = None) -> int:
    """Least common multiple of the base scale and every denominator in ``values``."""
    base = default_scale() if scale is None else scale
    return math.lcm(base, *(Fraction(v).denominator for v in values))


def _dyadic_spacing(h) -> Fraction:
    h = Fraction(h)
    if h <= 0 or h.numerator != 1 or h.denominator & (h.denominator - 1):
        raise PreconditionError(f"spacing must be 1/2^m, got {h}")
    return h


# ---------------------------------------------------------------------------
# null point on an interval

@dataclass(frozen=True)
class AdditivityCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class IntervalReport:
    continuum: AdditivityCheck
    graph: AdditivityCheck
    closed_continuum: AdditivityCheck
    closed_graph: AdditivityCheck


def interval_example(scale: int | None = None) -> Scenario:
    """Vertices for x<0, (0,1), the point 1, (1,2), x>2; the point has zero measure.

    ``omega`` is the open set B = (0,1) u (1,2); ``parts`` holds A = (0,1) and
    the closed variant of B that also contains the point.
    """
    scale = default_scale() if scale is None else scale
    positions = [Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(5, 2)]
    lengths = [b - a for a, b in zip(positions, positions[1:])]
    space = build_path([1, 1, 0, 1, 1], [1] * 4, lengths, scale=scale, positions=[float(p) for p in positions])
    B = as_mask(space, [1, 3])
    parts = {"A": as_mask(space, [1]), "B": B, "B_closed": as_mask(space, [1, 2, 3]), "point": 2}
    return Scenario("interval", space, B, {}, parts)


def _additivity(space: Space, B, A, per) -> AdditivityCheck:
    return AdditivityCheck(per(A) + per(B & ~A), per(B) + 2 * relative_perimeter(space, B, A))


def interval_check(scn: Scenario) -> IntervalReport:
    """Both sides of ``Per(A) + Per(B\\A)`` vs ``Per(B) + 2 Per_B(A)``.

    The continuum reading lets null vertices take either side (essential
    perimeter); the graph reading uses raw cut capacities.
    """
    space, A = scn.space, scn.parts["A"]
    ess = lambda S: essential_perimeter(space, S)[0]
    raw = lambda S: perimeter(space, S)
    B, Bc = scn.parts["B"], scn.parts["B_closed"]
    return IntervalReport(_additivity(space, B, A, ess), _additivity(space, B, A, raw),
                          _additivity(space, Bc, A, ess), _additivity(space, Bc, A, raw))


# ---------------------------------------------------------------------------
# fat Cantor set

@dataclass(frozen=True)
class FatCantorReport:
    level: int
    epsilon: Fraction
    min_perimeter: Fraction
    kept: VertexSet
    dropped_measure: Fraction


def fat_cantor_demo(level: int, epsilon=Fraction(1, 100), scale: int | None = None) -> Scenario:
    """1-D space: pad, then alternating interval/gap vertices of the level-``level``
    approximant (gaps of length ``4^-n`` cut at step ``n``), then pad.

    Each vertex has measure equal to its length; all capacities are 1.
    ``omega`` is the union of the interval vertices.
    """
    if not 0 <= level <= 12:
        raise PreconditionError("level must be between 0 and 12")
    pieces = [(Fraction(0), Fraction(1), True)]
    for n in range(1, level + 1):
        gap = Fraction(1, 4**n)
        nxt = []
        for a, b, solid in pieces:
            if not solid:
                nxt.append((a, b, solid))
                continue
            half = (b - a - gap) / 2
            nxt += [(a, a + half, True), (a + half, a + half + gap, False), (a + half + gap, b, True)]
        pieces = nxt
    pieces = [(Fraction(-1), Fraction(0), False)] + pieces + [(Fraction(1), Fraction(2), False)]
    lengths = [b - a for a, b, _ in pieces]
    centers = [(a + b) / 2 for a, b, _ in pieces]
    scale = _exact_scale(*lengths, *centers, scale=scale)
    space = build_path(lengths, [1] * (len(pieces) - 1), [q - p for p, q in zip(centers, centers[1:])],
                       scale=scale, positions=[float(c) for c in centers])
    solid = np.array([s for _, _, s in pieces], dtype=bool)
    solid[0] = solid[-1] = False
    return Scenario("fat_cantor", space, solid, {"level": level, "epsilon": Fraction(epsilon)},
                    {"bounds": [(a, b) for a, b, _ in pieces]})


def fat_cantor_check(scn: Scenario, epsilon=None) -> FatCantorReport:
    """Least perimeter of ``G`` inside the set with less than ``epsilon`` of it left out.

    Interval vertices are pairwise non-adjacent, so ``Per(G) = 2 |G|``; dropping
    the lightest intervals first is optimal.
    """
    space, F = scn.space, scn.omega
    eps = Fraction(scn.params["epsilon"] if epsilon is None else epsilon)
    ids = np.flatnonzero(F)
    order = ids[np.argsort(space.measure[ids], kind="stable")]
    kept = F.copy()
    dropped = 0
    limit = eps * space.scale
    for v in order:
        if dropped + int(space.measure[v]) >= limit:
            break
        dropped += int(space.measure[v])
        kept[v] = False
    return FatCantorReport(scn.params["level"], eps, perimeter(space, kept), kept,
                           Fraction(dropped, space.scale))


# ---------------------------------------------------------------------------
# weighted square with a fan of triangles and atoms

@dataclass(frozen=True)
class TrianglesAtomsReport:
    lam: Fraction
    atom_kept: dict
    triangle_empty: dict
    threshold: int | None
    result: MinimizerResult


def triangles_atoms(n_max: int, h, lam=4, pad=None, strict: bool = True, scale: int | None = None) -> Scenario:
    """Vertex-centred grid over a neighbourhood of ``[0,1] x [-1, 1/2]``.

    Density is ``min(1, |y|, |y+1|)`` for ``-1 <= y <= 0`` and 1 elsewhere, so the
    lines ``y = 0`` and ``y = -1`` are null.  The domain is the open square
    ``(0,1) x (-1,0)`` plus triangles ``T_n`` (base ``[2^(1-2n), 2^(2-2n)]`` on
    ``y = 0``, base included, sides excluded) for ``n <= n_max``, with an atom
    of mass ``2^-n`` at each base midpoint.
    """
    h = _dyadic_spacing(h)
    if n_max < 1:
        raise PreconditionError("need at least one triangle")
    if strict and h > Fraction(1, 2 ** (2 * n_max + 2)):
        raise PreconditionError(f"h={h} cannot resolve triangle {n_max}; need h <= 2^-{2 * n_max + 2}")
    pad = 2 * h if pad is None else Fraction(pad)
    if (pad / h).denominator != 1:
        raise PreconditionError("padding must be a multiple of h")
    p = int(pad / h)
    inv = int(1 / h)
    cols = inv + 2 * p + 1
    rows = inv + inv // 2 + 2 * p + 1
    X = np.arange(cols) - p           # x / h
    Y = np.arange(rows) - p - inv     # y / h
    yy, xx = np.meshgrid(Y, X, indexing="ij")
    band = (yy >= -inv) & (yy <= 0)
    w_units = np.where(band, np.minimum(inv, np.minimum(-yy, yy + inv)), inv)   # density * inv
    scale = _exact_scale(h**3, h * h / 2, Fraction(1, 2**n_max), scale=scale)
    space = build_grid(GridSpec(cols, rows, h, weights=w_units / inv, origin=(-pad, -1 - pad)), scale=scale)

    Q = ((xx > 0) & (xx < inv) & (yy > -inv) & (yy < 0)).ravel()
    tri, atoms = {}, {}
    omega = Q.copy()
    for n in range(1, n_max + 1):
        a = Fraction(2, 4**n) / h
        if a.denominator != 1:
            tri[n] = np.zeros(space.n, dtype=bool)
            continue
        a = int(a)
        T = ((yy >= 0) & (yy < xx - a) & (xx - a < a - yy)).ravel()
        tri[n] = T
        omega |= T
        xa = int(Fraction(3, 4**n) / h) if (Fraction(3, 4**n) / h).denominator == 1 else None
        if xa is None:
            continue
        vid = int((p + inv) * cols + (xa + p))
        atoms[n] = vid
        space = add_atom(space, vid, Fraction(1, 2**n))
    params = {"n_max": n_max, "h": h, "lam": Fraction(lam), "pad": pad}
    return Scenario("triangles_atoms", space, omega, params, {"triangles": tri, "atoms": atoms, "square": Q})


def triangles_atoms_check(scn: Scenario, lam=None) -> TrianglesAtomsReport:
    """Minimize the inside functional; per triangle, is the atom kept and the rest dropped?

    ``threshold`` is the least ``n0`` such that both hold for every ``n >= n0``.
    """
    lam = scn.params["lam"] if lam is None else Fraction(lam)
    res = minimize(Problem(scn.space, scn.omega, lam, Variant.INSIDE))
    G = res.minimal_set
    kept, empty = {}, {}
    for n, T in scn.parts["triangles"].items():
        atom = scn.parts["atoms"].get(n)
        kept[n] = atom is not None and bool(G[atom])
        rest = T & G
        if atom is not None:
            rest[atom] = False
        empty[n] = not rest.any()
    threshold = None
    for n in sorted(kept, reverse=True):
        if not (kept[n] and empty[n]):
            break
        threshold = n
    return TrianglesAtomsReport(res.lam, kept, empty, threshold, res)


# ---------------------------------------------------------------------------
# tripod: three squares glued along the segment y = 0

SHEET_WEIGHTS = (2, 1, 1)


def _tripod_features(k_max: int):
    """Triangles per sheet as (left end, base width) and slit intervals, for k <= k_max."""
    big, small, slits = [], [], []
    for k in range(k_max + 1):
        a, b, s = Fraction(1, 2 ** (2 * k + 1)), Fraction(1, 4**k), Fraction(1, 2 ** (4 * k + 3))
        big.append((k, a, b - a))
        small += [(k, a, s), (k, b - s, s)]
        slits += [(k, a, a + s), (k, b - s, b)]
    return big, small, slits


def _in_triangles(x, y, tris):
    """Closed isosceles right triangles standing on y = 0 (apex height = width / 2)."""
    out = np.zeros(x.shape, dtype=bool)
    for _, left, width in tris:
        left, right = float(left), float(left + width)
        out |= (y <= x - left) & (y <= right - x)
    return out


def _tripod_space(h: Fraction, k_max: int, c0: int, c1: int, rows: int, scale: int | None):
    cols = c1 - c0
    big, small, slits = _tripod_features(k_max)
    x_lo, x_hi = c0 * h, c1 * h
    cuts = {c * h for c in range(c0, c1 + 1)}
    cuts |= {e for _, s0, s1 in slits for e in (s0, s1) if x_lo < e < x_hi}
    cuts = sorted(cuts)
    pieces = list(zip(cuts, cuts[1:]))
    lens = [b - a for a, b in pieces]
    centers = [(a + b) / 2 for a, b in pieces]
    total_w = sum(SHEET_WEIGHTS)
    scale = _exact_scale(h * h, *(total_w * h * l for l in lens),
                         *((l + m) / 2 for l, m in zip(lens, lens[1:])), h / 2, scale=scale)

    sheets = [build_grid(GridSpec(cols, rows, h, weights=w, origin=((c0 + Fraction(1, 2)) * h, h / 2)), scale=scale)
              for w in SHEET_WEIGHTS]
    line = build_path([total_w * h * l for l in lens], [total_w * h] * (len(pieces) - 1),
                      [(l + m) / 2 for l, m in zip(lens, lens[1:])], scale=scale,
                      positions=[float(c) for c in centers])
    space = glue(sheets + [line])
    sheet_off = [s * rows * cols for s in range(3)]
    line_off = 3 * rows * cols

    piece_col = [int(a / h) - c0 for a, _ in pieces]
    pairs, caps, lengths = [], [], []
    for i, (col, l) in enumerate(zip(piece_col, lens)):
        for s, w in enumerate(SHEET_WEIGHTS):
            pairs.append((line_off + i, sheet_off[s] + col))
            caps.append(w * l)
            lengths.append(h)
    space = add_edges(space, pairs, caps, lengths)

    # raster charts: row 0 shows the line piece under each column centre
    row0 = np.empty(cols, dtype=np.int64)
    starts = np.array([float(a) for a, _ in pieces])
    for c in range(cols):
        row0[c] = line_off + np.searchsorted(starts, float((c0 + c + Fraction(1, 2)) * h), side="right") - 1
    sheet_ids = [off + np.arange(rows * cols).reshape(rows, cols) for off in sheet_off]
    space = replace(space, charts=tuple(np.vstack([row0, ids]) for ids in sheet_ids))

    xc = (c0 + 0.5 + np.arange(cols)) * float(h)
    yc = (0.5 + np.arange(rows)) * float(h)
    yy, xx = np.meshgrid(yc, xc, indexing="ij")
    omega = np.zeros(space.n, dtype=bool)
    omega[sheet_ids[0].ravel()] = True
    omega[sheet_ids[1].ravel()] = _in_triangles(xx, yy, big).ravel()
    omega[sheet_ids[2].ravel()] = _in_triangles(xx, yy, small).ravel()
    J = np.zeros(space.n, dtype=bool)
    for i, (a, b) in enumerate(pieces):
        if any(s0 <= a and b <= s1 for _, s0, s1 in slits):
            J[line_off + i] = True
    omega |= J
    E = {}
    for tri in big:
        mask = np.zeros(space.n, dtype=bool)
        mask[sheet_ids[1].ravel()] = _in_triangles(xx, yy, [tri]).ravel()
        if mask.any():
            E[tri[0]] = mask
    parts = {"E": E, "J": J, "sheets": sheet_ids, "line": line_off + np.arange(len(pieces)),
             "pieces": pieces}
    return space, omega, parts


def _check_tripod_resolution(h: Fraction, k_max: int, strict: bool):
    if k_max < 0:
        raise PreconditionError("k_max must be nonnegative")
    if strict and h > Fraction(1, 2 ** (4 * k_max + 4)):
        raise PreconditionError(f"h={h} cannot resolve slit {k_max}; need h <= 2^-{4 * k_max + 4}")


def tripod(k_max: int, h, strict: bool = True, scale: int | None = None) -> Scenario:
    """Three ``1 x 1`` sheets with densities 2, 1, 1 glued along ``y = 0``.

    Each sheet is a cell-centred grid; the shared segment is a chain of pieces
    cut at column boundaries and slit endpoints, so slits narrower than a cell
    keep their exact width.  The domain is the whole first sheet, triangles
    ``E_k`` on the second, pairs of small triangles over the slits on the
    third, and the slits themselves, for ``k <= k_max``.
    """
    h = _dyadic_spacing(h)
    _check_tripod_resolution(h, k_max, strict)
    n = int(1 / h)
    space, omega, parts = _tripod_space(h, k_max, 0, n, n, scale)
    return Scenario("tripod", space, omega, {"k_max": k_max, "h": h}, parts)


def tripod_window(k: int, h, margin=None, k_max: int | None = None, strict: bool = True,
                  scale: int | None = None) -> Scenario:
    """The part of the tripod around ``E_k``: columns over its base widened by
    ``margin`` on both sides, rows up to its apex plus ``margin``.

    Quantities supported near ``E_k`` (its measure, relative perimeter, best
    extension, local geodesics) agree with the full tripod once the margin
    exceeds the reach of the optimal extension; the default margin (the base
    width) is enough for the extension of ``E_k``.  Narrower windows let the
    extension escape through their free edges and underestimate its cost.
    """
    h = _dyadic_spacing(h)
    k_max = k if k_max is None else k_max
    _check_tripod_resolution(h, k, strict)
    a, b = Fraction(1, 2 ** (2 * k + 1)), Fraction(1, 4**k)
    margin = b - a if margin is None else Fraction(margin)
    c0 = max(0, math.floor((a - margin) / h))
    c1 = min(int(1 / h), math.ceil((b + margin) / h))
    rows = min(int(1 / h), math.ceil(((b - a) / 2 + margin) / h))
    space, omega, parts = _tripod_space(h, k_max, c0, c1, rows, scale)
    return Scenario("tripod_window", space, omega,
                    {"k": k, "k_max": k_max, "h": h, "margin": margin, "columns": (c0, c1), "rows": rows}, parts)


def tripod_symdiff_optimum(scn: Scenario, lam=1) -> MinimizerResult:
    """Global minimum of ``Per(A) + lam m(A ^ omega)`` over all vertex sets."""
    return minimize(Problem(scn.space, scn.omega, lam, Variant.SYMDIFF))


@dataclass(frozen=True)
class ExtensionRatioReport:
    ks: list
    ratios: list
    quotients: list


def _quotients(vals):
    return [b / a for a, b in zip(vals, vals[1:])]


def tripod_extension_ratios(scn: Scenario, ks) -> ExtensionRatioReport:
    """Extension ratios of the triangles ``E_k`` in one tripod scenario."""
    family = [scn.parts["E"][k] & scn.omega for k in ks]
    _, ratios = non_extension_witness(scn.space, scn.omega, family)
    return ExtensionRatioReport(list(ks), ratios, _quotients(ratios))


def tripod_extension_ratios_windows(ks, spacing) -> ExtensionRatioReport:
    """Like :func:`tripod_extension_ratios` with one window per ``k``; ``spacing`` maps k to h."""
    ratios = []
    for k in ks:
        scn = tripod_window(k, spacing[k])
        ratios.append(non_extension_witness(scn.space, scn.omega, [scn.parts["E"][k]])[1][0])
    return ExtensionRatioReport(list(ks), ratios, _quotients(ratios))


# ---------------------------------------------------------------------------
# geodesic John-type probe

class NoEscapeError(RuntimeError):
    """No vertex of the domain lies at the requested distance from the probe point."""


@dataclass(frozen=True)
class JohnProbeResult:
    ratio: float
    path: list
    endpoint: int
    escape_radius: Fraction


def john_probe(space: Space, omega, center, y: int, escape_radius) -> JohnProbeResult:
    """Best geodesic carrot from ``y`` to points at distance ``>= escape_radius``.

    Over every ``z`` in ``omega`` at least ``escape_radius`` from ``y`` (distance
    inside ``omega``) and every shortest path from ``y`` to ``z`` inside
    ``omega``, take the minimum over path vertices ``w != y`` of
    ``dist(w, boundary) / dist_omega(y, w)``; return the largest such value and
    a path achieving it.  ``center``, when given, must lie within
    ``escape_radius`` of ``y``.  Edge lengths must be positive.
    """
    omega = as_mask(space, omega)
    y = int(y)
    if not omega[y]:
        raise PreconditionError("probe point must lie in omega")
    radius = Fraction(escape_radius)
    if radius < 0:
        raise ValueError("escape_radius must be nonnegative")
    R = math.ceil(radius * space.scale)
    d_y = graph_distance_scaled(space, [y], within=omega)
    if center is not None:
        d_c = graph_distance_scaled(space, [int(center)])
        if d_c[y] > R:
            raise PreconditionError("probe point is farther than escape_radius from the center")
    if R == 0:
        return JohnProbeResult(math.inf, [y], y, radius)
    seeds = exterior_boundary(space, omega)
    inf = _kernels.INF_DIST
    delta = graph_distance_scaled(space, seeds) if seeds.any() else np.full(space.n, inf, dtype=np.int64)
    reach = d_y != inf
    score = np.full(space.n, np.inf)
    ok = reach & (d_y > 0)
    score[ok] = np.where(delta[ok] == inf, np.inf, delta[ok] / np.maximum(d_y[ok], 1))
    order = np.flatnonzero(reach)
    order = order[np.argsort(d_y[order], kind="stable")]
    start, to, _, length = space.csr
    best, pred = _kernels.geodesic_bottleneck(start, to, length, d_y, order, score, y)
    admissible = reach & (d_y >= R)
    if not admissible.any():
        raise NoEscapeError(f"no vertex of omega at distance >= {radius} from the probe point")
    cand = np.flatnonzero(admissible)
    z = int(cand[np.argmax(best[cand])])
    path = [z]
    while path[-1] != y:
        path.append(int(pred[path[-1]]))
    return JohnProbeResult(float(best[z]), path[::-1], z, radius)


@dataclass(frozen=True)
class CarrotProbeReport:
    k: int
    h: Fraction
    ratio: float
    bound: float
    probe: JohnProbeResult


def tripod_carrot_probe(k: int, h=None, margin=None) -> CarrotProbeReport:
    """John probe from a point inside ``E_k`` of a tripod window.

    The probe point is the sheet-2 cell nearest to the middle of ``E_k`` at a
    quarter of its apex height; the escape radius is its farthest distance to
    ``E_k`` plus one cell.  Default spacing puts eight cells across each slit.
    """
    h = Fraction(1, 2 ** (4 * k + 6)) if h is None else _dyadic_spacing(h)
    a, b = Fraction(1, 2 ** (2 * k + 1)), Fraction(1, 4**k)
    scn = tripod_window(k, h, (b - a) / 4 if margin is None else margin)
    space, omega = scn.space, scn.omega
    E = scn.parts["E"][k]
    target = (float(a + a / 2), float(a / 4))
    ids = np.flatnonzero(E)
    xy = space.coords[ids]
    y = int(ids[np.argmin(np.abs(xy[:, 0] - target[0]) + np.abs(xy[:, 1] - target[1]))])
    d = graph_distance_scaled(space, [y], within=omega)
    radius = Fraction(int(d[E].max()), space.scale) + h
    line = scn.parts["line"]
    base_mid = float(a + a / 2)
    center = int(line[np.argmin(np.abs(space.coords[line, 0] - base_mid))])
    probe = john_probe(space, omega, center, y, radius)
    return CarrotProbeReport(k, h, probe.ratio, 2.0 ** (-2 * k - 1), probe)


# ---------------------------------------------------------------------------
# control: padded square

def square(n: int, pad: int = 1, side=1, scale: int | None = None) -> Scenario:
    """Cell-centred ``n x n`` grid of a square of the given side (h = side/n, unit
    density) inside ``pad`` layers of exterior cells.  ``omega`` is the square."""
    side = Fraction(side)
    if n < 1 or pad < 0 or side <= 0:
        raise PreconditionError("need n >= 1, pad >= 0 and a positive side")
    h = side / n
    scale = _exact_scale(h * h, h / 2, scale=scale)
    m = n + 2 * pad
    space = build_grid(GridSpec(m, m, h, origin=((Fraction(1, 2) - pad) * h, (Fraction(1, 2) - pad) * h)),
                       scale=scale)
    r, c = np.divmod(np.arange(space.n), m)
    omega = (r >= pad) & (r < pad + n) & (c >= pad) & (c < pad + n)
    return Scenario("square", space, omega, {"n": n, "pad": pad, "side": side, "h": h}, {})


def square_triangles(scn: Scenario, ks) -> list[VertexSet]:
    """The tripod's ``E_k`` shapes placed on the bottom edge of a square scenario."""
    xy = scn.space.coords
    out = []
    for k in ks:
        big, _, _ = _tripod_features(k)
        out.append(scn.omega & _in_triangles(xy[:, 0], xy[:, 1], [big[k]]))
    return out


BUILTINS = {
    "interval": interval_example,
    "fat_cantor": fat_cantor_demo,
    "triangles_atoms": triangles_atoms,
    "tripod": tripod,
    "tripod_window": tripod_window,
    "square": square,
}


def build(name: str, **params) -> Scenario:
    try:
        builder = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(BUILTINS)}") from None
    return builder(**params)

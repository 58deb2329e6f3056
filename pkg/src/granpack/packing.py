"""Disk packing by simple sequential inhibition under a porosity target.

The flow is: estimate how many disks the target porosity needs, draw
``K`` times as many radii up front, then place them one by one in draw
order. Each disk gets up to ``j_max`` uniform candidate centres; the first
disk that cannot be placed ends the packing for good.

Overlap tests go through a uniform cell grid in which every disk is
registered in all the cells its bounding box touches. The trial loop is
compiled with numba; candidates are drawn with numpy in blocks, so the
random stream (and hence the packing) depends only on the seed.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np

from . import distributions as dist
from .errors import (
    DomainError,
    DomainTooSmall,
    FirstParticleFailed,
    NonFiniteMoment,
    RadiiExhausted,
)

DEFAULT_JMAX = 30_000
DEFAULT_K = 10
MOMENT_SAMPLE_SIZE = 1_000_000
PACKING_HEADER = ("x_mm", "y_mm", "r_mm")
_MAX_CELLS = 4_000_000


# -- domains -------------------------------------------------------------------

@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned box ``[0, width] x [0, height]`` in mm."""

    width: float
    height: float

    kind = 0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise DomainError("rectangle sides must be positive")

    @property
    def area(self):
        return self.width * self.height

    @property
    def bbox(self):
        return (0.0, 0.0, float(self.width), float(self.height))

    @property
    def vertices(self):
        w, h = float(self.width), float(self.height)
        return np.array([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]])

    def contains_disk(self, x, y, r):
        x, y, r = np.asarray(x), np.asarray(y), np.asarray(r)
        return (x - r >= 0) & (x + r <= self.width) & (y - r >= 0) & (y + r <= self.height)

    def to_json(self):
        return {"kind": "rectangle", "width_mm": float(self.width), "height_mm": float(self.height)}


def _segments_cross(p1, p2, p3, p4):
    def orient(a, b, c):
        v = float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        return (v > 0) - (v < 0)

    def on_seg(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    o1, o2, o3, o4 = orient(p1, p2, p3), orient(p1, p2, p4), orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and on_seg(p1, p2, p3)) or (o2 == 0 and on_seg(p1, p2, p4))
            or (o3 == 0 and on_seg(p3, p4, p1)) or (o4 == 0 and on_seg(p3, p4, p2)))


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple polygon; vertices are stored counter-clockwise."""

    vertices: np.ndarray

    kind = 1

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DomainError("polygon needs at least 3 (x, y) vertices")
        if np.allclose(v[0], v[-1]) and v.shape[0] > 3:
            v = v[:-1]
        signed = 0.5 * float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
        if signed == 0:
            raise DomainError("polygon has zero area")
        if signed < 0:
            v = v[::-1].copy()
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise DomainError("polygon is not simple (edges cross)")
        object.__setattr__(self, "vertices", np.ascontiguousarray(v))

    @property
    def area(self):
        v = self.vertices
        return 0.5 * float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))

    @property
    def bbox(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def contains_disk(self, x, y, r):
        x, y, r = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(r, float))
        out = np.empty(x.shape, dtype=bool)
        for i in np.ndindex(x.shape):
            out[i] = _disk_in_polygon(self.vertices, x[i], y[i], r[i])
        return out

    def to_json(self):
        return {"kind": "polygon", "vertices_mm": self.vertices.tolist()}


def domain_from_json(obj):
    if obj["kind"] == "rectangle":
        return Rectangle(obj["width_mm"], obj["height_mm"])
    if obj["kind"] == "polygon":
        return Polygon(np.array(obj["vertices_mm"], dtype=float))
    raise DomainError(f"unknown domain kind {obj['kind']!r}")


def parse_domain(text):
    """``"WxH"`` in mm, e.g. ``"20x20"``."""
    try:
        w, h = (float(s) for s in text.lower().split("x"))
    except ValueError:
        raise DomainError(f"domain must look like WxH, got {text!r}") from None
    return Rectangle(w, h)


def read_polygon(path):
    with open(path, encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows and rows[0][0].strip().lower().startswith("x"):
        rows = rows[1:]
    return Polygon(np.array([[float(a), float(b)] for a, b in rows]))


# -- compiled kernels ----------------------------------------------------------

@numba.njit(cache=True)
def _point_in_polygon(v, x, y):
    inside = False
    n = v.shape[0]
    j = n - 1
    for i in range(n):
        xi, yi = v[i, 0], v[i, 1]
        xj, yj = v[j, 0], v[j, 1]
        if (yi > y) != (yj > y):
            xc = xi + (y - yi) * (xj - xi) / (yj - yi)
            if x < xc:
                inside = not inside
        j = i
    return inside


@numba.njit(cache=True)
def _disk_in_polygon(v, x, y, r):
    if not _point_in_polygon(v, x, y):
        return False
    n = v.shape[0]
    r2 = r * r
    for i in range(n):
        ax, ay = v[i, 0], v[i, 1]
        bx, by = v[(i + 1) % n, 0], v[(i + 1) % n, 1]
        ex, ey = bx - ax, by - ay
        t = ((x - ax) * ex + (y - ay) * ey) / (ex * ex + ey * ey)
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        dx = x - (ax + t * ex)
        dy = y - (ay + t * ey)
        if dx * dx + dy * dy < r2:
            return False
    return True


@numba.njit(cache=True)
def _cell_range(lo, hi, origin, h, n):
    a = int(math.floor((lo - origin) / h))
    b = int(math.floor((hi - origin) / h))
    if a < 0:
        a = 0
    if b > n - 1:
        b = n - 1
    return a, b


@numba.njit(cache=True)
def _overlaps_brute(x, y, r, xs, ys, rs, count):
    for k in range(count):
        dx = x - xs[k]
        dy = y - ys[k]
        s = r + rs[k]
        if dx * dx + dy * dy < s * s:
            return True
    return False


@numba.njit(cache=True)
def _overlaps_grid(x, y, r, xs, ys, rs, head, nxt, item, x0, y0, h, nx, ny):
    ix0, ix1 = _cell_range(x - r, x + r, x0, h, nx)
    iy0, iy1 = _cell_range(y - r, y + r, y0, h, ny)
    for iy in range(iy0, iy1 + 1):
        for ix in range(ix0, ix1 + 1):
            link = head[iy * nx + ix]
            while link >= 0:
                k = item[link]
                dx = x - xs[k]
                dy = y - ys[k]
                s = r + rs[k]
                if dx * dx + dy * dy < s * s:
                    return True
                link = nxt[link]
    return False


@numba.njit(cache=True)
def _first_fit(cands, r, kind, w, h_dom, poly, xs, ys, rs, count,
               use_grid, head, nxt, item, x0, y0, cell, nx, ny, budget):
    """Scan candidate centres in order; return (accepted row or -1, trials used)."""
    trials = 0
    for c in range(cands.shape[0]):
        x = cands[c, 0]
        y = cands[c, 1]
        if kind == 1:
            # bounding-box draws outside W are not trials: they are the rejection step of uniform sampling on W
            if not _point_in_polygon(poly, x, y):
                continue
            trials += 1
            inside = _disk_in_polygon(poly, x, y, r)
        else:
            trials += 1
            inside = x - r >= 0.0 and x + r <= w and y - r >= 0.0 and y + r <= h_dom
        if inside:
            if use_grid:
                hit = _overlaps_grid(x, y, r, xs, ys, rs, head, nxt, item, x0, y0, cell, nx, ny)
            else:
                hit = _overlaps_brute(x, y, r, xs, ys, rs, count)
            if not hit:
                return c, trials
        if trials >= budget:
            return -1, trials
    return -1, trials


@numba.njit(cache=True)
def _grid_insert(head, nxt, item, n_links, idx, ix0, ix1, iy0, iy1, nx):
    for iy in range(iy0, iy1 + 1):
        for ix in range(ix0, ix1 + 1):
            c = iy * nx + ix
            item[n_links] = idx
            nxt[n_links] = head[c]
            head[c] = n_links
            n_links += 1
    return n_links


# -- spatial index ---------------------------------------------------------------

class GridIndex:
    """Uniform cell grid over a bounding box.

    A disk is registered in every cell overlapped by its bounding square, so
    any two overlapping disks share at least one cell whatever their sizes.
    """

    def __init__(self, bbox, cell_size, capacity=1024):
        x0, y0, x1, y1 = bbox
        cell_size = float(cell_size)
        if not cell_size > 0:
            raise ValueError("cell size must be positive")
        span = max(x1 - x0, y1 - y0)
        # cap the number of cells for very small radii
        cell_size = max(cell_size, span / math.sqrt(_MAX_CELLS) * 1.000001)
        self.x0, self.y0 = float(x0), float(y0)
        self.cell_size = cell_size
        self.nx = max(1, math.ceil((x1 - x0) / cell_size))
        self.ny = max(1, math.ceil((y1 - y0) / cell_size))
        self.head = np.full(self.nx * self.ny, -1, dtype=np.int64)
        self.nxt = np.empty(capacity, dtype=np.int64)
        self.item = np.empty(capacity, dtype=np.int64)
        self.n_links = 0
        self.max_radius = 0.0

    def _cells(self, x, y, r):
        ix0, ix1 = _cell_range(x - r, x + r, self.x0, self.cell_size, self.nx)
        iy0, iy1 = _cell_range(y - r, y + r, self.y0, self.cell_size, self.ny)
        return ix0, ix1, iy0, iy1

    def insert(self, idx, x, y, r):
        ix0, ix1, iy0, iy1 = self._cells(x, y, r)
        need = self.n_links + (ix1 - ix0 + 1) * (iy1 - iy0 + 1)
        if need > self.item.size:
            cap = max(need, 2 * self.item.size)
            self.item = np.resize(self.item, cap)
            self.nxt = np.resize(self.nxt, cap)
        self.n_links = _grid_insert(self.head, self.nxt, self.item, self.n_links, idx, ix0, ix1, iy0, iy1, self.nx)
        self.max_radius = max(self.max_radius, float(r))

    def neighbors(self, x, y, radius):
        """Indices of every disk that could overlap a disk of ``radius`` at (x, y)."""
        ix0, ix1, iy0, iy1 = self._cells(x, y, radius)
        found = set()
        for iy in range(iy0, iy1 + 1):
            for ix in range(ix0, ix1 + 1):
                link = self.head[iy * self.nx + ix]
                while link >= 0:
                    found.add(int(self.item[link]))
                    link = self.nxt[link]
        return sorted(found)


def grid_insert(index, idx, particle):
    x, y, r = particle
    index.insert(idx, x, y, r)
    return index


def grid_neighbors(index, center, search_radius):
    return index.neighbors(center[0], center[1], search_radius)


def default_cell_size(radii):
    """Twice the median radius: small disks stay few per cell, large ones span several."""
    radii = np.asarray(radii, dtype=float)
    return 2.0 * float(np.median(radii)) if radii.size else 1.0


# -- placement state -------------------------------------------------------------

class PackingState:
    """Growing arrays of committed disks, in placement order."""

    def __init__(self, capacity):
        capacity = max(1, int(capacity))
        self.xs = np.empty(capacity)
        self.ys = np.empty(capacity)
        self.rs = np.empty(capacity)
        self.count = 0

    def append(self, x, y, r):
        if self.count == self.xs.size:
            cap = 2 * self.xs.size
            self.xs, self.ys, self.rs = (np.resize(a, cap) for a in (self.xs, self.ys, self.rs))
        self.xs[self.count] = x
        self.ys[self.count] = y
        self.rs[self.count] = r
        self.count += 1


_EMPTY_POLY = np.zeros((3, 2))
_EMPTY_LINKS = np.zeros(1, dtype=np.int64)


def _draw_candidates(domain, rng, n):
    x0, y0, x1, y1 = domain.bbox
    u = rng.random((n, 2))
    u[:, 0] = x0 + (x1 - x0) * u[:, 0]
    u[:, 1] = y0 + (y1 - y0) * u[:, 1]
    return u


def ssi_try_place(domain, index, state, r, j_max, rng):
    """Try up to ``j_max`` uniform centres for a disk of radius ``r``.

    Commits the disk to ``state`` (and ``index`` unless it is None, in which
    case overlaps are tested by brute force) and returns True on the first
    admissible centre; returns False, leaving everything unchanged, when all
    trials fail.
    """
    j_max = int(j_max)
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    r = float(r)
    if isinstance(domain, Polygon):
        kind, w, h, poly = 1, 0.0, 0.0, domain.vertices
    else:
        kind, w, h, poly = 0, float(domain.width), float(domain.height), _EMPTY_POLY
    if index is None:
        use_grid, head, nxt, item = False, _EMPTY_LINKS, _EMPTY_LINKS, _EMPTY_LINKS
        gx0 = gy0 = cell = 0.0
        nx = ny = 1
    else:
        use_grid, head, nxt, item = True, index.head, index.nxt, index.item
        gx0, gy0, cell, nx, ny = index.x0, index.y0, index.cell_size, index.nx, index.ny
    used = 0
    block = 16
    while used < j_max:
        cands = _draw_candidates(domain, rng, block)
        row, trials = _first_fit(cands, r, kind, w, h, poly, state.xs, state.ys, state.rs, state.count,
                                 use_grid, head, nxt, item, gx0, gy0, cell, nx, ny, j_max - used)
        used += trials
        if row >= 0:
            x, y = float(cands[row, 0]), float(cands[row, 1])
            if index is not None:
                index.insert(state.count, x, y, r)
            state.append(x, y, r)
            return True
        block = min(4 * block, 4096)
    return False


# -- radius model ------------------------------------------------------------------

@dataclass
class RadiusModel:
    """Maps draws from a fitted size law to disk radii in mm.

    With ``fit_space="log"`` the law describes shifted log-diameters ``L``
    and ``R = (ref_diameter_mm / 2) * log_base ** (ell_floor + L)``. With
    ``fit_space="linear"`` the law describes radii in mm directly.
    """

    size_model: dist.SizeModel
    fit_space: str = "log"
    log_base: float = math.e
    ref_diameter_mm: float = 0.001
    ell_floor: float = 0.0
    moment_sample_size: int = MOMENT_SAMPLE_SIZE
    moment_seed: int = 0
    _moments: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.fit_space not in ("log", "linear"):
            raise ValueError(f"fit_space must be 'log' or 'linear', got {self.fit_space!r}")
        if self.fit_space == "linear" and not dist.positive_support(self.size_model):
            raise DomainError("a law with support on the whole line cannot describe radii directly")
        if self.fit_space == "linear" and isinstance(self.size_model, dist.Constant) and self.size_model.value <= 0:
            raise DomainError("constant radius must be positive")

    def radii_from(self, values):
        values = np.asarray(values, dtype=float)
        if self.fit_space == "linear":
            return values
        return 0.5 * self.ref_diameter_mm * np.power(float(self.log_base), self.ell_floor + values)

    def sample_radii(self, n, rng):
        return self.radii_from(dist.sample(self.size_model, n, rng))

    def to_json(self):
        return dist.model_to_json(self.size_model, self.log_base, self.ref_diameter_mm,
                                  ell_floor=float(self.ell_floor), fit_space=self.fit_space)

    @classmethod
    def from_json(cls, obj):
        model, meta = dist.model_from_json(obj)
        return cls(model, meta.get("fit_space", "log"), meta.get("log_base", math.e),
                   meta.get("ref_diameter_mm", 0.001), meta.get("ell_floor", 0.0))


def radius_moments(model, rng=None):
    """``(E(R), Var(R))`` in mm and mm^2, cached on the model.

    Closed forms in linear space and for a constant law; otherwise a Monte
    Carlo estimate from ``model.moment_sample_size`` draws.
    """
    if model._moments is not None and rng is None:
        return model._moments
    m = model.size_model
    if model.fit_space == "linear":
        moments = (dist.mean(m), dist.variance(m))
    elif isinstance(m, dist.Constant):
        moments = (float(model.radii_from(m.value)), 0.0)
    else:
        gen = np.random.default_rng(model.moment_seed) if rng is None else rng
        r = model.sample_radii(model.moment_sample_size, gen)
        with np.errstate(over="ignore", invalid="ignore"):
            moments = (float(np.mean(r)), float(np.var(r)))
    if not all(math.isfinite(v) for v in moments) or moments[0] <= 0:
        raise NonFiniteMoment(f"radius moments are not finite: {moments}")
    model._moments = moments
    return moments


def estimate_particle_count(area, eta, moments):
    """Disks needed for porosity ``eta``: ``(1 - eta) area / (pi (Var + E^2))``.

    Rounded half up with a floor of 1; a ``DomainTooSmall`` warning is issued
    when the formula would give 0.
    """
    area = float(getattr(area, "area", area))
    if not 0 <= eta < 1:
        raise ValueError(f"porosity must lie in [0, 1), got {eta}")
    e, var = moments
    raw = (1.0 - eta) * area / (math.pi * (var + e * e))
    n = math.floor(raw + 0.5)
    if n < 1:
        warnings.warn(f"domain of area {area} cannot hold one mean-sized disk at porosity {eta}", DomainTooSmall)
        n = 1
    return n


# -- packing -----------------------------------------------------------------------

@dataclass
class Packing:
    x: np.ndarray
    y: np.ndarray
    r: np.ndarray
    achieved_porosity: float
    target_porosity: float
    domain: object
    seed: object = None
    termination_reason: str = ""
    estimated_count: int = 0
    radii_drawn: np.ndarray = field(default=None, repr=False)
    j_max: int = DEFAULT_JMAX
    K: int = DEFAULT_K

    @property
    def particle_count(self):
        return int(self.r.size)

    @property
    def particles(self):
        return list(zip(self.x.tolist(), self.y.tolist(), self.r.tolist()))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(PACKING_HEADER)
        for x, y, r in zip(self.x, self.y, self.r):
            w.writerow([repr(float(x)), repr(float(y)), repr(float(r))])
        return buf.getvalue()

    def report(self, model_ref=None):
        return {
            "target_porosity": float(self.target_porosity),
            "achieved_porosity": float(self.achieved_porosity),
            "particle_count": self.particle_count,
            "estimated_count": int(self.estimated_count),
            "seed": self.seed,
            "domain": self.domain.to_json(),
            "model_ref": model_ref,
            "j_max": int(self.j_max),
            "K": int(self.K),
            "termination_reason": self.termination_reason,
        }


def read_packing_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != PACKING_HEADER:
        raise ValueError("packing CSV must start with header x_mm,y_mm,r_mm")
    data = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float).reshape(-1, 3)
    return data[:, 0], data[:, 1], data[:, 2]


def achieved_porosity(packing, area=None):
    """``1 - sum(pi r^2) / area``; ``packing`` may be a Packing or an array of radii."""
    if isinstance(packing, Packing):
        r = packing.r
        area = packing.domain.area if area is None else area
    else:
        r = np.asarray(packing, dtype=float)
    return 1.0 - math.pi * float(np.sum(r * r)) / float(area)


def sequential_pack(domain, model, eta, K=DEFAULT_K, j_max=DEFAULT_JMAX, rng=None, *,
                    use_grid=True, count=None, cell_size=None):
    """Place disks in draw order until the porosity drops to ``eta``.

    Parameters
    ----------
    domain : Rectangle or Polygon
    model : RadiusModel
    eta : float
        Target porosity in (0, 1).
    K : float
        Oversampling factor; ``K * N`` radii are drawn, N being the
        estimated particle count.
    j_max : int
        Candidate centres tried per disk.
    rng : int, SeedSequence or numpy Generator
        Source of both the radii and the candidate centres.
    use_grid : bool
        Use the cell grid for overlap tests (False: brute force; the
        placement decisions are identical).
    count : int, optional
        Override the estimated particle count N.

    Raises
    ------
    FirstParticleFailed
        If not even the first disk fits.
    RadiiExhausted
        If every drawn radius was placed without reaching ``eta``; the
        partial packing is attached to the exception.
    """
    if not 0 < eta < 1:
        raise ValueError(f"target porosity must lie in (0, 1), got {eta}")
    if not K > 1:
        raise ValueError(f"oversampling factor K must exceed 1, got {K}")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = np.random.default_rng(rng)
    area = domain.area
    n_est = int(count) if count is not None else estimate_particle_count(area, eta, radius_moments(model))
    n_draw = max(1, int(math.ceil(K * n_est)))
    radii = model.sample_radii(n_draw, gen)
    if not np.all(np.isfinite(radii)) or np.any(radii <= 0):
        raise NonFiniteMoment("drawn radii must be finite and positive")

    state = PackingState(min(n_draw, 1024))
    index = None
    if use_grid:
        index = GridIndex(domain.bbox, cell_size or default_cell_size(radii), capacity=4 * min(n_draw, 1024))

    porosity = 1.0
    reason = "target_reached"
    i = 0
    while porosity > eta:
        if i == n_draw:
            reason = "radii_exhausted"
            break
        ri = radii[i]
        if not ssi_try_place(domain, index, state, ri, j_max, gen):
            reason = "placement_failed"
            break
        porosity -= math.pi * ri * ri / area
        i += 1

    if state.count == 0:
        raise FirstParticleFailed(f"FAIL: the first particle (r={radii[0]:.6g} mm) could not be placed in the domain")
    n = state.count
    packing = Packing(state.xs[:n].copy(), state.ys[:n].copy(), state.rs[:n].copy(), porosity, eta, domain,
                      seed, reason, n_est, radii, j_max, K)
    if reason == "radii_exhausted":
        raise RadiiExhausted(f"all {n_draw} radii placed, porosity {porosity:.4f} still above {eta}", packing)
    return packing


# -- verification --------------------------------------------------------------------

def overlapping_pairs(x, y, r, tol=1e-9):
    """All pairs (i < j) whose centre distance is below ``r_i + r_j - tol``.

    Exact, using a k-d tree to restrict candidates to pairs closer than
    ``2 max(r)``.
    """
    from scipy.spatial import cKDTree

    x, y, r = (np.asarray(a, dtype=float) for a in (x, y, r))
    if r.size < 2:
        return []
    pts = np.column_stack([x, y])
    pairs = cKDTree(pts).query_pairs(2.0 * float(r.max()), output_type="ndarray")
    if pairs.size == 0:
        return []
    i, j = pairs[:, 0], pairs[:, 1]
    d = np.hypot(x[i] - x[j], y[i] - y[j])
    bad = d < r[i] + r[j] - tol
    return sorted(map(tuple, np.sort(pairs[bad], axis=1).tolist()))


def overlapping_pairs_brute(x, y, r, tol=1e-9):
    """O(n^2) reference version of :func:`overlapping_pairs`."""
    x, y, r = (np.asarray(a, dtype=float) for a in (x, y, r))
    out = []
    for i in range(r.size - 1):
        d = np.hypot(x[i + 1:] - x[i], y[i + 1:] - y[i])
        for j in np.nonzero(d < r[i] + r[i + 1:] - tol)[0]:
            out.append((i, i + 1 + int(j)))
    return out


def verify_packing(packing, brute=None):
    """Raise AssertionError unless disks are disjoint, inside the domain and the porosity adds up."""
    brute = packing.particle_count <= 5000 if brute is None else brute
    finder = overlapping_pairs_brute if brute else overlapping_pairs
    bad = finder(packing.x, packing.y, packing.r)
    if bad:
        raise AssertionError(f"{len(bad)} overlapping pairs, first {bad[0]}")
    inside = packing.domain.contains_disk(packing.x, packing.y, packing.r)
    if not np.all(inside):
        raise AssertionError(f"{int(np.sum(~inside))} disks cross the domain boundary")
    eta = achieved_porosity(packing)
    if abs(eta - packing.achieved_porosity) > 1e-9:
        raise AssertionError(f"stored porosity {packing.achieved_porosity} != recomputed {eta}")
    return True

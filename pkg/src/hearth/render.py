"""Deterministic software raycast renderer.

One primary ray per pixel center against every enabled collider box, flat
per-variant colors with a single fixed directional light, no antialiasing.
All math runs in float64 with a fixed operation order per pixel, so the
output bytes are identical regardless of how many workers carve up the
rows - rendering twice, anywhere, hashes the same.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .camera import Camera
from .scene import Scene, scene_colliders

SKY_COLOR = (16, 16, 16)
_WALL_COLOR = (0.82, 0.80, 0.76)
_FLOOR_COLOR = (0.42, 0.38, 0.33)
AMBIENT = 0.3
DIFFUSE = 0.7
# Light travels along (-1,-2,-1); shading uses the direction toward it.
_INV_SQRT6 = 1.0 / math.sqrt(6.0)
_LIGHT_TOWARD = np.array([_INV_SQRT6, 2.0 * _INV_SQRT6, _INV_SQRT6])

_HUGE = 1e30


@dataclass(slots=True)
class FrameSet:
    width: int
    height: int
    rgb: bytes
    depth: np.ndarray | None = None  # (H, W) float32 meters
    instance_ids: np.ndarray | None = None  # (H, W) int32 indices into id_table
    id_table: list[str] | None = None

    def rgb_array(self) -> np.ndarray:
        return np.frombuffer(self.rgb, dtype=np.uint8).reshape(self.height, self.width, 3)

    def buffer_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.rgb)
        if self.depth is not None:
            h.update(self.depth.tobytes())
        if self.instance_ids is not None:
            h.update(self.instance_ids.tobytes())
            h.update("\x00".join(self.id_table or []).encode())
        return h.hexdigest()


class _RenderScene:
    """Collider boxes flattened into arrays plus per-part shading color."""

    def __init__(self, scene: Scene, catalog):
        colliders = scene_colliders(scene, catalog)
        owners = sorted({c.owner for c in colliders})
        self.id_table = owners
        owner_index = {o: i for i, o in enumerate(owners)}
        by_id = {inst.object_id: inst for inst in scene.all_instances()}
        n = len(colliders)
        self.bmin = np.zeros((n, 3))
        self.bmax = np.zeros((n, 3))
        self.color = np.zeros((n, 3))
        self.owner = np.zeros(n, dtype=np.int32)
        for i, c in enumerate(colliders):
            self.bmin[i] = (c.box.min.x, c.box.min.y, c.box.min.z)
            self.bmax[i] = (c.box.max.x, c.box.max.y, c.box.max.z)
            self.owner[i] = owner_index[c.owner]
            inst = by_id.get(c.owner)
            if inst is None:
                self.color[i] = _FLOOR_COLOR if c.owner == "Floor" else _WALL_COLOR
            else:
                cls = catalog.get(inst.category)
                base = np.array(cls.variant_params[inst.variant_index].color)
                if inst.is_toggled:
                    base = np.clip(base * 1.5, 0.0, 1.0)
                self.color[i] = base
        self.center = (self.bmin + self.bmax) / 2.0
        self.half = np.maximum((self.bmax - self.bmin) / 2.0, 1e-9)


def _pixel_dirs(camera: Camera, row0: int, row1: int) -> np.ndarray:
    """(row1-row0, W, 3) unit ray directions through pixel centers."""
    forward, right, up = camera.basis()
    f = np.array(forward.to_list())
    r = np.array(right.to_list())
    u = np.array(up.to_list())
    w, h = camera.width, camera.height
    xs = ((np.arange(w) + 0.5) / w) * 2.0 - 1.0
    ys = 1.0 - ((np.arange(row0, row1) + 0.5) / h) * 2.0
    d = (
        f[None, None, :]
        + xs[None, :, None] * (camera.tan_half_hfov * r)[None, None, :]
        + ys[:, None, None] * (camera.tan_half_vfov * u)[None, None, :]
    )
    norm = np.sqrt(np.sum(d * d, axis=2, keepdims=True))
    return d / norm


_BOX_EDGES = (
    (0, 1), (2, 3), (4, 5), (6, 7),  # z edges
    (0, 2), (1, 3), (4, 6), (5, 7),  # y edges
    (0, 4), (1, 5), (2, 6), (3, 7),  # x edges
)


def _screen_bounds(rs: _RenderScene, camera: Camera) -> list[tuple[int, int, int, int] | None]:
    """Per-part pixel bbox (r0, r1, c0, c1), conservative.

    Each box is clipped against the near plane; the projection of the
    clipped convex hull bounds every pixel whose ray can hit the box, so
    pixels outside the bbox are provably misses. None marks parts that
    cannot appear at all. A one pixel margin absorbs float rounding.
    """
    forward, right, up = camera.basis()
    eye = np.array(camera.position.to_list())
    f = np.array(forward.to_list())
    r = np.array(right.to_list())
    u = np.array(up.to_list())
    w, h = camera.width, camera.height
    th, tv = camera.tan_half_hfov, camera.tan_half_vfov
    near = 1e-4
    out: list[tuple[int, int, int, int] | None] = []
    for p in range(rs.bmin.shape[0]):
        lo, hi = rs.bmin[p], rs.bmax[p]
        corners = np.array(
            [
                (x, y, z)
                for x in (lo[0], hi[0])
                for y in (lo[1], hi[1])
                for z in (lo[2], hi[2])
            ]
        )
        # eye inside the box: rays in every direction can hit it
        if np.all(lo - 1e-9 <= eye) and np.all(eye <= hi + 1e-9):
            out.append((0, h, 0, w))
            continue
        v = corners - eye
        depth = v @ f
        front = depth > near
        points = [v[i] for i in range(8) if front[i]]
        if not np.all(front):
            for a, b in _BOX_EDGES:
                if front[a] == front[b]:
                    continue
                t = (near - depth[a]) / (depth[b] - depth[a])
                points.append(v[a] + t * (v[b] - v[a]))
        if not points:
            out.append(None)
            continue
        pts = np.array(points)
        d = pts @ f
        px = (pts @ r) / (d * th)
        py = (pts @ u) / (d * tv)
        c0 = int(np.floor((px.min() + 1.0) * 0.5 * w)) - 1
        c1 = int(np.ceil((px.max() + 1.0) * 0.5 * w)) + 1
        r1 = int(np.ceil((1.0 - py.min()) * 0.5 * h)) + 1
        r0 = int(np.floor((1.0 - py.max()) * 0.5 * h)) - 1
        c0, c1 = max(c0, 0), min(c1, w)
        r0, r1 = max(r0, 0), min(r1, h)
        out.append((r0, r1, c0, c1) if (r0 < r1 and c0 < c1) else None)
    return out


def _render_rows(rs: _RenderScene, camera: Camera, bounds, row0: int, row1: int):
    w = camera.width
    n_rows = row1 - row0
    dirs = _pixel_dirs(camera, row0, row1)
    origin = np.array(camera.position.to_list())
    with np.errstate(divide="ignore"):
        inv = 1.0 / dirs
    inv = np.where(np.isfinite(inv), inv, np.copysign(_HUGE, inv))
    inv_x, inv_y, inv_z = inv[:, :, 0], inv[:, :, 1], inv[:, :, 2]
    rel_min = rs.bmin - origin
    rel_max = rs.bmax - origin
    best_t = np.full((n_rows, w), np.inf)
    best_part = np.full((n_rows, w), -1, dtype=np.int64)
    for p in range(rs.bmin.shape[0]):
        b = bounds[p]
        if b is None:
            continue
        pr0, pr1, pc0, pc1 = b
        pr0, pr1 = max(pr0, row0), min(pr1, row1)
        if pr0 >= pr1:
            continue
        s = (slice(pr0 - row0, pr1 - row0), slice(pc0, pc1))
        ix, iy, iz = inv_x[s], inv_y[s], inv_z[s]
        t1 = rel_min[p, 0] * ix
        t2 = rel_max[p, 0] * ix
        tn = np.minimum(t1, t2)
        tf = np.maximum(t1, t2)
        t1 = rel_min[p, 1] * iy
        t2 = rel_max[p, 1] * iy
        np.maximum(tn, np.minimum(t1, t2), out=tn)
        np.minimum(tf, np.maximum(t1, t2), out=tf)
        t1 = rel_min[p, 2] * iz
        t2 = rel_max[p, 2] * iz
        np.maximum(tn, np.minimum(t1, t2), out=tn)
        np.minimum(tf, np.maximum(t1, t2), out=tf)
        t_hit = np.maximum(tn, 0.0)
        bt = best_t[s]  # view; writes land in best_t
        hit = (tn <= tf) & (tf >= 0.0) & (t_hit < bt)
        if not hit.any():
            continue
        bt[hit] = t_hit[hit]
        best_part[s][hit] = p
    flat_t = best_t.reshape(-1)
    flat_part = best_part.reshape(-1)
    hit_mask = flat_part >= 0
    rgb = np.empty((n_rows * w, 3))
    rgb[:] = np.array(SKY_COLOR) / 255.0
    if np.any(hit_mask):
        idx = flat_part[hit_mask]
        t = flat_t[hit_mask]
        points = origin[None, :] + dirs.reshape(-1, 3)[hit_mask] * t[:, None]
        rel = (points - rs.center[idx]) / rs.half[idx]
        axis = np.argmax(np.abs(rel), axis=1)
        sign = np.sign(np.take_along_axis(rel, axis[:, None], axis=1))[:, 0]
        lambert = np.maximum(sign * _LIGHT_TOWARD[axis], 0.0)
        shade = AMBIENT + DIFFUSE * lambert
        rgb[hit_mask] = rs.color[idx] * shade[:, None]
    rgb_bytes = np.clip(np.rint(rgb * 255.0), 0.0, 255.0).astype(np.uint8)
    depth = flat_t.astype(np.float32)
    ids = np.where(hit_mask, rs.owner[np.maximum(flat_part, 0)], np.int32(-1)).astype(np.int32)
    return rgb_bytes, depth, ids


def render_frame(
    scene: Scene,
    camera: Camera,
    catalog=None,
    render_depth: bool = False,
    render_instance_ids: bool = False,
    workers: int = 1,
) -> FrameSet:
    """Render RGB (always) plus optional depth / instance-id buffers.

    ``workers`` splits rows across threads; the buffers are bit-identical
    for every worker count.
    """
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    rs = _RenderScene(scene, catalog)
    bounds = _screen_bounds(rs, camera)
    w, h = camera.width, camera.height
    rgb = np.empty((h, w, 3), dtype=np.uint8)
    depth = np.empty((h, w), dtype=np.float32)
    ids = np.empty((h, w), dtype=np.int32)

    def run(span: tuple[int, int]) -> None:
        row0, row1 = span
        r, d, i = _render_rows(rs, camera, bounds, row0, row1)
        n = row1 - row0
        rgb[row0:row1] = r.reshape(n, w, 3)
        depth[row0:row1] = d.reshape(n, w)
        ids[row0:row1] = i.reshape(n, w)

    if workers <= 1:
        run((0, h))
    else:
        edges = np.linspace(0, h, workers + 1, dtype=int)
        spans = [(int(edges[k]), int(edges[k + 1])) for k in range(workers) if edges[k] < edges[k + 1]]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, spans))

    return FrameSet(
        width=w,
        height=h,
        rgb=rgb.tobytes(),
        depth=depth if render_depth else None,
        instance_ids=ids if render_instance_ids else None,
        id_table=rs.id_table if render_instance_ids else None,
    )

"""Rapidly-exploring random tree planners over 2D workspaces.

`plan` grows a tree from the environment start until a vertex lands within
gamma of the goal.  `replan` is the recovery variant used after the vehicle
has drifted off a previously planned path: it grows a fresh tree rooted at
the current position and terminates either at the goal or as soon as it
reconnects to a waypoint of the nominal path, whichever a sample reaches
first.  The caller keeps following the original path from that junction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .env import Environment, DEFAULT_RESOLUTION, is_in_obstacle, segment_free

# Edge lengths never exceed steer's gamma; allow only float slack on top.
SPACING_SLACK = 1e-9


class StartInCollisionError(ValueError):
    """Planning was asked to start from an occupied state."""


@dataclass
class RrtConfig:
    gamma: float = 0.5
    max_iters: int = 20000
    goal_bias: float = 0.05
    resolution: float = DEFAULT_RESOLUTION
    seed: int = 0


@dataclass(frozen=True)
class Path:
    """Waypoint polyline; consecutive waypoints are at most gamma apart."""

    waypoints: np.ndarray  # (N, 2), N >= 1

    def __post_init__(self):
        wp = np.asarray(self.waypoints, dtype=float)
        if wp.ndim != 2 or wp.shape[1] != 2 or wp.shape[0] < 1:
            raise ValueError(f"waypoints must be (N, 2) with N >= 1, got {wp.shape}")
        object.__setattr__(self, "waypoints", wp)

    def __len__(self) -> int:
        return len(self.waypoints)

    def length(self) -> float:
        return float(np.linalg.norm(np.diff(self.waypoints, axis=0), axis=1).sum())


@dataclass
class Tree:
    """Vertices with parent links; vertex 0 is the root."""

    vertices: list[np.ndarray] = field(default_factory=list)
    parents: list[int | None] = field(default_factory=list)

    def add(self, point: np.ndarray, parent: int | None) -> int:
        self.vertices.append(np.asarray(point, dtype=float))
        self.parents.append(parent)
        return len(self.vertices) - 1

    def path_to(self, index: int) -> Path:
        chain = []
        node: int | None = index
        while node is not None:
            chain.append(self.vertices[node])
            node = self.parents[node]
        return Path(np.asarray(chain[::-1]))


def sample_state(rng: np.random.Generator, env: Environment,
                 goal_bias: float) -> np.ndarray:
    """Uniform draw over the bounds, returning the goal with prob. goal_bias."""
    if rng.random() < goal_bias:
        return np.asarray(env.goal, dtype=float)
    lo, hi = env.bounds.lo, env.bounds.hi
    return np.array([rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1])])


def nearest_neighbor(points, q) -> int:
    """Index of the point closest to q; ties resolve to the lowest index."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("points must be a non-empty (N, 2) array")
    d2 = (pts[:, 0] - q[0]) ** 2 + (pts[:, 1] - q[1]) ** 2
    return int(np.argmin(d2))


def steer(from_point, toward, gamma: float) -> np.ndarray:
    """toward if within gamma of from_point, else gamma along the ray to it."""
    a = np.asarray(from_point, dtype=float)
    b = np.asarray(toward, dtype=float)
    diff = b - a
    dist = math.hypot(diff[0], diff[1])
    if dist <= gamma:
        return b.copy()
    return a + (gamma / dist) * diff


class _PointIndex:
    """Exact nearest-point lookup.

    Linear numpy scan while the set is small; above _LINEAR_CAP points the
    index switches to a uniform grid with expanding ring search, which keeps
    20k-vertex trees fast.  Both paths return the lowest index on ties.
    """

    _LINEAR_CAP = 4096

    def __init__(self, cell: float, capacity: int):
        self._cell = max(cell, 1e-9)
        self._pts = np.empty((capacity, 2))
        self._n = 0
        self._grid: dict[tuple[int, int], list[int]] | None = None

    def _cell_of(self, p) -> tuple[int, int]:
        return (int(math.floor(p[0] / self._cell)),
                int(math.floor(p[1] / self._cell)))

    def add(self, p: np.ndarray) -> int:
        idx = self._n
        if idx == len(self._pts):
            self._pts = np.concatenate([self._pts, np.empty_like(self._pts)])
        self._pts[idx] = p
        self._n = idx + 1
        if self._grid is None and self._n > self._LINEAR_CAP:
            self._grid = {}
            for k in range(self._n):
                self._grid.setdefault(self._cell_of(self._pts[k]), []).append(k)
        elif self._grid is not None:
            self._grid.setdefault(self._cell_of(p), []).append(idx)
        return idx

    def point(self, idx: int) -> np.ndarray:
        return self._pts[idx]

    def nearest(self, q) -> int:
        if self._n == 0:
            raise ValueError("index is empty")
        if self._grid is None:
            pts = self._pts[: self._n]
            d2 = (pts[:, 0] - q[0]) ** 2 + (pts[:, 1] - q[1]) ** 2
            return int(np.argmin(d2))
        cx, cy = self._cell_of(q)
        best_d2 = math.inf
        best_idx = -1
        ring = 0
        while True:
            cells = self._ring_cells(cx, cy, ring)
            for cell in cells:
                for k in self._grid.get(cell, ()):
                    p = self._pts[k]
                    d2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
                    if d2 < best_d2 or (d2 == best_d2 and k < best_idx):
                        best_d2, best_idx = d2, k
            # points in rings beyond `ring` are at least ring*cell away
            if best_idx >= 0 and best_d2 <= (ring * self._cell) ** 2:
                return best_idx
            ring += 1

    @staticmethod
    def _ring_cells(cx: int, cy: int, ring: int):
        if ring == 0:
            return [(cx, cy)]
        cells = []
        for dx in range(-ring, ring + 1):
            cells.append((cx + dx, cy - ring))
            cells.append((cx + dx, cy + ring))
        for dy in range(-ring + 1, ring):
            cells.append((cx - ring, cy + dy))
            cells.append((cx + ring, cy + dy))
        return cells


def _try_goal_hop(tree: Tree, idx: int, vertex: np.ndarray, goal: np.ndarray,
                  t: float, env: Environment, cfg: RrtConfig) -> Path | None:
    """Finish the tree at the goal if the new vertex is within gamma of it."""
    if np.array_equal(vertex, goal):
        return tree.path_to(idx)
    if (math.hypot(vertex[0] - goal[0], vertex[1] - goal[1]) < cfg.gamma
            and segment_free(vertex, goal, t, env, cfg.resolution)):
        return tree.path_to(tree.add(goal, idx))
    return None


def plan(env: Environment, cfg: RrtConfig, t: float = 0.0,
         rng: np.random.Generator | None = None) -> Path | None:
    """Grow a tree from env.start to env.goal at fixed time t.

    Returns the waypoint path, or None if max_iters samples never reach the
    goal.  Obstacles are evaluated at the single timestamp t throughout.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    start = np.asarray(env.start, dtype=float)
    goal = np.asarray(env.goal, dtype=float)
    if is_in_obstacle(start, t, env):
        raise StartInCollisionError(f"start {tuple(start)} is occupied at t={t}")

    tree = Tree()
    index = _PointIndex(cfg.gamma, capacity=min(cfg.max_iters + 2, 8192))
    tree.add(start, None)
    index.add(start)

    for _ in range(cfg.max_iters):
        sample = sample_state(rng, env, cfg.goal_bias)
        near_idx = index.nearest(sample)
        new_point = steer(index.point(near_idx), sample, cfg.gamma)
        if not segment_free(index.point(near_idx), new_point, t, env, cfg.resolution):
            continue
        new_idx = tree.add(new_point, near_idx)
        index.add(new_point)
        found = _try_goal_hop(tree, new_idx, new_point, goal, t, env, cfg)
        if found is not None:
            return found
    return None


def replan(nominal: Path, current, env: Environment, cfg: RrtConfig,
           t: float, rng: np.random.Generator | None = None) -> Path | None:
    """Reconnect from `current` back to the nominal path or to the goal.

    Tree growth mirrors `plan`, but each sample also nominates its nearest
    nominal-path waypoint as a junction candidate: if the newly added vertex
    lands within gamma of that waypoint (with a free edge), the path closes
    there and ends at the waypoint itself, copied verbatim so callers can
    splice by exact match.  Terminating at the goal keeps priority.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    current = np.asarray(current, dtype=float)
    goal = np.asarray(env.goal, dtype=float)
    waypoints = nominal.waypoints
    if is_in_obstacle(current, t, env):
        raise StartInCollisionError(f"replan start {tuple(current)} is occupied at t={t}")

    tree = Tree()
    index = _PointIndex(cfg.gamma, capacity=min(cfg.max_iters + 2, 8192))
    tree.add(current, None)
    index.add(current)

    # Degenerate entry: the root itself may already satisfy a termination rule.
    root_hop = _try_goal_hop(tree, 0, current, goal, t, env, cfg)
    if root_hop is not None:
        return root_hop
    near_wp = waypoints[nearest_neighbor(waypoints, current)]
    if (math.hypot(current[0] - near_wp[0], current[1] - near_wp[1]) < cfg.gamma
            and segment_free(current, near_wp, t, env, cfg.resolution)):
        return tree.path_to(tree.add(near_wp, 0))

    for _ in range(cfg.max_iters):
        sample = sample_state(rng, env, cfg.goal_bias)
        junction = waypoints[nearest_neighbor(waypoints, sample)]
        near_idx = index.nearest(sample)
        new_point = steer(index.point(near_idx), sample, cfg.gamma)
        if not segment_free(index.point(near_idx), new_point, t, env, cfg.resolution):
            continue
        new_idx = tree.add(new_point, near_idx)
        index.add(new_point)
        found = _try_goal_hop(tree, new_idx, new_point, goal, t, env, cfg)
        if found is not None:
            return found
        if (math.hypot(new_point[0] - junction[0], new_point[1] - junction[1]) < cfg.gamma
                and segment_free(new_point, junction, t, env, cfg.resolution)):
            return tree.path_to(tree.add(junction, new_idx))
    return None

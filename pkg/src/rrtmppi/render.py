"""Minimal SVG 1.1 rendering of workspaces, trees, paths, and trajectories.

Obstacle outlines are drawn solid for the base shapes and dotted for every
scheduled (post-change) shape, so a single picture shows both phases of a
dynamic scene.  The y axis is flipped into the usual math orientation.
"""

from __future__ import annotations

from .env import Circle, Environment, Rect
from .rrt import Path, Tree

_STYLE = {
    "obstacle_fill": "#c8c8c8",
    "obstacle_edge": "#555555",
    "scheduled_edge": "#b03030",
    "tree_edge": "#9ecae1",
    "nominal": "#1f77b4",
    "executed": "#ff7f0e",
    "start": "#2ca02c",
    "goal": "#d62728",
}


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def _shape_svg(shape, stroke, dotted: bool, fill: str, width: float) -> str:
    dash = f' stroke-dasharray="{_fmt(width * 2)} {_fmt(width * 2)}"' if dotted else ""
    if isinstance(shape, Circle):
        return (f'<circle cx="{_fmt(shape.center[0])}" cy="{_fmt(shape.center[1])}" '
                f'r="{_fmt(shape.radius)}" fill="{fill}" stroke="{stroke}" '
                f'stroke-width="{_fmt(width)}"{dash}/>')
    w = shape.hi[0] - shape.lo[0]
    h = shape.hi[1] - shape.lo[1]
    return (f'<rect x="{_fmt(shape.lo[0])}" y="{_fmt(shape.lo[1])}" '
            f'width="{_fmt(w)}" height="{_fmt(h)}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"{dash}/>')


def _polyline(points, stroke, width: float, dashed: bool = False) -> str:
    pts = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in points)
    dash = f' stroke-dasharray="{_fmt(width * 4)} {_fmt(width * 2)}"' if dashed else ""
    return (f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"{dash}/>')


def render_svg(env: Environment, tree: Tree | None = None,
               nominal: Path | None = None, executed=None) -> str:
    """Compose the scene as a standalone SVG document string.

    `executed` is any iterable of (x, y) positions, e.g. logged run states.
    """
    lo, hi = env.bounds.lo, env.bounds.hi
    w = hi[0] - lo[0]
    h = hi[1] - lo[1]
    margin = 0.03 * max(w, h)
    lw = 0.004 * max(w, h)  # hairline relative to scene size

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(lo[0] - margin)} {_fmt(lo[1] - margin)} '
        f'{_fmt(w + 2 * margin)} {_fmt(h + 2 * margin)}" '
        f'width="900" height="{_fmt(900 * (h + 2 * margin) / (w + 2 * margin))}">',
        # flip into y-up orientation around the workspace midline
        f'<g transform="translate(0 {_fmt(hi[1] + lo[1])}) scale(1 -1)">',
        f'<rect x="{_fmt(lo[0])}" y="{_fmt(lo[1])}" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" fill="#ffffff" stroke="#000000" '
        f'stroke-width="{_fmt(lw * 2)}"/>',
    ]

    for ob in env.obstacles:
        parts.append(_shape_svg(ob.shape, _STYLE["obstacle_edge"], False,
                                _STYLE["obstacle_fill"], lw * 2))
        for _, shape in ob.schedule:
            parts.append(_shape_svg(shape, _STYLE["scheduled_edge"], True,
                                    "none", lw * 2))

    if tree is not None:
        for child, parent in enumerate(tree.parents):
            if parent is None:
                continue
            a = tree.vertices[parent]
            b = tree.vertices[child]
            parts.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
                         f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" '
                         f'stroke="{_STYLE["tree_edge"]}" '
                         f'stroke-width="{_fmt(lw)}"/>')

    if nominal is not None and len(nominal) > 1:
        parts.append(_polyline(nominal.waypoints, _STYLE["nominal"], lw * 2.5,
                               dashed=True))
    if executed is not None:
        pts = list(executed)
        if len(pts) > 1:
            parts.append(_polyline(pts, _STYLE["executed"], lw * 3))

    r = 0.012 * max(w, h)
    sx, sy = env.start
    gx, gy = env.goal
    parts.append(f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="{_fmt(r)}" '
                 f'fill="{_STYLE["start"]}"/>')
    parts.append(f'<circle cx="{_fmt(gx)}" cy="{_fmt(gy)}" r="{_fmt(r)}" '
                 f'fill="none" stroke="{_STYLE["goal"]}" '
                 f'stroke-width="{_fmt(lw * 3)}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def save_svg(markup: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(markup)
        if not markup.endswith("\n"):
            fh.write("\n")

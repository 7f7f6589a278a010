"""Flat-file writers: RFC 4180 CSV at 17 significant digits, TGF graphs, SVG figures.

Every CSV writer takes rows of plain Python values and formats floats with
``%.17g`` so that a value read back with ``float`` is bit-identical, and the
same input always gives the same bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from importlib import resources

import numpy as np

from .harmonics import Eigenfunction, to_angles


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def write_text(text, out=None):
    """Write to a path, a file object, or return the text when ``out`` is None."""
    if out is None:
        return text
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", newline="") as f:
            f.write(text)
    return text


def read_csv(source):
    """Header and rows (strings) from a path or text."""
    if isinstance(source, str) and "\n" in source:
        f = io.StringIO(source)
    else:
        f = open(source, newline="")
    with f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def schema(command):
    """The frozen column schema of a CLI command."""
    text = resources.files("nodallab").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)


def schema_header(command):
    return [c["name"] for c in schema(command)["columns"]]


def eigenfunction_csv(f: Eigenfunction):
    return csv_text(["n", "m", "coeff"], f.to_rows())


def eigenfunction_from_csv(text):
    _, rows = read_csv(text)
    return Eigenfunction.from_rows(rows)


def contour_rows(contours):
    """``(loop, theta, phi)`` per contour vertex."""
    out = []
    for k, c in enumerate(contours):
        th, ph = to_angles(c.vertices)
        out.extend((k, float(t), float(p)) for t, p in zip(th, ph))
    return out


def zero_rows(u, v, points):
    """``(theta, phi, |u|, |v|)`` per certified zero."""
    points = np.asarray(points).reshape(-1, 3)
    if not len(points):
        return []
    th, ph = to_angles(points)
    return [(float(a), float(b), float(abs(x)), float(abs(y)))
            for a, b, x, y in zip(th, ph, u(points), v(points))]


def domain_rows(dset):
    """``(vertex, domain, sign)``; domain -1 and sign 0 inside the dead band."""
    return [(i, int(d), int(dset.signs[d]) if d >= 0 else 0) for i, d in enumerate(dset.labels)]


def incidence_tgf(g) -> str:
    """Trivial Graph Format: ``id label`` lines, ``#``, then ``id id`` edge lines."""
    lines = []
    ids = {}
    for k, node in enumerate(g.nodes, start=1):
        fam, i = node
        sign = (g.du if fam == "U" else g.dv).signs[i]
        ids[node] = k
        lines.append(f"{k} {fam}{i}{'+' if sign > 0 else '-'}")
    lines.append("#")
    for i, j in g.edges:
        lines.append(f"{ids[('U', i)]} {ids[('V', j)]}")
    return "\n".join(lines) + "\n"


def inputs_hash(*arrays):
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a))
        h.update(str(a.dtype).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


# SVG

def _svg(width, height, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="-1.1 -1.1 2.2 2.2">\n' + "\n".join(body) + "\n</svg>\n")


def chord_svg(diagram, size=480) -> str:
    """Unit circle, both chord families, crossings inside the disc marked."""
    body = ['<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.006"/>']
    for x, d, colour in ((diagram.chords_a, diagram.direction_a, "#1f77b4"),
                         (diagram.chords_b, diagram.direction_b, "#d62728")):
        perp = np.array([-d[1], d[0]])
        for s in x:
            half = np.sqrt(max(0.0, 1.0 - s * s))
            p, q = s * d + half * perp, s * d - half * perp
            body.append(f'<line x1="{p[0]:.6f}" y1="{-p[1]:.6f}" x2="{q[0]:.6f}" y2="{-q[1]:.6f}" '
                        f'stroke="{colour}" stroke-width="0.005"/>')
    pts = diagram.crossings().reshape(-1, 2)
    inside = diagram.classify().reshape(-1) < 0
    for p in pts[inside]:
        body.append(f'<circle cx="{p[0]:.6f}" cy="{-p[1]:.6f}" r="0.012" fill="black"/>')
    return _svg(size, size, body)


def stereographic(points):
    """Projection from the south pole onto the equatorial plane: the northern hemisphere lands in the unit disc."""
    p = np.asarray(points, float)
    return p[..., :2] / (1.0 + p[..., 2:3])


def contours_svg(contours, zeros=(), size=480, clip=1.05) -> str:
    """Northern-hemisphere stereographic plot of contours, certified zeros marked."""
    body = ['<circle cx="0" cy="0" r="1" fill="none" stroke="#999" stroke-width="0.004"/>']
    for c in contours:
        xy = stereographic(c.vertices)
        keep = np.linalg.norm(xy, axis=1) <= clip
        # split the polyline where it leaves the plotted region
        run = []
        for ok, p in zip(keep, xy):
            if ok:
                run.append(p)
            elif run:
                body.append(_polyline(run))
                run = []
        if run:
            body.append(_polyline(run, closed=c.closed and keep.all()))
    for p in np.asarray(zeros).reshape(-1, 3):
        xy = stereographic(p)
        if np.linalg.norm(xy) <= clip:
            body.append(f'<circle cx="{xy[0]:.6f}" cy="{-xy[1]:.6f}" r="0.015" fill="#d62728"/>')
    return _svg(size, size, body)


def _polyline(points, closed=False):
    pts = " ".join(f"{x:.6f},{-y:.6f}" for x, y in points)
    tag = "polygon" if closed else "polyline"
    return f'<{tag} points="{pts}" fill="none" stroke="#1f77b4" stroke-width="0.005"/>'

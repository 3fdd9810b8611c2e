"""Writes the Voronoi mesh fixtures.

voronoi_square.json: Lloyd-relaxed Voronoi tessellation of the unit square,
straight edges only. voronoi_sine.json: the same mesh with its nodes mapped
onto the sine-bounded domain and the bottom/top edges bound to g1/g2.

Cells are clipped exactly by mirroring the seeds across the four sides.
Run from this directory: python3 make_voronoi.py
"""

import json
import math

import numpy as np
from scipy.spatial import Voronoi

SEEDS = 40
LLOYD_STEPS = 30
RNG_SEED = 20240607


def bounded_cells(points):
    mirrored = [points]
    for axis, side in [(0, 0.0), (0, 1.0), (1, 0.0), (1, 1.0)]:
        m = points.copy()
        m[:, axis] = 2.0 * side - m[:, axis]
        mirrored.append(m)
    vor = Voronoi(np.vstack(mirrored))
    cells = []
    for i in range(len(points)):
        region = vor.regions[vor.point_region[i]]
        poly = vor.vertices[region]
        centre = poly.mean(axis=0)
        order = np.argsort(np.arctan2(poly[:, 1] - centre[1], poly[:, 0] - centre[0]))
        cells.append(np.clip(poly[order], 0.0, 1.0))
    return cells


def centroid(poly):
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = cross.sum() / 2.0
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * area)


def relaxed_cells():
    rng = np.random.default_rng(RNG_SEED)
    points = rng.uniform(0.05, 0.95, size=(SEEDS, 2))
    for _ in range(LLOYD_STEPS):
        points = np.array([centroid(c) for c in bounded_cells(points)])
    return bounded_cells(points)


def build_mesh(cells):
    vertices, index = [], {}

    def vid(p):
        key = (round(p[0], 10), round(p[1], 10))
        if key not in index:
            index[key] = len(vertices)
            vertices.append([float(key[0]) + 0.0, float(key[1]) + 0.0])
        return index[key]

    edges, edge_index, elements = [], {}, []
    for poly in cells:
        ids = []
        for p in poly:
            v = vid(p)
            if not ids or ids[-1] != v:
                ids.append(v)
        if ids[0] == ids[-1]:
            ids.pop()
        refs = []
        for a, b in zip(ids, ids[1:] + ids[:1]):
            if (b, a) in edge_index:
                refs.append(-(edge_index[(b, a)] + 1))
            else:
                edge_index[(a, b)] = len(edges)
                edges.append({"v": [a, b], "curve": None, "t": None})
                refs.append(len(edges))
        elements.append({"edges": refs, "kappa": 1.0})
    return {"vertices": vertices, "curves": [], "edges": edges, "elements": elements}


def g1(x):
    return math.sin(math.pi * x) / 20.0


def g2(x):
    return 1.0 + math.sin(3.0 * math.pi * x) / 20.0


def to_sine(mesh):
    square = mesh["vertices"]
    out = json.loads(json.dumps(mesh))
    for v in out["vertices"]:
        x, y = v
        v[1] = y + g1(x) * (1.0 - 2.0 * y) if y <= 0.5 else 1.0 - y + g2(x) * (2.0 * y - 1.0)
    out["curves"] = [
        {"id": 0, "kind": "sine-graph", "amplitude": 0.05, "frequency": math.pi, "offset": 0.0,
         "orientation": 1, "t_lo": 0.0, "t_hi": 1.0},
        {"id": 1, "kind": "sine-graph", "amplitude": 0.05, "frequency": 3.0 * math.pi, "offset": 1.0,
         "orientation": 1, "t_lo": 0.0, "t_hi": 1.0},
    ]
    for e in out["edges"]:
        a, b = (square[i] for i in e["v"])
        for curve, side in [(0, 0.0), (1, 1.0)]:
            if a[1] == side and b[1] == side:
                e["curve"], e["t"] = curve, [a[0], b[0]]
    return out


def dump(mesh, path):
    with open(path, "w") as f:
        json.dump(mesh, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    mesh = build_mesh(relaxed_cells())
    dump(mesh, "voronoi_square.json")
    dump(to_sine(mesh), "voronoi_sine.json")
    print(len(mesh["elements"]), "cells,", len(mesh["edges"]), "edges")

#!/usr/bin/env python3
"""Generate and validate the corpus complexes, then freeze them as .cplx files.

Run from the repository root:  python3 scripts/gen_complexes.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from diffform.ring import GF2, ZZ
from diffform.space import build_space, classical_cohomology, serialize_complex

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "diffform", "data")


def closed_surface_checks(x):
    """Every edge in exactly two triangles; every vertex link a single cycle."""
    tris = [c for c in x.cells if len(c) == 3]
    edges = [c for c in x.cells if len(c) == 2]
    for e in edges:
        cnt = sum(1 for t in tris if set(e) <= set(t))
        assert cnt == 2, f"edge {e} lies in {cnt} triangles"
    for v in x.vertices:
        link_edges = [tuple(sorted(set(t) - {v})) for t in tris if v in t]
        deg = {}
        for a, b in link_edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        assert all(d == 2 for d in deg.values()), f"vertex {v} link is not a cycle"
        # connectivity of the link
        adj = {}
        for a, b in link_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = set()
        stack = [link_edges[0][0]]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
        assert seen == set(adj), f"vertex {v} link disconnected"


def check_cohomology(x, name, expect_z, expect_f2):
    got_z = classical_cohomology(x, ZZ)
    ranks = got_z.free_ranks()
    tors = got_z.torsion()
    assert (ranks, tors) == expect_z, f"{name} over Z: {(ranks, tors)} != {expect_z}"
    got_f2 = classical_cohomology(x, GF2)
    assert got_f2.dims() == expect_f2, f"{name} over F2: {got_f2.dims()} != {expect_f2}"


def torus7():
    faces = []
    for i in range(7):
        faces.append(sorted([i, (i + 1) % 7, (i + 3) % 7]))
        faces.append(sorted([i, (i + 2) % 7, (i + 3) % 7]))
    return build_space(faces)


def rp2_6():
    faces = [
        [1, 2, 3], [1, 2, 4], [1, 3, 5], [1, 4, 6], [1, 5, 6],
        [2, 3, 6], [2, 4, 5], [2, 5, 6], [3, 4, 5], [3, 4, 6],
    ]
    return build_space(faces)


def klein9():
    # 3x3 grid on the square, x wraps, top row glues to the bottom with a flip
    def vertex(i, j):
        if j == 3:
            return ((-i) % 3) * 10 + 0
        return (i % 3) * 10 + j

    faces = []
    for i in range(3):
        for j in range(3):
            a = vertex(i, j)
            b = vertex(i + 1, j)
            c = vertex(i, j + 1)
            d = vertex(i + 1, j + 1)
            faces.append([a, b, d])
            faces.append([a, d, c])
    return build_space(faces)


def main():
    os.makedirs(OUT, exist_ok=True)
    corpus = {}

    corpus["delta3"] = build_space([[0, 1, 2, 3]])
    check_cohomology(corpus["delta3"], "delta3", ({0: 1, 1: 0, 2: 0, 3: 0}, {}), [1])

    corpus["sphere2"] = build_space([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    closed_surface_checks(corpus["sphere2"])
    check_cohomology(corpus["sphere2"], "sphere2", ({0: 1, 1: 0, 2: 1}, {}), [1, 0, 1])

    corpus["circle"] = build_space([[0, 1], [1, 2], [0, 2]])
    check_cohomology(corpus["circle"], "circle", ({0: 1, 1: 1}, {}), [1, 1])

    corpus["rp2"] = rp2_6()
    closed_surface_checks(corpus["rp2"])
    check_cohomology(corpus["rp2"], "rp2", ({0: 1, 1: 0, 2: 0}, {2: [2]}), [1, 1, 1])

    corpus["torus"] = torus7()
    closed_surface_checks(corpus["torus"])
    check_cohomology(corpus["torus"], "torus", ({0: 1, 1: 2, 2: 1}, {}), [1, 2, 1])

    corpus["klein"] = klein9()
    closed_surface_checks(corpus["klein"])
    check_cohomology(corpus["klein"], "klein", ({0: 1, 1: 1, 2: 0}, {2: [2]}), [1, 2, 1])

    corpus["disc2_mod_boundary"] = build_space(
        [[0, 1, 2]], collapse=[[0, 1], [0, 2], [1, 2]]
    )
    check_cohomology(
        corpus["disc2_mod_boundary"], "disc2_mod_boundary", ({0: 1, 1: 0, 2: 1}, {}), [1, 0, 1]
    )

    corpus["disc3_mod_boundary"] = build_space(
        [[0, 1, 2, 3]], collapse=[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    )
    check_cohomology(
        corpus["disc3_mod_boundary"],
        "disc3_mod_boundary",
        ({0: 1, 1: 0, 2: 0, 3: 1}, {}),
        [1, 0, 0, 1],
    )

    for name, x in corpus.items():
        path = os.path.join(OUT, f"{name}.cplx")
        with open(path, "w") as fh:
            fh.write(serialize_complex(x))
        print(f"wrote {path}: {len(x.cells)} cells, dim {x.dimension}")
    print("all corpus checks passed")


if __name__ == "__main__":
    main()

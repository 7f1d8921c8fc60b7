#!/usr/bin/env python3
"""Writes cube4.msh: gmsh ASCII v2 unit cube, 4^3 cells, 6 tets per cell.

Tetrahedra follow the cube's main diagonal, one per axis permutation, in
whatever orientation the permutation yields. Boundary triangles carry the
physical names xmin..zmax.
"""
from itertools import permutations
from pathlib import Path

N = 4


def node_id(i, j, k):
    return 1 + i + (N + 1) * (j + (N + 1) * k)


def main():
    nodes = []
    for k in range(N + 1):
        for j in range(N + 1):
            for i in range(N + 1):
                nodes.append((node_id(i, j, k), i / N, j / N, k / N))

    tets = []
    for k in range(N):
        for j in range(N):
            for i in range(N):
                for perm in permutations(range(3)):
                    c = [i, j, k]
                    path = [tuple(c)]
                    for axis in perm:
                        c[axis] += 1
                        path.append(tuple(c))
                    tets.append([node_id(*p) for p in path])

    names = ["xmin", "xmax", "ymin", "ymax", "zmin", "zmax"]
    coords = {n[0]: n[1:] for n in nodes}
    tris = []
    for t in tets:
        for skip in range(4):
            face = [t[m] for m in range(4) if m != skip]
            for axis in range(3):
                for side, value in ((0, 0.0), (1, 1.0)):
                    if all(coords[n][axis] == value for n in face):
                        tris.append((2 * axis + side + 1, face))

    lines = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$PhysicalNames", str(len(names))]
    lines += [f'2 {i + 1} "{name}"' for i, name in enumerate(names)]
    lines += ["$EndPhysicalNames", "$Nodes", str(len(nodes))]
    lines += [f"{n[0]} {n[1]!r} {n[2]!r} {n[3]!r}" for n in nodes]
    lines += ["$EndNodes", "$Elements", str(len(tris) + len(tets))]
    eid = 0
    for phys, face in tris:
        eid += 1
        lines.append(f"{eid} 2 2 {phys} {phys} " + " ".join(map(str, face)))
    for t in tets:
        eid += 1
        lines.append(f"{eid} 4 2 7 7 " + " ".join(map(str, t)))
    lines.append("$EndElements")
    target = Path(__file__).resolve().parent / "cube4.msh"
    target.write_text("\n".join(lines) + "\n")
    print(f"wrote {target}: {len(nodes)} nodes, {len(tets)} tets, {len(tris)} boundary triangles")


if __name__ == "__main__":
    main()

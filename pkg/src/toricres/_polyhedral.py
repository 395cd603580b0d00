"""Small polyhedral helpers: facets, face lattices, pulling triangulations."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .exact_linalg import primitive, rank, right_kernel

Ray = tuple[int, ...]


def _independent_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    cols: list[int] = []
    for j in range(len(rows[0])):
        trial = cols + [j]
        if rank([[r[c] for c in trial] for r in rows]) == len(trial):
            cols = trial
    return cols


def facet_normals(gens: Sequence[Sequence[int]]) -> list[Ray]:
    """Primitive inward normals of the facets of cone(gens), a full-dimensional cone.

    Returns an empty list when the cone is the whole space.
    """
    gens = [tuple(g) for g in gens if any(g)]
    dim = len(gens[0])
    if dim == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        return [(signs.pop(),)] if len(signs) == 1 else []
    found: set[Ray] = set()
    for subset in combinations(range(len(gens)), dim - 1):
        block = [gens[i] for i in subset]
        if rank(block) != dim - 1:
            continue
        f = primitive(right_kernel(block)[0])
        vals = [sum(a * b for a, b in zip(f, g)) for g in gens]
        if all(v >= 0 for v in vals):
            found.add(tuple(f))
        elif all(v <= 0 for v in vals):
            found.add(tuple(-x for x in f))
    return sorted(found)


def cone_facets(rays: Sequence[Ray]) -> list[tuple[Ray, ...]]:
    """Facets of the pointed cone spanned by ``rays`` (all extreme), as ray tuples."""
    k = rank(rays)
    if k <= 1:
        return []
    cols = _independent_columns(rays)
    proj = [tuple(r[c] for c in cols) for r in rays]
    seen: set[frozenset[int]] = set()
    out = []
    for subset in combinations(range(len(rays)), k - 1):
        block = [proj[i] for i in subset]
        if rank(block) != k - 1:
            continue
        f = right_kernel(block)[0]
        vals = [sum(a * b for a, b in zip(f, p)) for p in proj]
        if not (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
            continue
        face = frozenset(i for i, v in enumerate(vals) if v == 0)
        if face not in seen:
            seen.add(face)
            out.append(tuple(rays[i] for i in sorted(face)))
    return out


def pulling_triangulation(rays: Sequence[Ray]) -> list[tuple[Ray, ...]]:
    """Triangulate cone(rays) by pulling the lexicographically smallest ray first.

    Because the pulling order is global, triangulations of neighbouring cones
    agree on shared faces.
    """
    rays = list(dict.fromkeys(tuple(r) for r in rays))
    k = rank(rays)
    if len(rays) == k:
        return [tuple(rays)]
    apex = min(rays)
    out = []
    for facet in cone_facets(rays):
        if apex in facet:
            continue
        for simplex in pulling_triangulation(facet):
            out.append((apex,) + simplex)
    return out


def face_closure(ray_count: int, vanishing: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """All intersections of the given ray-index sets with the full set (a face lattice)."""
    faces = {frozenset(range(ray_count))}
    for s in vanishing:
        faces.add(frozenset(s))
    frontier = set(faces)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in list(faces):
                c = a & b
                if c not in faces:
                    fresh.add(c)
        faces |= fresh
        frontier = fresh
    return sorted(faces, key=lambda f: (len(f), sorted(f)))



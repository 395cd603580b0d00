"""Simplicial cones, quadrant fans, refinement, regularization and weight cones."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._polyhedral import face_closure, facet_normals, pulling_triangulation
from .errors import ComputationError, InputError
from .exact_linalg import (adjugate, as_int_matrix, det, dot, hermite_normal_form,
                           identity, minors_gcd, primitive, rank, rational_inverse)
from .ordered_groups import GroupElement, as_element

DEFAULT_MAX_DIM = 16
MAX_SUBDIVISIONS = 100_000

Ray = tuple[int, ...]


@dataclass(frozen=True)
class Hyperplane:
    normal: Ray

    def __post_init__(self):
        v = tuple(int(x) for x in self.normal)
        if not any(v):
            raise InputError("zero-normal", "hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", tuple(primitive(v)))


def _normal(h) -> Ray:
    return h.normal if isinstance(h, Hyperplane) else Hyperplane(tuple(h)).normal


class Cone:
    """Simplicial cone spanned by primitive, linearly independent rays.

    The given ray order is kept (it fixes chart rows); equality ignores it.
    """

    __slots__ = ("rays", "ambient", "_key", "_adj", "_regular")

    def __init__(self, rays: Sequence[Sequence[int]]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise InputError("empty-cone", "a cone needs at least one ray")
        ambient = len(rays[0])
        if any(len(r) != ambient for r in rays):
            raise InputError("ragged-rays", "rays have different lengths")
        for r in rays:
            if not any(r) or tuple(primitive(r)) != r:
                raise InputError("non-primitive-ray", f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise InputError("duplicate-ray", "rays must be distinct")
        if rank(rays) != len(rays):
            raise InputError("not-simplicial", "rays are linearly dependent")
        self.rays = rays
        self.ambient = ambient
        self._key = tuple(sorted(rays))
        self._adj = None
        self._regular = None

    @property
    def dim(self) -> int:
        return len(self.rays)

    @property
    def key(self) -> tuple[Ray, ...]:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "Cone<" + ", ".join(str(r) for r in self.rays) + ">"

    def has_face(self, face: "Cone") -> bool:
        return set(face.rays) <= set(self.rays)

    def adjugate(self) -> tuple[int, list[list[int]]]:
        if self._adj is None:
            if self.dim != self.ambient:
                raise InputError("not-full-dimensional", f"{self!r} is not maximal-dimensional")
            self._adj = adjugate(self.rays)
        return self._adj

    def scaled_coordinates(self, point: Sequence[int]) -> tuple[int, list[int]]:
        """(D, μ) with point = Σ (μ_j / D) rays_j and D > 0."""
        d, adj = self.adjugate()
        n = self.ambient
        mu = [sum(point[i] * adj[i][j] for i in range(n)) for j in range(n)]
        if d < 0:
            return -d, [-x for x in mu]
        return d, mu

    def coordinates(self, point: Sequence) -> list[Fraction]:
        """λ with point = Σ λ_j rays_j (full-dimensional cones only)."""
        d, adj = self.adjugate()
        n = self.ambient
        return [sum(Fraction(point[i]) * adj[i][j] for i in range(n)) / d for j in range(n)]

    def contains(self, point: Sequence[int]) -> bool:
        return all(x >= 0 for x in self.scaled_coordinates(point)[1])

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def is_regular(c: Cone) -> bool:
    if c._regular is None:
        if c.dim == c.ambient:
            c._regular = abs(c.adjugate()[0]) == 1
        else:
            c._regular = minors_gcd(c.rays, c.dim) == 1
    return c._regular


class Fan:
    """Maximal simplicial cones sorted lexicographically on their sorted ray lists."""

    __slots__ = ("ambient", "cones")

    def __init__(self, ambient: int, cones: Sequence[Cone]):
        self.ambient = int(ambient)
        uniq = {c.key: c for c in cones}
        self.cones = tuple(uniq[k] for k in sorted(uniq))
        for c in self.cones:
            if c.ambient != self.ambient:
                raise InputError("ambient-mismatch", f"{c!r} not in dimension {self.ambient}")

    @classmethod
    def quadrant(cls, n: int) -> "Fan":
        return cls(n, [Cone(identity(n))])

    def rays(self) -> list[Ray]:
        return sorted({r for c in self.cones for r in c.rays})

    def has_face(self, face: Cone) -> bool:
        return any(c.has_face(face) for c in self.cones)

    def __len__(self) -> int:
        return len(self.cones)

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.ambient == other.ambient and self.cones == other.cones

    def __repr__(self) -> str:
        return f"Fan(ambient={self.ambient}, cones={list(self.cones)})"

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "cones": [c.to_json() for c in self.cones]}

    @classmethod
    def from_json(cls, obj: dict) -> "Fan":
        return cls(obj["ambient"], [Cone(c["rays"]) for c in obj["cones"]])


# ---------------------------------------------------------------- refinement

def _split(cone: Cone, v: Ray) -> list[Cone]:
    vals = [dot(r, v) for r in cone.rays]
    if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
        return [cone]
    pos = [r for r, x in zip(cone.rays, vals) if x > 0]
    neg = [r for r, x in zip(cone.rays, vals) if x < 0]
    zero = [r for r, x in zip(cone.rays, vals) if x == 0]
    fresh = []
    for p, vp in zip(cone.rays, vals):
        if vp <= 0:
            continue
        for q, vq in zip(cone.rays, vals):
            if vq >= 0:
                continue
            fresh.append(tuple(primitive([vp * b - vq * a for a, b in zip(p, q)])))
    out = []
    for side in (pos, neg):
        piece = side + zero + fresh
        if len(piece) == cone.dim:
            out.append(Cone(piece))
        else:
            out.extend(Cone(s) for s in pulling_triangulation(piece))
    return out


def refine_with_hyperplanes(fan: Fan, hyperplanes: Sequence) -> Fan:
    """Subdivide so that every cone lies in a closed half-space of each hyperplane."""
    cones = list(fan.cones)
    for h in hyperplanes:
        v = _normal(h)
        if len(v) != fan.ambient:
            raise InputError("ambient-mismatch", f"normal {v} in dimension {fan.ambient}")
        nxt = []
        for c in cones:
            nxt.extend(_split(c, v))
        cones = nxt
    return Fan(fan.ambient, cones)


def is_compatible(fan: Fan, hyperplanes: Sequence) -> bool:
    for h in hyperplanes:
        v = _normal(h)
        for c in fan.cones:
            vals = [dot(r, v) for r in c.rays]
            if not (all(x >= 0 for x in vals) or all(x <= 0 for x in vals)):
                return False
    return True


def fundamental_points(cone: Cone) -> list[Ray]:
    """Nonzero lattice points Σ λ_i r_i with 0 <= λ_i < 1 of a full-dimensional cone.

    Coset representatives of Z^N modulo the ray lattice come from the Hermite
    form; each is folded back into the parallelepiped.
    """
    n = cone.ambient
    diag = [row[i] for i, row in enumerate(hermite_normal_form(cone.rays))]
    reps = [[]]
    for h in diag:
        reps = [r + [x] for r in reps for x in range(h)]
    out = []
    for y in reps:
        d, mu = cone.scaled_coordinates(y)
        mu = [x % d for x in mu]
        if not any(mu):
            continue
        out.append(tuple(sum(mu[i] * cone.rays[i][j] for i in range(n)) // d for j in range(n)))
    return out


def _best_interior_point(cone: Cone) -> Ray:
    return min(fundamental_points(cone), key=lambda p: (sum(p), p))


def _subdivide_cone(c: Cone, x: Ray) -> list[Cone] | None:
    _, mu = c.scaled_coordinates(x)
    if any(t < 0 for t in mu):
        return None
    out = []
    for i, t in enumerate(mu):
        if t > 0:
            rays = list(c.rays)
            rays[i] = x
            out.append(Cone(rays))
    return out


def stellar_subdivide(fan: Fan, point: Sequence[int]) -> Fan:
    """Insert the ray through ``point`` into every cone containing it."""
    x = tuple(primitive(point))
    out = []
    for c in fan.cones:
        parts = _subdivide_cone(c, x)
        out.extend([c] if parts is None else parts)
    return Fan(fan.ambient, out)


def regularize(fan: Fan, protected: Sequence[Cone] = ()) -> Fan:
    """Refine to a regular fan by stellar subdivisions, never touching protected faces.

    At each step the first non-regular cone (in fan order) is subdivided at
    the nonzero point of its fundamental parallelepiped with the smallest
    coordinate sum, ties broken lexicographically.  Such a point lies in the
    relative interior of a non-regular face, so regular cones (and protected
    faces) are never split.
    """
    for p in protected:
        if not is_regular(p):
            raise InputError("protected-face-not-regular", repr(p))
        if not fan.has_face(p):
            raise ComputationError("protected-face-missing", repr(p))
    for c in fan.cones:
        if c.dim != fan.ambient:
            raise InputError("not-full-dimensional", f"{c!r} is not maximal-dimensional")

    done = [c for c in fan.cones if is_regular(c)]
    pending: dict[tuple, Cone] = {}
    by_ray: dict[Ray, set] = {}
    heap: list[tuple] = []

    def push(c: Cone):
        pending[c.key] = c
        heapq.heappush(heap, c.key)
        for r in c.rays:
            by_ray.setdefault(r, set()).add(c.key)

    def drop(c: Cone):
        del pending[c.key]
        for r in c.rays:
            by_ray[r].discard(c.key)

    for c in fan.cones:
        if not is_regular(c):
            push(c)
    steps = 0
    while heap:
        key = heapq.heappop(heap)
        if key not in pending:
            continue
        bad = pending[key]
        x = _best_interior_point(bad)
        _, mu = bad.scaled_coordinates(x)
        face = [r for r, t in zip(bad.rays, mu) if t > 0]
        keys = set.intersection(*(by_ray[r] for r in face)) | {key}
        for k in keys:
            c = pending[k]
            parts = _subdivide_cone(c, x)
            if parts is None:
                continue
            drop(c)
            for part in parts:
                if is_regular(part):
                    done.append(part)
                else:
                    push(part)
        steps += 1
        if steps > MAX_SUBDIVISIONS:
            raise ComputationError("subdivision-limit", f"more than {MAX_SUBDIVISIONS} subdivisions")
    out = Fan(fan.ambient, done)
    for p in protected:
        if not out.has_face(p):
            raise ComputationError("protected-face-missing", f"{p!r} was subdivided")
    return out


# ---------------------------------------------------------------- weight cones

@dataclass(frozen=True)
class WeightCone:
    """σ(b): the image of the dual of cone(γ_1..γ_N) under f ↦ (f·γ_i)_i."""

    rays: tuple[Ray, ...]
    degree_matrix: tuple[tuple[int, ...], ...]

    def faces(self) -> list[tuple[Ray, ...]]:
        """Nonzero faces as ray tuples."""
        if not self.rays:
            return []
        n = len(self.degree_matrix[0])
        vanishing = [frozenset(k for k, r in enumerate(self.rays) if r[i] == 0) for i in range(n)]
        out = []
        for face in face_closure(len(self.rays), vanishing):
            if face:
                out.append(tuple(self.rays[k] for k in sorted(face)))
        return out

    def regular_faces(self) -> list[Cone]:
        out = []
        for face in self.faces():
            if rank(face) == len(face) and minors_gcd(face, len(face)) == 1:
                out.append(Cone(face))
        return out

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays],
                "degrees": [list(r) for r in self.degree_matrix]}


def weight_cone(b: Sequence[Sequence[int]]) -> WeightCone:
    """Weight cone of the degree map b (r×N, column i is the degree γ_i ∈ Z^r)."""
    B = as_int_matrix(b)
    r, n = len(B), len(B[0])
    if r > n or rank(B) < r or minors_gcd(B, r) != 1:
        raise InputError("group-not-generated", "degree columns do not generate Z^r")
    gammas = [tuple(B[k][i] for k in range(r)) for i in range(n)]
    rays = set()
    for f in facet_normals(gammas):
        rays.add(tuple(primitive([dot(f, g) for g in gammas])))
    return WeightCone(tuple(sorted(rays)), tuple(tuple(row) for row in B))


def check_normals(b: Sequence[Sequence[int]], hyperplanes: Sequence) -> None:
    B = as_int_matrix(b)
    n = len(B[0])
    normals = [_normal(h) for h in hyperplanes]
    for v in normals:
        if len(v) != n or any(dot(row, v) for row in B):
            raise InputError("normal-not-in-kernel", f"normal {v} is not in the kernel of b")
    if n - rank(B) != (rank(normals) if normals else 0):
        raise InputError("normals-not-spanning", "normals do not span the kernel of b")


def build_RES_fan(b: Sequence[Sequence[int]], hyperplanes: Sequence,
                  max_dim: int = DEFAULT_MAX_DIM) -> Fan:
    """Regular fan on the quadrant compatible with the hyperplanes and keeping σ(b)'s regular faces."""
    B = as_int_matrix(b)
    n = len(B[0])
    if n > max_dim:
        raise InputError("dimension-exceeded", f"ambient dimension {n} > max-dim {max_dim}")
    check_normals(B, hyperplanes)
    refined = refine_with_hyperplanes(Fan.quadrant(n), hyperplanes)
    protected = weight_cone(B).regular_faces()
    for p in protected:
        if not refined.has_face(p):
            raise ComputationError("protected-face-missing", repr(p))
    return regularize(refined, protected)


def satisfies_res(fan: Fan, b: Sequence[Sequence[int]], hyperplanes: Sequence) -> bool:
    return (all(is_regular(c) for c in fan.cones)
            and is_compatible(fan, hyperplanes)
            and all(fan.has_face(p) for p in weight_cone(b).regular_faces()))


# ---------------------------------------------------------------- charts

def locate_weight(fan: Fan, w: Sequence) -> Cone:
    """First maximal cone (fan order) containing the weight point w."""
    pts = [as_element(x) for x in w]
    if len(pts) != fan.ambient:
        raise InputError("ambient-mismatch", f"weight has {len(pts)} coordinates")
    spec = pts[0].spec
    for c in fan.cones:
        inv = rational_inverse(c.rays)
        ok = True
        for j in range(fan.ambient):
            lam = GroupElement.zero(spec)
            for i, x in enumerate(pts):
                if inv[i][j]:
                    lam = lam + x * inv[i][j]
            if lam.sign() < 0:
                ok = False
                break
        if ok:
            return c
    raise ComputationError("weight-not-located", "no cone contains the weight point")


def regular_cone_at(cone: Cone, hyperplanes: Sequence, w: Sequence) -> Cone:
    """Regular cone containing w in a regular refinement of ``cone`` compatible with the hyperplanes.

    Only the piece containing w is refined and subdivided, so the cost does
    not grow with the number of cones a full refinement would have.
    """
    n = len(cone.rays)
    current = cone
    for h in hyperplanes:
        current = locate_weight(refine_with_hyperplanes(Fan(n, [current]), [h]), w)
    steps = 0
    while not is_regular(current):
        parts = _subdivide_cone(current, _best_interior_point(current))
        current = locate_weight(Fan(n, parts), w)
        steps += 1
        if steps > MAX_SUBDIVISIONS:
            raise ComputationError("subdivision-limit", f"more than {MAX_SUBDIVISIONS} subdivisions")
    return current


def barycentric(cone: Cone, w: Sequence) -> list[GroupElement]:
    """Coordinates of w in the ray basis of a full-dimensional cone."""
    pts = [as_element(x) for x in w]
    inv = rational_inverse(cone.rays)
    out = []
    for j in range(cone.ambient):
        lam = GroupElement.zero(pts[0].spec)
        for i, x in enumerate(pts):
            if inv[i][j]:
                lam = lam + x * inv[i][j]
        out.append(lam)
    return out


@dataclass(frozen=True)
class UnimodularChart:
    """U_i ↦ Π_j Y_j^{matrix[j][i]}; rows are the cone's rays."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", M)
        if any(len(r) != len(M) for r in M):
            raise InputError("not-square", "chart matrix must be square")
        if abs(det(M)) != 1:
            raise InputError("not-unimodular", "chart matrix must have determinant ±1")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def transform_exponent(self, e: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(row, e) for row in self.matrix)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


def chart_of(c: Cone) -> UnimodularChart:
    if c.dim != c.ambient:
        raise InputError("not-maximal", f"{c!r} is not full-dimensional")
    if not is_regular(c):
        raise InputError("not-regular", f"{c!r} is not regular")
    return UnimodularChart(c.rays)

"""Binomial ideals: presentation checks, orbit singular loci, jacobian certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ._polyhedral import face_closure, facet_normals
from .errors import InputError
from .exact_linalg import (as_int_matrix, det, dot, identity, lattice_basis, left_kernel,
                           matmul, minors_gcd, rank, saturate_lattice, smith_normal_form,
                           transpose)
from .polynomial import SparsePoly


@dataclass(frozen=True)
class Binomial:
    """U^m − λ·U^n."""

    m: tuple[int, ...]
    n: tuple[int, ...]
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        n = tuple(int(x) for x in self.n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lam", Fraction(self.lam))
        if len(m) != len(n):
            raise InputError("arity-mismatch", "m and n have different lengths")
        if any(x < 0 for x in m + n):
            raise InputError("negative-exponent", "exponents must be nonnegative")
        if m == n:
            raise InputError("trivial-binomial", "m and n coincide")
        if self.lam == 0:
            raise InputError("zero-lambda", "λ must be nonzero")

    @property
    def num_vars(self) -> int:
        return len(self.m)

    def difference(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.m, self.n))

    def normalized(self) -> "Binomial":
        """Cancel the common monomial factor so supports are disjoint."""
        g = [min(a, b) for a, b in zip(self.m, self.n)]
        return Binomial(tuple(a - c for a, c in zip(self.m, g)),
                        tuple(b - c for b, c in zip(self.n, g)), self.lam)

    def total_degree(self) -> int:
        return max(sum(self.m), sum(self.n))

    def poly(self) -> SparsePoly:
        return SparsePoly(self.num_vars, [(self.m, 1), (self.n, -self.lam)])

    def to_json(self) -> dict:
        return {"m": list(self.m), "n": list(self.n), "lambda": str(self.lam)}

    @classmethod
    def from_json(cls, obj: dict) -> "Binomial":
        return cls(tuple(obj["m"]), tuple(obj["n"]), Fraction(str(obj.get("lambda", "1"))))

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"U{i}" for i in range(self.num_vars)]

        def mono(e):
            s = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k)
            return s or "1"

        lam = "" if self.lam == 1 else f"{self.lam}*"
        return f"{mono(self.m)} - {lam}{mono(self.n)}"


@dataclass(frozen=True)
class BinomialIdeal:
    num_vars: int
    binomials: tuple[Binomial, ...]
    degrees: tuple[tuple[int, ...], ...] | None = None   # one degree vector per variable

    def __post_init__(self):
        object.__setattr__(self, "binomials", tuple(self.binomials))
        if self.num_vars < 1:
            raise InputError("no-variables", "need at least one variable")
        for b in self.binomials:
            if b.num_vars != self.num_vars:
                raise InputError("arity-mismatch", f"binomial {b} has {b.num_vars} variables")
        if self.degrees is not None:
            degs = tuple(tuple(int(x) for x in d) for d in self.degrees)
            if len(degs) != self.num_vars or len({len(d) for d in degs}) != 1:
                raise InputError("bad-degrees", "one degree vector of common length per variable")
            object.__setattr__(self, "degrees", degs)

    def differences(self) -> list[list[int]]:
        return [list(b.difference()) for b in self.binomials]

    def lattice_rank(self) -> int:
        return rank(self.differences()) if self.binomials else 0

    @property
    def dimension(self) -> int:
        return self.num_vars - self.lattice_rank()

    def degree_matrix(self) -> list[list[int]] | None:
        """b as an r×N matrix whose columns are the variable degrees."""
        return None if self.degrees is None else transpose(self.degrees)

    def to_json(self) -> dict:
        out = {"vars": self.num_vars, "binomials": [b.to_json() for b in self.binomials]}
        if self.degrees is not None:
            out["degrees"] = [list(d) for d in self.degrees]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "BinomialIdeal":
        try:
            degrees = obj.get("degrees")
            return cls(int(obj["vars"]), tuple(Binomial.from_json(b) for b in obj["binomials"]),
                       None if degrees is None else tuple(tuple(d) for d in degrees))
        except KeyError as exc:
            raise InputError("missing-field", f"ideal JSON lacks {exc}") from None


def lattice_degrees(ideal: BinomialIdeal) -> list[tuple[int, ...]]:
    """Degrees γ_j in Z^d from the quotient of Z^N by the saturated lattice.

    With Smith form L·A·R = D of the difference matrix, the saturation is
    spanned by the first r rows of R^{-1}, so x ↦ (x·R)[r:] is the quotient.
    """
    N = ideal.num_vars
    if not ideal.binomials:
        return [tuple(row) for row in identity(N)]
    snf = smith_normal_form(ideal.differences())
    r = len(snf.invariants)
    gammas = [list(snf.right[j][r:]) for j in range(N)]
    # flip coordinate signs so each coordinate's first nonzero entry is positive
    for t in range(N - r):
        lead = next((g[t] for g in gammas if g[t]), 0)
        if lead < 0:
            for g in gammas:
                g[t] = -g[t]
    return [tuple(g) for g in gammas]


def with_lattice_degrees(ideal: BinomialIdeal) -> BinomialIdeal:
    if ideal.degrees is not None:
        return ideal
    return BinomialIdeal(ideal.num_vars, ideal.binomials, tuple(lattice_degrees(ideal)))


@dataclass(frozen=True)
class PresentationCertificate:
    homogeneous: bool | None
    lattice_saturated: bool
    lambda_compatible: bool
    lattice_rank: int
    dimension: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return bool(self.lattice_saturated and self.lambda_compatible
                    and self.homogeneous is not False)

    def to_json(self) -> dict:
        return {"homogeneous": self.homogeneous, "lattice_saturated": self.lattice_saturated,
                "lambda_compatible": self.lambda_compatible, "lattice_rank": self.lattice_rank,
                "dimension": self.dimension, "failures": list(self.failures), "ok": self.ok}


def verify_presentation(ideal: BinomialIdeal) -> PresentationCertificate:
    failures = []
    diffs = ideal.differences()
    homogeneous = None
    if ideal.degrees is not None:
        homogeneous = True
        for k, b in enumerate(ideal.binomials):
            if any(dot(b.m, col) != dot(b.n, col) for col in transpose(ideal.degrees)):
                homogeneous = False
                failures.append(f"binomial {k} is not homogeneous")
    if not diffs:
        return PresentationCertificate(homogeneous, True, True, 0, ideal.num_vars, tuple(failures))
    saturated = lattice_basis(diffs) == saturate_lattice(diffs)
    if not saturated:
        failures.append("exponent lattice is not saturated")
    compatible = True
    for rel in left_kernel(diffs):
        prod = Fraction(1)
        for c, b in zip(rel, ideal.binomials):
            prod *= b.lam ** c
        if prod != 1:
            compatible = False
            failures.append(f"relation {rel} gives λ-product {prod}")
    rk = rank(diffs)
    return PresentationCertificate(homogeneous, saturated, compatible, rk,
                                   ideal.num_vars - rk, tuple(failures))


def generating_subset(ideal: BinomialIdeal) -> list[int]:
    """Indices of binomials chosen by increasing degree while the rank grows."""
    order = sorted(range(len(ideal.binomials)),
                   key=lambda k: (ideal.binomials[k].total_degree(), k))
    chosen: list[int] = []
    rows: list[list[int]] = []
    for k in order:
        trial = rows + [list(ideal.binomials[k].difference())]
        if rank(trial) == len(trial):
            chosen.append(k)
            rows = trial
    return sorted(chosen)


# ---------------------------------------------------------------- jacobian

@dataclass(frozen=True)
class JacobianCertificate:
    matrix: tuple[tuple[int, ...], ...]
    rank_over_Q: int
    minors_gcd: int
    expected_rank: int

    @property
    def smooth_all_characteristics(self) -> bool:
        return self.rank_over_Q == self.expected_rank and self.minors_gcd == 1

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "rank_over_Q": self.rank_over_Q,
                "minors_gcd": self.minors_gcd, "expected_rank": self.expected_rank,
                "smooth_all_characteristics": self.smooth_all_characteristics}


def jacobian_certificate(ideal: BinomialIdeal, chart=None) -> JacobianCertificate:
    """Matrix (⟨a^j, m^s − n^s⟩)_{j,s}, its rank, and the gcd of its (N−d)-minors."""
    N = ideal.num_vars
    rows = identity(N) if chart is None else [list(r) for r in getattr(chart, "matrix", chart)]
    if len(rows) != N or abs(det(rows)) != 1:
        raise InputError("not-unimodular", "chart must be a unimodular N×N matrix")
    diffs = ideal.differences()
    if not diffs:
        return JacobianCertificate((), 0, 1, 0)
    M = matmul(rows, transpose(diffs))
    expected = rank(diffs)
    rk = rank(M)
    g = minors_gcd(M, expected) if expected else 1
    return JacobianCertificate(tuple(tuple(r) for r in M), rk, g, expected)


# ---------------------------------------------------------------- singular locus

@dataclass(frozen=True)
class OrbitInfo:
    """A torus orbit of the orbit closure, indexed by the variables nonzero on it."""

    nonzero_vars: tuple[int, ...]
    dimension: int
    smooth: bool

    def to_json(self) -> dict:
        return {"nonzero_vars": list(self.nonzero_vars), "dimension": self.dimension,
                "smooth": self.smooth}


@dataclass(frozen=True)
class CoordinateTrace:
    """{U_i = 0} ∩ X."""

    variable: int
    certified_smooth: bool
    trace_empty: bool
    singular_orbits: tuple[tuple[int, ...], ...]
    linear_witness: int | None

    @property
    def flagged(self) -> bool:
        return not self.certified_smooth

    def to_json(self) -> dict:
        return {"variable": self.variable, "certified_smooth": self.certified_smooth,
                "flagged": self.flagged, "trace_empty": self.trace_empty,
                "singular_orbits": [list(o) for o in self.singular_orbits],
                "linear_witness": self.linear_witness}


@dataclass(frozen=True)
class SingularLocus:
    dimension: int
    orbits: tuple[OrbitInfo, ...]
    traces: tuple[CoordinateTrace, ...]
    subset: tuple[int, ...] = field(default=())

    @property
    def smooth(self) -> bool:
        return all(o.smooth for o in self.orbits)

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "smooth": self.smooth,
                "generating_subset": list(self.subset),
                "orbits": [o.to_json() for o in self.orbits],
                "traces": [t.to_json() for t in self.traces]}


def _orbit_is_smooth(gammas: list[tuple[int, ...]], face: frozenset[int], d: int) -> bool:
    """Whether S + Z(S∩F) ≅ Z^k ⊕ N^(d−k) for the semigroup S generated by gammas."""
    inside = [gammas[j] for j in sorted(face)]
    outside = [gammas[j] for j in range(len(gammas)) if j not in face]
    k = rank(inside) if inside else 0
    c = d - k
    if c == 0:
        return True                           # the dense torus
    if inside:
        snf = smith_normal_form(inside)
        if any(x != 1 for x in snf.invariants):
            return False                      # Z^d / Z(S∩F) has torsion
        # x ↦ (x·R)[k:] is the quotient map by the span of the face
        R = snf.right
        proj = [tuple(sum(g[i] * R[i][t] for i in range(d)) for t in range(k, d))
                for g in outside]
    else:
        proj = [tuple(g) for g in outside]
    if c == 1:
        # the quotient coordinate is only defined up to sign
        vals = [p[0] for p in proj]
        if all(v < 0 for v in vals):
            vals = [-v for v in vals]
        return all(v > 0 for v in vals) and min(vals) == 1
    normals = facet_normals(proj)
    if len(normals) != c:
        return False                          # projected cone is not simplicial
    basis = []
    for skip in range(c):
        on_ray = [p for p in proj
                  if all(dot(f, p) == 0 for t, f in enumerate(normals) if t != skip)]
        if not on_ray:
            return False
        basis.append(min(on_ray, key=lambda p: dot(normals[skip], p)))
    return abs(det(basis)) == 1


def _linear_witness(ideal: BinomialIdeal, subset: Sequence[int], i: int) -> bool:
    """Some chosen generator reads U_i − U^s (U_i alone and linear on one side)
    and U_i occurs in no other chosen generator."""
    hits = []
    for k in subset:
        b = ideal.binomials[k].normalized()
        if b.m[i] or b.n[i]:
            hits.append((k, b))
    if len(hits) != 1:
        return False
    _, b = hits[0]
    side, other = (b.m, b.n) if b.m[i] else (b.n, b.m)
    return sum(side) == 1 and other[i] == 0


def singular_locus(ideal: BinomialIdeal) -> SingularLocus:
    """Orbit-by-orbit smoothness of the orbit closure and the traces {U_i = 0}.

    Orbits correspond to faces F of the cone spanned by the variable degrees
    γ_j (the orbit where exactly the U_j with γ_j ∈ F are nonzero).  The
    trace of U_i is the union of the orbits with γ_i ∉ F.
    """
    N = ideal.num_vars
    if ideal.binomials:
        cert = verify_presentation(ideal)
        if not cert.lattice_saturated:
            raise InputError("not-saturated", "singular locus needs a saturated lattice")
    d = ideal.dimension
    if d == 0:
        raise InputError("rank-deficiency", "the lattice has full rank; the variety is a point")
    subset = tuple(generating_subset(ideal))
    if len(subset) != N - d:
        raise InputError("rank-deficiency", "generating subset does not reach rank N−d")
    gammas = lattice_degrees(ideal)
    normals = facet_normals(gammas)
    vanishing = [frozenset(j for j, g in enumerate(gammas) if dot(f, g) == 0) for f in normals]
    faces = face_closure(N, vanishing)
    orbits = []
    for face in faces:
        dim = rank([gammas[j] for j in sorted(face)]) if face else 0
        orbits.append(OrbitInfo(tuple(sorted(face)), dim, _orbit_is_smooth(gammas, face, d)))
    traces = []
    for i in range(N):
        inside = [o for o in orbits if i not in o.nonzero_vars]
        bad = tuple(o.nonzero_vars for o in inside if not o.smooth)
        witness = i if _linear_witness(ideal, subset, i) else None
        traces.append(CoordinateTrace(i, not bad, not inside, bad, witness))
    return SingularLocus(d, tuple(orbits), tuple(traces), subset)


def distinguished_point(ideal: BinomialIdeal, face: Sequence[int],
                        torus: Sequence | None = None) -> list[Fraction]:
    """A point on the orbit of ``face``: U_j = t^{γ_j} for j in the face, 0 otherwise."""
    gammas = lattice_degrees(ideal)
    d = len(gammas[0])
    t = [Fraction(1)] * d if torus is None else [Fraction(x) for x in torus]
    out = []
    for j, g in enumerate(gammas):
        if j in face:
            v = Fraction(1)
            for base, e in zip(t, g):
                v *= base ** e
            out.append(v)
        else:
            out.append(Fraction(0))
    return out


def exponent_matrix(binomials: Sequence[Binomial]) -> list[list[int]]:
    return as_int_matrix([b.difference() for b in binomials])


def all_minors(M: Sequence[Sequence[int]], k: int) -> list[int]:
    rows, cols = len(M), len(M[0])
    return [det([[M[i][j] for j in cs] for i in rs])
            for rs in combinations(range(rows), k) for cs in combinations(range(cols), k)]

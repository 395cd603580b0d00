"""Strict transforms under toric charts and the resolution pipelines built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .binomial_ideals import (Binomial, BinomialIdeal, JacobianCertificate, jacobian_certificate,
                              lattice_degrees, verify_presentation)
from .cones_fans import (DEFAULT_MAX_DIM, Cone, Fan, UnimodularChart, barycentric,
                         build_RES_fan, chart_of, locate_weight, regular_cone_at)
from .errors import ComputationError, InputError
from .exact_linalg import dot, primitive, rank, rational_inverse, transpose
from .ordered_groups import (DEFAULT_SEARCH_BOUND, GroupElement, LexZ, ValueSemigroup,
                             as_element, minimal_relation)
from .polynomial import SparsePoly


def _as_chart(chart) -> UnimodularChart:
    return chart if isinstance(chart, UnimodularChart) else UnimodularChart(chart)


@dataclass(frozen=True)
class TransformedEquation:
    """Pullback = scale · Y^exceptional_exponent · strict, exactly."""

    exceptional_exponent: tuple[int, ...]
    strict: SparsePoly
    scale: Fraction = Fraction(1)
    swapped: bool = False

    def total(self) -> SparsePoly:
        return self.strict.shift(self.exceptional_exponent) * self.scale

    def to_json(self) -> dict:
        return {"exceptional_exponent": list(self.exceptional_exponent),
                "strict": self.strict.to_json(), "strict_text": self.strict.format(),
                "scale": str(self.scale), "swapped": self.swapped}


def _orient(bn: Binomial, chart: UnimodularChart) -> tuple[Binomial, bool, tuple[int, ...]]:
    diff = bn.difference()
    vals = chart.transform_exponent(diff)
    if all(v >= 0 for v in vals):
        return bn, False, vals
    if all(v <= 0 for v in vals):
        return Binomial(bn.n, bn.m, 1 / bn.lam), True, tuple(-v for v in vals)
    raise ComputationError("chart-not-compatible",
                           f"chart rays lie on both sides of the hyperplane of {diff}")


def strict_transform_binomial(bn: Binomial, chart) -> TransformedEquation:
    """Factor the pullback of U^m − λU^n as Y^{e(n)}·(Y^{⟨a,m−n⟩} − λ)."""
    chart = _as_chart(chart)
    if bn.num_vars != chart.size:
        raise InputError("arity-mismatch", "binomial and chart sizes differ")
    oriented, swapped, vals = _orient(bn, chart)
    e = chart.transform_exponent(oriented.n)
    k = chart.size
    strict = SparsePoly(k, [(vals, 1), ((0,) * k, -oriented.lam)])
    scale = -bn.lam if swapped else Fraction(1)
    return TransformedEquation(e, strict, scale, swapped)


@dataclass(frozen=True)
class DeformedEquation:
    """U^m − λU^n + Σ c_s U^s with every tail term of strictly higher weight."""

    binomial: Binomial
    tail: tuple[tuple[Fraction, tuple[int, ...]], ...] = ()
    linear_var: int | None = None
    weight_cutoff: object = None

    def __post_init__(self):
        tail = tuple((Fraction(c), tuple(int(x) for x in e)) for c, e in self.tail)
        object.__setattr__(self, "tail", tail)
        N = self.binomial.num_vars
        for c, e in tail:
            if len(e) != N:
                raise InputError("arity-mismatch", f"tail exponent {e}")
            if c == 0:
                raise InputError("zero-tail-coefficient", f"tail term {e} has coefficient 0")
        if self.linear_var is not None:
            unit = tuple(int(i == self.linear_var) for i in range(N))
            if not any(e == unit for _, e in tail):
                raise InputError("missing-linear-term",
                                 f"U_{self.linear_var} does not occur linearly in the tail")

    def poly(self) -> SparsePoly:
        p = self.binomial.poly()
        N = self.binomial.num_vars
        return p + SparsePoly(N, [(e, c) for c, e in self.tail])

    def to_json(self) -> dict:
        out = {"binomial": self.binomial.to_json(),
               "tail": [{"coeff": str(c), "exp": list(e)} for c, e in self.tail]}
        if self.linear_var is not None:
            out["linear_var"] = self.linear_var
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "DeformedEquation":
        return cls(Binomial.from_json(obj["binomial"]),
                   tuple((Fraction(str(t["coeff"])), tuple(t["exp"])) for t in obj.get("tail", [])),
                   obj.get("linear_var"))


@dataclass(frozen=True)
class TailReport:
    exponent: tuple[int, ...]
    residual: tuple[int, ...]
    divisible: bool
    exceptional_excess: tuple[int, ...]

    @property
    def strict_excess(self) -> bool:
        return any(x > 0 for x in self.exceptional_excess)

    @property
    def certified(self) -> bool:
        """Divisible along the exceptional coordinates with positive excess on one of them."""
        return self.strict_excess and all(x >= 0 for x in self.exceptional_excess)

    def to_json(self) -> dict:
        return {"exponent": list(self.exponent), "residual": list(self.residual),
                "divisible": self.divisible, "exceptional_excess": list(self.exceptional_excess),
                "strict_excess": self.strict_excess, "certified": self.certified}


@dataclass(frozen=True)
class DeformedTransform:
    transform: TransformedEquation
    binomial_exponent: tuple[int, ...]
    tails: tuple[TailReport, ...]

    @property
    def certified(self) -> bool:
        return all(t.certified for t in self.tails)

    def to_json(self) -> dict:
        out = self.transform.to_json()
        out.update(binomial_exponent=list(self.binomial_exponent),
                   tails=[t.to_json() for t in self.tails], certified=self.certified)
        return out


def _weight(exponent: Sequence[int], weights: Sequence[GroupElement]) -> GroupElement:
    total = GroupElement.zero(weights[0].spec)
    for e, w in zip(exponent, weights):
        if e:
            total = total + w * e
    return total


def as_weights(weights: Sequence) -> list[GroupElement]:
    """Variable weights from ints/Fractions/GroupElements or integer degree vectors (lex)."""
    if not weights:
        raise InputError("no-weights", "weights are required")
    if isinstance(weights[0], (tuple, list)):
        spec = LexZ(len(weights[0]))
        return [GroupElement(tuple(w), spec) for w in weights]
    return [as_element(w) for w in weights]


def strict_transform_deformed(eq: DeformedEquation, chart, weights: Sequence,
                              exceptional: Sequence[int] | None = None) -> DeformedTransform:
    """Strict transform of a deformed binomial plus a divisibility report per tail term.

    ``exceptional`` lists the Y-coordinates on which excess is measured; by
    default those whose chart row is not a standard basis vector.
    """
    chart = _as_chart(chart)
    ws = as_weights(weights)
    bn = eq.binomial
    base = _weight(bn.m, ws)
    if base != _weight(bn.n, ws):
        raise InputError("not-homogeneous", "binomial is not homogeneous for the weights")
    for _, s in eq.tail:
        if not _weight(s, ws) > base:
            raise InputError("not-a-deformation", f"tail term {s} does not have higher weight")
    oriented, swapped, _ = _orient(bn, chart)
    e_bin = chart.transform_exponent(oriented.n)
    total = eq.poly().pullback(chart.matrix)
    e = total.min_exponent()
    scale = -bn.lam if swapped else Fraction(1)
    strict = total.divide_monomial(e) * (1 / scale)
    if exceptional is None:
        exceptional = [j for j, row in enumerate(chart.matrix)
                       if sorted(row) != [0] * (chart.size - 1) + [1]]
    reports = []
    for _, s in eq.tail:
        residual = tuple(a - b for a, b in zip(chart.transform_exponent(s), e_bin))
        reports.append(TailReport(s, residual, all(x >= 0 for x in residual),
                                  tuple(residual[j] for j in exceptional)))
    return DeformedTransform(TransformedEquation(e, strict, scale, swapped), e_bin, tuple(reports))


# ---------------------------------------------------------------- resolve

@dataclass(frozen=True)
class ChartReport:
    cone: Cone
    chart: UnimodularChart
    transforms: tuple[TransformedEquation, ...] | None
    certificate: JacobianCertificate
    meets_exceptional: bool
    is_center: bool

    def to_json(self) -> dict:
        out = {"chart": self.chart.to_json(), "certificate": self.certificate.to_json(),
               "meets_exceptional": self.meets_exceptional, "center": self.is_center}
        if self.transforms is not None:
            out["transforms"] = [t.to_json() for t in self.transforms]
        return out


@dataclass(frozen=True)
class ResolutionReport:
    ideal: BinomialIdeal
    fan: Fan
    charts: tuple[ChartReport, ...]
    center_index: int | None
    dimension: int

    @property
    def center(self) -> ChartReport | None:
        return None if self.center_index is None else self.charts[self.center_index]

    @property
    def all_certified(self) -> bool:
        return all(c.certificate.smooth_all_characteristics for c in self.charts)

    def to_json(self) -> dict:
        return {"ideal": self.ideal.to_json(), "dimension": self.dimension,
                "fan": self.fan.to_json(), "chart_count": len(self.charts),
                "center_index": self.center_index, "all_certified": self.all_certified,
                "charts": [c.to_json() for c in self.charts]}


def _center_weights(degrees: Sequence[Sequence[int]]) -> list[GroupElement]:
    r = len(degrees[0])
    if r == 1:
        return [as_element(d[0]) for d in degrees]
    return [GroupElement(tuple(d), LexZ(r)) for d in degrees]


def resolve(ideal: BinomialIdeal, max_dim: int = DEFAULT_MAX_DIM,
            with_transforms: bool = True, center_weights: Sequence | None = None) -> ResolutionReport:
    """Embedded resolution of the orbit closure by a regular fan satisfying RES(b)."""
    ideal_d = ideal if ideal.degrees is not None else \
        BinomialIdeal(ideal.num_vars, ideal.binomials, tuple(lattice_degrees(ideal)))
    cert = verify_presentation(ideal_d)
    if not cert.ok:
        raise InputError("presentation-invalid", "; ".join(cert.failures))
    N = ideal.num_vars
    if N > max_dim:
        raise InputError("dimension-exceeded", f"ambient dimension {N} > max-dim {max_dim}")
    b = transpose(ideal_d.degrees)
    normals = list(dict.fromkeys(tuple(primitive(d)) for d in ideal.differences()))
    fan = build_RES_fan(b, normals, max_dim)
    weights = _center_weights(ideal_d.degrees) if center_weights is None else as_weights(center_weights)
    center = None
    if all(w.sign() > 0 for w in weights):
        center = locate_weight(fan, weights)
    charts = []
    center_index = None
    for idx, cone in enumerate(fan.cones):
        chart = chart_of(cone)
        transforms = None
        if with_transforms:
            transforms = tuple(strict_transform_binomial(bn, chart) for bn in ideal.binomials)
        meets = any(all(dot(ray, v) == 0 for v in normals) for ray in cone.rays)
        is_center = center is not None and cone == center
        if is_center:
            center_index = idx
        charts.append(ChartReport(cone, chart, transforms, jacobian_certificate(ideal, chart),
                                  meets, is_center))
    return ResolutionReport(ideal_d, fan, tuple(charts), center_index, cert.dimension)


# ---------------------------------------------------------------- principalization

@dataclass(frozen=True)
class PrincipalizationResult:
    chart: UnimodularChart
    cone: Cone
    least_index: int
    transforms: tuple[tuple[int, ...], ...]
    certified: bool

    def to_json(self) -> dict:
        return {"chart": self.chart.to_json(), "least_index": self.least_index,
                "transforms": [list(t) for t in self.transforms], "certified": self.certified}


def principalize_monomials(monomials: Sequence[Sequence[int]], weights: Sequence,
                           max_dim: int = DEFAULT_MAX_DIM) -> PrincipalizationResult:
    """Chart in which the least-weight monomial divides every other monomial."""
    mons = [tuple(int(x) for x in m) for m in monomials]
    if not mons:
        raise InputError("no-monomials", "need at least one monomial")
    ws = as_weights(weights)
    N = len(ws)
    if any(len(m) != N for m in mons):
        raise InputError("arity-mismatch", "monomials and weights disagree in length")
    if N > max_dim:
        raise InputError("dimension-exceeded", f"ambient dimension {N} > max-dim {max_dim}")
    if any(w.sign() <= 0 for w in ws):
        raise InputError("nonpositive-weight", "weights must be positive")
    normals = []
    for i in range(len(mons)):
        for j in range(i + 1, len(mons)):
            diff = [a - b for a, b in zip(mons[i], mons[j])]
            if any(diff):
                normals.append(tuple(primitive(diff)))
    normals = list(dict.fromkeys(normals))
    cone = regular_cone_at(Fan.quadrant(N).cones[0], normals, ws)
    chart = chart_of(cone)
    transforms = tuple(chart.transform_exponent(m) for m in mons)
    vals = [_weight(m, ws) for m in mons]
    least = vals[0]
    for v in vals[1:]:
        if v < least:
            least = v
    ties = [k for k, v in enumerate(vals) if v == least]

    def divides_all(k: int) -> bool:
        return all(all(a <= b for a, b in zip(transforms[k], t)) for t in transforms)

    pick = next((k for k in ties if divides_all(k)), ties[0])
    return PrincipalizationResult(chart, cone, pick, transforms, divides_all(pick))


# ---------------------------------------------------------------- monomial curves

@dataclass(frozen=True)
class CenterCheck:
    positive: tuple[int, ...]
    point: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    gradient_rank: int
    equations: int

    @property
    def unit_linear(self) -> bool:
        return all(v == 0 for v in self.values) and self.gradient_rank == self.equations

    def to_json(self) -> dict:
        return {"positive_coordinates": list(self.positive),
                "point": [str(x) for x in self.point], "values": [str(v) for v in self.values],
                "gradient_rank": self.gradient_rank, "equations": self.equations,
                "unit_linear": self.unit_linear}


@dataclass(frozen=True)
class CurveReport:
    semigroup: tuple[int, ...]
    equations: tuple[Binomial, ...]
    resolution: ResolutionReport
    center: Cone
    deformed: tuple[DeformedTransform, ...] = ()
    center_check: CenterCheck | None = None

    def to_json(self) -> dict:
        out = {"semigroup": list(self.semigroup),
               "equations": [b.to_json() for b in self.equations],
               "equations_text": [b.format() for b in self.equations],
               "center_chart": [list(r) for r in self.center.rays],
               "resolution": self.resolution.to_json()}
        if self.deformed:
            out["deformed"] = [d.to_json() for d in self.deformed]
        if self.center_check is not None:
            out["center_check"] = self.center_check.to_json()
        return out


def curve_equations(gens: Sequence[int], search_bound: int = DEFAULT_SEARCH_BOUND) -> list[Binomial]:
    """U_{i-1}^{n_i}·U^{n-side} − U^ℓ from the minimal relation of each generator."""
    sg = ValueSemigroup(tuple(as_element(g) for g in gens))
    N = len(gens)
    out = []
    for i in range(2, N + 1):
        rel = minimal_relation(sg, i, search_bound)
        m, n = rel.binomial_exponents(N)
        out.append(Binomial(m, n))
    return out


def _center_point(chart: UnimodularChart, equations: Sequence[Binomial],
                  positive: Sequence[int]) -> list[Fraction]:
    """Torus coordinates of the center: Y_j = 0 on positive coordinates, else solved from λ's."""
    n = chart.size
    zero_cols = [j for j in range(n) if j not in positive]
    point = [Fraction(0)] * n
    if not zero_cols:
        return point
    rows, lams = [], []
    for bn in equations:
        oriented, _, vals = _orient(bn, chart)
        rows.append([vals[j] for j in zero_cols])
        lams.append(oriented.lam)
    if len(rows) != len(zero_cols) or rank(rows) != len(zero_cols):
        raise ComputationError("center-not-determined",
                               "binomial strict transforms do not fix the center")
    inv = rational_inverse(rows)
    for k, j in enumerate(zero_cols):
        value = Fraction(1)
        for l, lam in enumerate(lams):
            expo = inv[k][l]
            if lam != 1:
                if expo.denominator != 1:
                    raise ComputationError("center-not-rational",
                                           "center coordinates need roots of the λ's")
                value *= lam ** int(expo)
        point[j] = value
    return point


def resolve_monomial_curve(gens: Sequence, tails: dict | None = None,
                           max_dim: int = DEFAULT_MAX_DIM,
                           search_bound: int = DEFAULT_SEARCH_BOUND,
                           with_transforms: bool = True) -> CurveReport:
    """Equations, resolution and center chart of the monomial curve with semigroup ⟨gens⟩.

    ``tails`` maps an equation index (0-based) to a list of (coeff, exponent)
    pairs, or to a pair ``(terms, linear_var)`` naming the variable in which
    the deformed equation is linear; see :class:`DeformedEquation`.
    """
    values = [as_element(g) for g in gens]
    ints = []
    for v in values:
        c = v.coeffs[0]
        if v.spec.kind != "rational" or c.denominator != 1 or c <= 0:
            raise InputError("not-numerical", "monomial curves need positive integer generators")
        ints.append(int(c))
    if sorted(set(ints)) != ints:
        raise InputError("not-increasing", "generators must be strictly increasing")
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g != 1:
        raise InputError("group-not-generated", "generators must have gcd 1")
    N = len(ints)
    equations = curve_equations(ints, search_bound) if N > 1 else []
    ideal = BinomialIdeal(N, tuple(equations), tuple((x,) for x in ints))
    report = resolve(ideal, max_dim=max_dim, with_transforms=with_transforms)
    center = report.center.cone
    chart = chart_of(center)
    lam = barycentric(center, ints)
    positive = tuple(j for j, x in enumerate(lam) if x.sign() > 0)
    deformed = []
    check = None
    if tails:
        deqs = []
        for k, bn in enumerate(equations):
            spec = tails.get(k)
            if spec is None:
                deqs.append(DeformedEquation(bn))
                continue
            terms, linear = spec if isinstance(spec, tuple) else (spec, None)
            deqs.append(DeformedEquation(bn, tuple(terms), linear))
        deformed = [strict_transform_deformed(d, chart, ints, positive) for d in deqs]
        point = _center_point(chart, equations, positive)
        stricts = [d.transform.strict for d in deformed]
        values_at = tuple(s.evaluate(point) for s in stricts)
        zero_cols = [j for j in range(N) if j not in positive]
        grad = [[s.derivative(j).evaluate(point) for j in zero_cols] for s in stricts]
        check = CenterCheck(positive, tuple(point), values_at,
                            rank(grad) if grad and zero_cols else 0, len(stricts))
    return CurveReport(tuple(ints), tuple(equations), report, center, tuple(deformed), check)

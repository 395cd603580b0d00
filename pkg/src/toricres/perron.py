"""Perron's algorithm on weight vectors and streaming presentations of value semigroup algebras."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .binomial_ideals import Binomial
from .errors import ComputationError, InputError
from .exact_linalg import det, unimodular_inverse
from .ordered_groups import (DEFAULT_CF_DEPTH, CFReal, GroupElement, OrderSpec, RationalLine,
                             WeightedLine)


def weight_vector(tau: Sequence, cf_depth: int = DEFAULT_CF_DEPTH) -> list[GroupElement]:
    """Put the entries of tau (CFReals, Fractions, ints) in one ordered group.

    Rational entries are multiples of 1; each distinct irrational entry gets
    its own basis weight, declared independent of 1 and of the others.
    """
    irrational: list[CFReal] = []
    for t in tau:
        if isinstance(t, CFReal) and not t.is_rational and t not in irrational:
            irrational.append(t)
    if not irrational:
        spec: OrderSpec = RationalLine()
        return [GroupElement((_rational(t),), spec) for t in tau]
    spec = WeightedLine([CFReal((1,))] + irrational, cf_depth)
    out = []
    for t in tau:
        coeffs = [Fraction(0)] * spec.rank
        if isinstance(t, CFReal) and not t.is_rational:
            coeffs[1 + irrational.index(t)] = Fraction(1)
        else:
            coeffs[0] = _rational(t)
        out.append(GroupElement(tuple(coeffs), spec))
    return out


def _rational(t) -> Fraction:
    return t.value() if isinstance(t, CFReal) else Fraction(t)


def floor_ratio(x: GroupElement, y: GroupElement, depth: int = 8) -> int:
    """floor(x / y) for y > 0, decided by exact sign tests."""
    if y.sign() <= 0:
        raise InputError("nonpositive-divisor", "floor ratio needs a positive divisor")
    if y.spec.kind == "rational":
        q = x.coeffs[0] / y.coeffs[0]
        return q.numerator // q.denominator
    xl, xh = x.interval(depth)
    yl, yh = y.interval(depth)
    guess = (xl + xh) / (yl + yh) if yl + yh > 0 else Fraction(0)
    a = guess.numerator // guess.denominator
    while (x - y * a).sign() < 0:
        a -= 1
    while (x - y * (a + 1)).sign() >= 0:
        a += 1
    return a


@dataclass(frozen=True)
class PerronStep:
    """State at step h: w = Σ_j tau_j · A^(h+j), window = A^(h), ..., A^(h+m-1)."""

    h: int
    tau: tuple[GroupElement, ...]
    window: tuple[tuple[int, ...], ...]
    determinant: int
    quotients: tuple[int, ...]
    new_vector: tuple[int, ...]
    dual: tuple[tuple[int, ...], ...]
    inclusion: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"h": self.h, "window": [list(v) for v in self.window],
                "determinant": self.determinant,
                "determinant_ok": self.determinant == (-1) ** (self.h * (len(self.window) - 1)),
                "quotients": list(self.quotients), "new_vector": list(self.new_vector),
                "dual": [list(v) for v in self.dual],
                "inclusion": [list(r) for r in self.inclusion],
                "tau": [t.to_json() for t in self.tau]}


@dataclass(frozen=True)
class PerronRun:
    weight: tuple[GroupElement, ...]
    vectors: tuple[tuple[int, ...], ...]
    steps: tuple[PerronStep, ...]

    def to_json(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors],
                "steps": [s.to_json() for s in self.steps]}


def perron_run(tau: Sequence, steps: int, cf_depth: int = DEFAULT_CF_DEPTH) -> PerronRun:
    """Run ``steps`` rounds of Perron's algorithm on the positive vector tau.

    Round h writes τ_j = τ'_{j-1} + a_j τ'_m with a_j = floor(τ_j / τ_1), so
    τ' = (τ_2 − a_2τ_1, ..., τ_m − a_mτ_1, τ_1) and
    A^(h+m) = A^(h) + Σ_j a_j A^(h+j-1).
    """
    if steps < 0:
        raise InputError("bad-steps", "steps must be >= 0")
    m = len(tau)
    if m < 2:
        raise InputError("too-short", "need at least two entries")
    cur = weight_vector(tau, cf_depth)
    for t in cur:
        if t.sign() <= 0:
            raise InputError("nonpositive-entry", "tau entries must be positive")
    original = tuple(cur)
    vectors = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    out = []
    for h in range(steps):
        if cur[0].sign() == 0:
            raise ComputationError("rational-dependence",
                                   f"entries became rationally dependent after {h} steps")
        window = [list(v) for v in vectors[h:h + m]]
        d = det(window)
        expected = (-1) ** (h * (m - 1))
        if d != expected:
            raise ComputationError("determinant-check-failed", f"step {h}: det {d} != {expected}")
        quotients = [floor_ratio(t, cur[0]) for t in cur[1:]]
        new = list(vectors[h])
        for a, v in zip(quotients, vectors[h + 1:h + m]):
            new = [x + a * y for x, y in zip(new, v)]
        vectors.append(tuple(new))
        cur = [t - cur[0] * a for t, a in zip(cur[1:], quotients)] + [cur[0]]
        # dual basis: rows e_j with ⟨e_j, A^(h+i)⟩ = δ_ij
        inv = unimodular_inverse(window)
        dual = [tuple(inv[i][j] for i in range(m)) for j in range(m)]
        nxt = vectors[h + 1:h + 1 + m]
        inclusion = tuple(tuple(sum(a * b for a, b in zip(dual[j], nxt[k])) for k in range(m))
                          for j in range(m))
        if any(x < 0 for row in inclusion for x in row):
            raise ComputationError("nesting-failed", f"step {h}: cone not nested")
        out.append(PerronStep(h, tuple(cur), tuple(tuple(v) for v in window), d,
                              tuple(quotients), tuple(new), tuple(dual), inclusion))
    _check_weight(original, cur, vectors[steps:steps + m])
    return PerronRun(original, tuple(vectors), tuple(out))


def _check_weight(original, cur, window) -> None:
    m = len(original)
    for i in range(m):
        total = GroupElement.zero(original[0].spec)
        for t, v in zip(cur, window):
            if v[i]:
                total = total + t * v[i]
        if total != original[i]:
            raise ComputationError("weight-identity-failed", f"coordinate {i}")


# ---------------------------------------------------------------- presentations

@dataclass(frozen=True)
class PresentationStream:
    kind: str
    variables: tuple[str, ...]
    degrees: tuple[tuple[Fraction, ...], ...]
    relations: tuple[Binomial, ...]
    degree_basis: tuple[str, ...]

    def is_homogeneous(self) -> bool:
        def deg(e):
            return tuple(sum(k * d[t] for k, d in zip(e, self.degrees))
                         for t in range(len(self.degree_basis)))
        return all(deg(b.m) == deg(b.n) for b in self.relations)

    def lines(self) -> list[str]:
        return [b.format(self.variables) for b in self.relations]

    def to_json(self) -> dict:
        return {"kind": self.kind, "variables": list(self.variables),
                "degree_basis": list(self.degree_basis),
                "degrees": {v: [str(x) for x in d] for v, d in zip(self.variables, self.degrees)},
                "relations": [b.to_json() for b in self.relations],
                "relations_text": self.lines(), "homogeneous": self.is_homogeneous()}


def _unit(n: int, *idx: int) -> tuple[int, ...]:
    e = [0] * n
    for i in idx:
        e[i] += 1
    return tuple(e)


def _lex_stream(d: int, count: int) -> PresentationStream:
    if d < 2:
        raise InputError("bad-rank", "lex presentations need d >= 2")
    # relations V^(i)_j − V^(i)_{j+1}·V^(i+1)_0 in j-major order; V^(d-1)_0 is W
    rels = []
    j = 0
    while len(rels) < count:
        for i in range(d - 1):
            if len(rels) < count:
                rels.append((i, j))
        j += 1
    names: list[tuple[int, int]] = []

    def var(i, j):
        key = (i, j)
        if key not in names:
            names.append(key)
        return names.index(key)

    raw = []
    for i, j in rels:
        raw.append((var(i, j), var(i, j + 1), var(i + 1, 0)))
    n = len(names)
    relations = tuple(Binomial(_unit(n, a), _unit(n, b, c)) for a, b, c in raw)

    def name(i, j):
        if i == d - 1:
            return "W"
        return f"V{j}" if d == 2 else f"V{i}_{j}"

    def degree(i, j):
        v = [Fraction(0)] * d
        v[i] += 1
        if i + 1 < d:
            v[i + 1] -= j
        return tuple(v)

    return PresentationStream(f"lex_Zd({d})", tuple(name(i, j) for i, j in names),
                              tuple(degree(i, j) for i, j in names), relations,
                              tuple(f"e{k}" for k in range(d)))


def _cf_stream(s: Sequence[int], count: int) -> PresentationStream:
    if len(s) < count:
        raise InputError("not-enough-quotients", f"need {count} partial quotients")
    if any(x < 1 for x in s[:count]):
        raise InputError("bad-s", "partial quotients must be >= 1")
    n = count + 2
    degs = [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))]
    for i in range(count):
        a, b = degs[i], degs[i + 1]
        degs.append((a[0] - s[i] * b[0], a[1] - s[i] * b[1]))
    relations = []
    for i in range(count):
        n_exp = [0] * n
        n_exp[i + 1] = s[i]
        n_exp[i + 2] = 1
        relations.append(Binomial(_unit(n, i), tuple(n_exp)))
    return PresentationStream(f"cf_tau({','.join(str(x) for x in s[:count])})",
                              tuple(f"V{i + 1}" for i in range(n)), tuple(degs[:n]),
                              tuple(relations), ("1", "tau"))


def _zariski_stream(s: Sequence[int], c: Sequence, count: int) -> PresentationStream:
    if len(s) < count or len(c) < count:
        raise InputError("not-enough-quotients", f"need {count} entries of s and c")
    if any(x < 1 for x in s[:count]):
        raise InputError("bad-s", "exponents must be >= 1")
    n = count + 1
    degs = [(Fraction(1),)]
    for i in range(count):
        degs.append((degs[-1][0] / s[i],))
    relations = []
    for i in range(count):
        n_exp = [0] * n
        n_exp[i + 1] = s[i]
        relations.append(Binomial(_unit(n, i), tuple(n_exp), Fraction(c[i])))
    return PresentationStream("zariski_Q", tuple(f"V{i + 1}" for i in range(n)), tuple(degs),
                              tuple(relations), ("1",))


def presentation_stream(kind: str, count: int, d: int = 2, s: Sequence[int] = (),
                        c: Sequence = ()) -> PresentationStream:
    """First ``count`` relations of one of the three example presentations."""
    if count < 1:
        raise InputError("bad-count", "count must be >= 1")
    if kind == "lex_Zd":
        return _lex_stream(d, count)
    if kind == "cf_tau":
        return _cf_stream(list(s), count)
    if kind == "zariski_Q":
        return _zariski_stream(list(s), list(c) if c else [1] * len(s), count)
    raise InputError("bad-kind", f"unknown presentation kind {kind!r}")


def iter_vectors(run: PerronRun) -> Iterator[tuple[int, ...]]:
    yield from run.vectors

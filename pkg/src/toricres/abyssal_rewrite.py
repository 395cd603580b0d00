"""Valuations computed by rewriting modulo chains of equations, each linear in a new variable.

A system has variables u_2, ..., u_K and one rule per variable u_j (j >= 3):

    u_j^{power} -> d_j * u^{ell(j)} + u_{j+1}

The successor of the last rule is a sink variable without a rule, whose
weight is only a lower bound for its true value.  Normal forms can keep sink
terms, so they are exact identities; the valuation ignores them once the
smallest surviving weight is at most that bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ComputationError, InputError
from .ordered_groups import GroupElement, as_element, exzar_semigroup, minimal_relation, rational
from .polynomial import SparsePoly

__all__ = ["RewriteRule", "RewriteSystem", "SparsePoly", "Lead", "leading_term", "exzar_coefficients",
           "exzar_system", "normal_form", "valuate", "back_substitute"]

MAX_REWRITES = 200000


@dataclass(frozen=True)
class RewriteRule:
    var: int
    power: int
    rhs: SparsePoly


class RewriteSystem:
    """Variables (the last one may be a sink), weights and one rule per rewritten variable."""

    def __init__(self, names: Sequence[str], weights: Sequence, rules: Sequence[RewriteRule],
                 sink: int | None = None, s: Sequence[int] | None = None):
        self.names = tuple(names)
        self.weights = tuple(as_element(w) for w in weights)
        if len(self.weights) != len(self.names):
            raise InputError("arity-mismatch", "one weight per variable")
        self.rules = {r.var: r for r in rules}
        self.sink = sink
        self.s = tuple(s) if s is not None else None
        for a, b in zip(self.weights, self.weights[1:]):
            if not a < b:
                raise InputError("weights-not-increasing", "variable weights must increase")
        for r in rules:
            self._check_rule(r)
        if sink is not None and sink in self.rules:
            raise InputError("bad-sink", "the sink variable cannot carry a rule")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def weight(self, exponent: Sequence[int]) -> GroupElement:
        total = self.weights[0] * 0
        for e, w in zip(exponent, self.weights):
            if e:
                total = total + w * e
        return total

    def _check_rule(self, r: RewriteRule) -> None:
        if r.power < 1 or r.rhs.nvars != self.nvars:
            raise InputError("bad-rule", f"rule for {self.names[r.var]}")
        left = self.weights[r.var] * r.power
        def touches_sink(e):
            return self.sink is not None and e[self.sink] > 0

        # a sink term may tie with the left side: its weight is only a lower bound
        weights = sorted((self.weight(e), touches_sink(e), e) for e, _ in r.rhs.items())
        if not weights or weights[0][0] != left or weights[0][1]:
            raise InputError("rule-not-homogeneous",
                             f"rule for {self.names[r.var]}: leading term weight differs from left side")
        for w, sink_term, _ in weights[1:]:
            if not (w > left or (sink_term and w == left)):
                raise InputError("rule-tail-too-low",
                                 f"rule for {self.names[r.var]}: tail must have strictly larger weight")
        lead = weights[0][2]
        if lead[r.var] >= r.power or any(lead[k] for k in range(r.var + 1, self.nvars)):
            raise InputError("bad-rule", f"rule for {self.names[r.var]}: leading term uses later variables")

    def to_json(self) -> dict:
        return {"variables": list(self.names), "weights": [w.to_json() for w in self.weights],
                "sink": self.sink,
                "rules": [{"var": r.var, "power": r.power, "rhs": r.rhs.to_json()}
                          for r in sorted(self.rules.values(), key=lambda r: r.var)]}

    @classmethod
    def from_json(cls, data: dict) -> "RewriteSystem":
        if "s" in data:
            s = [int(x) for x in data["s"]]
            auto = data.get("weights-auto", "exzar")
            if auto != "exzar":
                raise InputError("bad-system", f"unknown weights-auto {auto!r}")
            d = [Fraction(str(x)) for x in data["d"]] if "d" in data else None
            c = [Fraction(str(x)) for x in data["c"]] if "c" in data else None
            return exzar_system(s, d=d, c=c)
        try:
            names = data["variables"]
            weights = [rational(Fraction(str(w["coeffs"][0] if isinstance(w, dict) else w)))
                       for w in data["weights"]]
            rules = [RewriteRule(int(r["var"]), int(r["power"]),
                                 SparsePoly.from_json(len(names), r["rhs"])) for r in data["rules"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("bad-system", str(exc)) from exc
        return cls(names, weights, rules, data.get("sink"))


# ------------------------------------------------------------------ normal forms

def _reducible(e: Sequence[int], sys: RewriteSystem) -> list[int]:
    return [j for j, r in sys.rules.items() if e[j] >= r.power]


def _apply(e: tuple[int, ...], rule: RewriteRule) -> SparsePoly:
    rest = list(e)
    rest[rule.var] -= rule.power
    return rule.rhs.shift(rest)


def _check_input(p: SparsePoly, sys: RewriteSystem) -> None:
    if p.nvars != sys.nvars:
        raise InputError("arity-mismatch", f"polynomial has {p.nvars} variables, system {sys.nvars}")


def normal_form(p: SparsePoly, sys: RewriteSystem, strategy: str = "highest",
                rng: random.Random | None = None, keep_sink: bool = False) -> SparsePoly:
    """Reduce p until no variable u_j with a rule has exponent >= its power.

    ``strategy="highest"`` rewrites the highest-index reducible variable
    first; ``"random"`` picks a reducible variable with ``rng``.  Terms
    containing the sink variable are dropped unless ``keep_sink``.
    """
    _check_input(p, sys)
    if strategy not in ("highest", "random"):
        raise InputError("bad-strategy", strategy)
    rng = rng or random.Random(0)
    memo: dict[tuple[int, ...], SparsePoly] = {}
    work = dict(p.terms)
    done: dict[tuple[int, ...], Fraction] = {}
    steps = 0
    while work:
        e = max(work) if strategy == "highest" else rng.choice(sorted(work))
        c = work.pop(e)
        if c == 0:
            continue
        options = _reducible(e, sys)
        if not options:
            done[e] = done.get(e, Fraction(0)) + c
            continue
        steps += 1
        if steps > MAX_REWRITES:
            raise ComputationError("rewrite-limit", f"more than {MAX_REWRITES} rewrites")
        j = max(options) if strategy == "highest" else rng.choice(options)
        key = e + (j,)
        if key not in memo:
            memo[key] = _apply(e, sys.rules[j])
        for f, k in memo[key].terms.items():
            work[f] = work.get(f, Fraction(0)) + c * k
    out = SparsePoly(sys.nvars, done)
    if not keep_sink and sys.sink is not None:
        out = SparsePoly(sys.nvars, {e: c for e, c in out.terms.items() if not e[sys.sink]})
    return out


def _needed_depth(p: SparsePoly, sys: RewriteSystem) -> int:
    """Number of variables after which s_2···s_i exceeds deg p (or one more than now)."""
    current = sys.nvars
    if sys.s is None:
        return current + 1
    deg = p.degree()
    prod = 1
    for i, s in enumerate(sys.s[1:], start=2):
        prod *= s
        if prod > deg:
            return max(current + 1, i + 1)
    return max(current + 1, len(sys.s) + 1)


def valuate(p: SparsePoly, sys: RewriteSystem) -> GroupElement:
    """Smallest weight among the monomials of the normal form of p."""
    _check_input(p, sys)
    if p.is_zero():
        raise InputError("zero-has-no-valuation", "the zero polynomial has no valuation")
    nf = normal_form(p, sys, keep_sink=True)
    if nf.is_zero():
        raise ComputationError("zero-has-no-valuation", "p reduces to zero modulo the system")
    kept = [(sys.weight(e), e) for e, _ in nf.items() if sys.sink is None or not e[sys.sink]]
    if not kept:
        raise ComputationError(f"system-too-short({_needed_depth(p, sys)})",
                               "every surviving term involves the truncated successor")
    kept.sort()
    best = kept[0][0]
    if sys.sink is not None and best > sys.weights[sys.sink]:
        raise ComputationError(f"system-too-short({_needed_depth(p, sys)})",
                               "minimal weight exceeds the bound for the truncated successor")
    if len(kept) > 1 and kept[1][0] == best:
        raise ComputationError("initial-form-cancellation",
                               f"two normal-form monomials share the minimal weight {best}")
    return best


def back_substitute(q: SparsePoly, sys: RewriteSystem, base: Sequence[int]) -> SparsePoly:
    """Express q in the variables ``base`` by solving each rule for its successor.

    The successor of the rule for u_j is read off as the degree-one term of
    the rule's tail; it equals u_j^power − (rest of rhs).
    """
    values: dict[int, SparsePoly] = {i: SparsePoly.variable(sys.nvars, i) for i in base}
    for j in sorted(sys.rules):
        r = sys.rules[j]
        succ = [e for e, c in r.rhs.terms.items() if sum(e) == 1 and e.index(1) > j]
        if len(succ) != 1:
            raise InputError("no-successor", f"rule for {sys.names[j]} has no linear successor")
        (e,) = succ
        k = e.index(1)
        if j not in values:
            raise InputError("bad-base", f"{sys.names[j]} not reachable from the base variables")
        coeff = r.rhs.coeff(e)
        others = r.rhs - SparsePoly.monomial(e, coeff)
        lower = others.substitute([values.get(i, SparsePoly.zero(sys.nvars)) for i in range(sys.nvars)])
        values[k] = (values[j] ** r.power - lower) * (1 / coeff)
    full = [values.get(i, SparsePoly.variable(sys.nvars, i)) for i in range(sys.nvars)]
    return q.substitute(full)


# ------------------------------------------------------------ exzar construction

@dataclass(frozen=True)
class Lead:
    """Initial form coeff·V_level^power in the graded algebra, with V_i = c_i·V_{i+1}^{s_i}."""

    level: int
    power: int
    coeff: Fraction

    def at(self, level: int, s: Sequence[int], c: Sequence) -> "Lead":
        lead = self
        while lead.level < level:
            i = lead.level
            lead = Lead(i + 1, lead.power * s[i - 1], lead.coeff * Fraction(c[i - 1]) ** lead.power)
        return lead

    def value(self, s: Sequence[int]) -> Fraction:
        denom = 1
        for x in s[:self.level - 1]:
            denom *= x
        return Fraction(self.power, denom)

    def power_of(self, n: int) -> "Lead":
        return Lead(self.level, self.power * n, self.coeff ** n)

    def times(self, other: "Lead", s: Sequence[int], c: Sequence) -> "Lead":
        level = max(self.level, other.level)
        a, b = self.at(level, s, c), other.at(level, s, c)
        return Lead(level, a.power + b.power, a.coeff * b.coeff)


def leading_term(f: SparsePoly, s: Sequence[int], c: Sequence, bound: Fraction | None = None) -> Lead:
    """Initial form of f(v_1, v_2) for the valuation with v_i = v_{i+1}^{s_i}(c_i + v_{i+2}).

    Substitutes level by level until the initial form does not cancel.  When
    the value of f is known not to exceed ``bound``, heavier terms are dropped
    along the way (substitution never lowers the weight of a term).
    """
    if f.nvars != 2 or f.is_zero():
        raise InputError("bad-polynomial", "need a nonzero polynomial in two variables")
    level = 1
    unit = Fraction(1)  # value of v_{level}
    while True:
        if level > len(s) or level > len(c):
            raise ComputationError(f"system-too-short({level + 1})", "ran out of s or c entries")
        si, ci = s[level - 1], Fraction(c[level - 1])
        step = unit / si  # value of v_{level+1}
        if bound is not None:
            cap = bound / step
            f = SparsePoly(2, {e: k for e, k in f.terms.items() if e[0] * si + e[1] <= cap})
            if f.is_zero():
                raise ComputationError("value-above-bound", f"value exceeds {bound}")
        weighted = [(e[0] * si + e[1], e, k) for e, k in f.items()]
        low = min(w for w, _, _ in weighted)
        total = sum((k * ci ** e[0] for w, e, k in weighted if w == low), Fraction(0))
        if total != 0:
            return Lead(level + 1, low, total)
        y = SparsePoly.variable(2, 0)
        z = SparsePoly.variable(2, 1)
        f = f.substitute([y ** si * (z + ci), y])
        level += 1
        unit = step


def exzar_coefficients(s: Sequence[int], c: Sequence, count: int) -> list[Fraction]:
    """d_3, ..., d_{count+2}: the constants making u_j^{s_{j-1}} − d_j·u^{ell(j)} gain value."""
    s = [int(x) for x in s]
    c = [Fraction(x) for x in c]
    if count + 1 > len(s) or count + 1 > len(c):
        raise InputError("not-enough-quotients", f"{count} coefficients need {count + 1} s and c entries")
    if any(x == 0 for x in c):
        raise InputError("bad-c", "c entries must be nonzero")
    sg = exzar_semigroup(s, count + 1)
    cc = c + [Fraction(1)] * len(s)
    u1 = SparsePoly.variable(2, 0)
    u2 = SparsePoly.variable(2, 1)
    u = {1: u1, 2: u2, 3: u2 ** s[0] - u1 * (1 / c[0])}
    leads = {2: leading_term(u2, s, cc), 3: leading_term(u[3], s, cc)}
    out = []
    for j in range(3, count + 3):
        rel = minimal_relation(sg, j - 1)
        if any(rel.n_coeffs):
            raise ComputationError("non-unit-cofactor", f"relation for u_{j} has a cofactor")
        lhs = leads[j].power_of(rel.n)
        rhs = Lead(1, 0, Fraction(1))
        for k, e in enumerate(rel.l_coeffs):
            if e:
                rhs = rhs.times(leads[k + 2].power_of(e), s, cc)
        level = max(lhs.level, rhs.level)
        lhs, rhs = lhs.at(level, s, cc), rhs.at(level, s, cc)
        if lhs.power != rhs.power:
            raise ComputationError("relation-weight-mismatch", f"u_{j}")
        d = lhs.coeff / rhs.coeff
        out.append(d)
        if j < count + 2:
            monomial = SparsePoly.constant(2, d)
            for k, e in enumerate(rel.l_coeffs):
                if e:
                    monomial = monomial * u[k + 2] ** e
            u[j + 1] = u[j] ** rel.n - monomial
            expected = sg.generators[j - 1].coeffs[0]
            leads[j + 1] = leading_term(u[j + 1], s, cc, expected)
            if leads[j + 1].value(s) != expected:
                raise ComputationError("recurrence-mismatch", f"value of u_{j + 1}")
    return out


def exzar_system(s: Sequence[int], d: Sequence | None = None, c: Sequence | None = None,
                 sink_weight: bool = True) -> RewriteSystem:
    """Rewrite system on u_2, ..., u_{len(s)+1} plus a sink u_{len(s)+2}.

    The exponents ell(j) come from the minimal relations of the exzar
    semigroup; d defaults to the constants derived from c (default all 1).
    """
    s = [int(x) for x in s]
    if len(s) < 2:
        raise InputError("not-enough-quotients", "need at least s_1 and s_2")
    rules_count = len(s) - 1
    if d is None:
        c = list(c) if c is not None else [1] * len(s)
        d = exzar_coefficients(s, c, rules_count)
    d = [Fraction(x) for x in d]
    if len(d) != rules_count:
        raise InputError("bad-d", f"expected {rules_count} coefficients, got {len(d)}")
    if any(x == 0 for x in d):
        raise InputError("bad-d", "coefficients must be nonzero")
    sg = exzar_semigroup(s, len(s))
    gammas = list(sg.generators)
    # the sink's value is only known to exceed s_K·γ_K
    n = len(s) + 1
    names = [f"u{k + 2}" for k in range(n)]
    weights = gammas + [gammas[-1] * s[-1]]
    rules = []
    for j in range(3, len(s) + 2):
        rel = minimal_relation(sg, j - 1)
        if any(rel.n_coeffs):
            raise ComputationError("non-unit-cofactor", f"relation for u_{j} has a cofactor")
        ell = list(rel.l_coeffs) + [0] * (n - len(rel.l_coeffs))
        succ = [0] * n
        succ[j - 1] = 1
        rhs = SparsePoly(n, {tuple(ell): d[j - 3], tuple(succ): 1})
        rules.append(RewriteRule(j - 2, rel.n, rhs))
    return RewriteSystem(names, weights, rules, sink=n - 1, s=s)


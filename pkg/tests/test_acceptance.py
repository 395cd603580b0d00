"""End-to-end acceptance checks; each test records one PASS/FAIL line."""

import random
import time
from fractions import Fraction
from math import comb, gcd, prod

import pytest
import sympy as sp

from oracles import (convergents, exzar_value, orbit_smoothness, pullback_factor,
                     random_unimodular, saturated_lattices, smith_invariants, sympy_det)
from toricres.abyssal_rewrite import exzar_system, valuate
from toricres.binomial_ideals import (Binomial, BinomialIdeal, jacobian_certificate,
                                      singular_locus, verify_presentation)
from toricres.errors import ComputationError
from toricres.exact_linalg import compound_matrix
from toricres.ordered_groups import (CFReal, exzar_semigroup, minimal_generators,
                                     minimal_relation)
from toricres.perron import perron_run
from toricres.polynomial import SparsePoly
from toricres.resolution import (DeformedEquation, principalize_monomials, resolve,
                                 resolve_monomial_curve, strict_transform_deformed)


def branch_generators(p):
    return [p ** 3, p ** 3 + p ** 2, p ** 4 + p ** 3 + p ** 2 + p, sum(p ** k for k in range(6))]


def as_sympy(poly, names):
    return sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[x ** e for x, e in zip(names, exp)])
               for exp, c in poly.items())


# ---------------------------------------------------------------- 1

def test_artin_schreier_factorization(criterion):
    failures = []
    worst = 0.0
    u, v = sp.symbols("u v")
    for p in (2, 3, 5):
        start = time.perf_counter()
        eq = DeformedEquation(Binomial((0, p), (p - 1, 0)), ((-1, (p - 1, 1)),))
        chart = [[p, p - 1], [1, 1]]
        d = strict_transform_deformed(eq, chart, [p, p - 1])
        worst = max(worst, time.perf_counter() - start)
        e, strict, (y1, y2) = pullback_factor(v ** p - u ** (p - 1) * (1 + v), (u, v), chart)
        expected = y2 - 1 - y1 ** (p - 1) * y2
        ok = (tuple(e) == d.transform.exceptional_exponent == (p * (p - 1), p - 1)
              and sp.expand(strict - expected) == 0
              and sp.expand(as_sympy(d.transform.strict, (y1, y2)) * d.transform.scale
                            - expected) == 0)
        if not ok:
            failures.append(p)
    criterion(1, not failures and worst < 1.0,
              f"Artin-Schreier factorization exact for p in (2,3,5); failures={failures}, "
              f"max time {worst:.3f}s (< 1 s)")


# ---------------------------------------------------------------- 2

@pytest.mark.parametrize("p", [2, 3])
def test_branch_equations(criterion, p):
    start = time.perf_counter()
    report = resolve_monomial_curve(branch_generators(p), max_dim=4, with_transforms=False)
    elapsed = time.perf_counter() - start
    expected = [Binomial((0, p, 0, 0), (p + 1, 0, 0, 0)),
                Binomial((0, 0, p, 0), (p * (p + 1), 1, 0, 0)),
                Binomial((0, 0, 0, p), (0, p ** 3, 1, 0))]
    equations_ok = list(report.equations) == expected
    certs = [c.certificate for c in report.resolution.charts]
    certs_ok = all(c.rank_over_Q == 3 and c.minors_gcd == 1 for c in certs)
    time_ok = elapsed < 30 if p == 2 else True
    text = ", ".join(b.format() for b in report.equations)
    criterion(2, equations_ok and certs_ok and time_ok,
              f"p={p}: equations [{text}] exact={equations_ok}; {len(certs)} charts all rank 3 "
              f"gcd 1={certs_ok}; {elapsed:.1f}s" + (" (< 30 s)" if p == 2 else ""))


# ---------------------------------------------------------------- 3

def test_cusp_pipeline(criterion):
    start = time.perf_counter()
    report = resolve_monomial_curve([2, 3])
    elapsed = time.perf_counter() - start
    rays = set(report.resolution.fan.rays())
    center = report.resolution.center
    strict = [t.strict.format() for t in center.transforms]
    cert = center.certificate
    ok = (rays == {(1, 0), (1, 1), (2, 3), (1, 2), (0, 1)}
          and report.center.rays == ((1, 1), (2, 3)) and strict == ["y1 - 1"]
          and (cert.rank_over_Q, cert.minors_gcd) == (1, 1) and elapsed < 1.0)
    criterion(3, ok, f"cusp rays {sorted(rays)}, center {report.center.rays}, strict {strict}, "
                     f"certificate ({cert.rank_over_Q},{cert.minors_gcd}), {elapsed:.3f}s (< 1 s)")


# ---------------------------------------------------------------- 4

def test_perron_invariants(criterion):
    rng = random.Random(2024)
    steps = 12
    failures = 0
    for _ in range(100):
        prefix = tuple(rng.randint(1, 9) for _ in range(rng.randint(1, 12)))
        tail = tuple(rng.randint(1, 9) for _ in range(rng.randint(1, 3)))
        tau = CFReal(prefix, "periodic", tail)
        run = perron_run([tau, 1], steps)
        vecs = [list(v) for v in run.vectors]
        m = 2
        for h in range(steps):
            window = vecs[h:h + m]
            if sympy_det(window) != (-1) ** (h * (m - 1)):
                failures += 1
            coords = sp.Matrix(vecs[h + 1:h + 1 + m]) * sp.Matrix(window).inv()
            if any(x < 0 for x in coords):
                failures += 1
        terms = [tau.term(i) for i in range(len(vecs) - 3)]
        if [tuple(v) for v in vecs[3:]] != convergents(terms):
            failures += 1
    exact = perron_run([CFReal((1, 2, 3), "arithmetic", start=4, step=1), 1], 5).vectors[3:]
    exact_ok = exact == ((1, 1), (3, 2), (10, 7), (43, 30))
    criterion(4, failures == 0 and exact_ok,
              f"100 random CF prefixes x {steps} steps: {failures} determinant/nesting/convergent "
              f"failures; vectors for [1;2,3,...] = {list(exact)}")


# ---------------------------------------------------------------- 5

def test_sylvester_franke(criterion):
    rng = random.Random(5)
    failures = 0
    checks = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        M = random_unimodular(n, rng)
        d = sympy_det(M)
        for k in range(1, n + 1):
            checks += 1
            if sympy_det(compound_matrix(M, k)) != d ** comb(n - 1, k - 1):
                failures += 1
    criterion(5, failures == 0,
              f"200 unimodular matrices, {checks} (N,k) cases: {failures} mismatches")


# ---------------------------------------------------------------- 6

S6 = (2, 2, 2, 2)


def recurrence_holds(values, s):
    return all(values[i + 1] == s[i] * values[i] + Fraction(1, prod(s[:i + 2]))
               for i in range(len(values) - 1))


@pytest.mark.xfail(strict=True, reason="the stated fourth generator 89/16 is inconsistent "
                                       "with the stated recurrence, which gives 85/16")
def test_exzar_generators_as_stated(criterion):
    stated = [Fraction(1, 2), Fraction(5, 4), Fraction(21, 8), Fraction(89, 16)]
    criterion(6, recurrence_holds(stated, S6),
              "stated generators (1/2, 5/4, 21/8, 89/16) satisfy the recurrence "
              "(2*21/8 + 1/16 = 85/16)")


def random_poly_u2_u3(rng, nvars, max_deg=6):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        a = rng.randint(0, max_deg)
        b = rng.randint(0, max_deg - a)
        if a + b == 0:
            a = 1
        terms[(a, b) + (0,) * (nvars - 2)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return SparsePoly(nvars, terms)


def test_exzar_generators_and_valuation(criterion):
    gens = [g.coeffs[0] for g in exzar_semigroup(list(S6), 4).generators]
    gens_ok = gens == [Fraction(1, 2), Fraction(5, 4), Fraction(21, 8), Fraction(85, 16)]
    system = exzar_system(list(S6))
    v1, v2 = sp.symbols("v1 v2")
    rng = random.Random(66)
    mismatches = 0
    for _ in range(50):
        p = random_poly_u2_u3(rng, system.nvars)
        expr = sum(sp.Rational(c.numerator, c.denominator) * v2 ** e[0] * (v2 ** 2 - v1) ** e[1]
                   for e, c in p.items())
        expected = exzar_value(expr, v1, v2, [2] * 12, [1] * 12)
        try:
            got = valuate(p, system).coeffs[0]
        except ComputationError:
            got = None
        if got != expected:
            mismatches += 1
    criterion(6, gens_ok and recurrence_holds(gens, S6) and mismatches == 0,
              f"generators {[str(g) for g in gens]} satisfy the recurrence; valuate vs "
              f"substitution oracle on 50 polynomials: {mismatches} mismatches")


# ---------------------------------------------------------------- 7

def test_principalization(criterion):
    rng = random.Random(7)
    failures = 0
    done = 0
    while done < 50:
        n = rng.randint(1, 4)
        count = rng.randint(1, 5)
        mons = list({tuple(rng.randint(0, 6) for _ in range(n)) for _ in range(count)})
        weights = [Fraction(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(n)]
        values = [sum(w * e for w, e in zip(weights, m)) for m in mons]
        if values.count(min(values)) > 1:
            continue
        done += 1
        least = values.index(min(values))
        res = principalize_monomials(mons, weights)
        rays = res.cone.rays
        if abs(sympy_det(rays)) != 1:
            failures += 1
            continue
        images = [[sum(a * e for a, e in zip(ray, m)) for ray in rays] for m in mons]
        if not all(all(x <= y for x, y in zip(images[least], img)) for img in images):
            failures += 1
    criterion(7, failures == 0, f"50 random monomial families: {failures} charts where the "
                                f"least-weight monomial does not divide the others")


# ---------------------------------------------------------------- 8

def relation_ideal(sg, degrees):
    N = len(sg.generators)
    bins = []
    for i in range(2, N + 1):
        m, n = minimal_relation(sg, i).binomial_exponents(N)
        bins.append(Binomial(m, n))
    return BinomialIdeal(N, tuple(bins), tuple((d,) for d in degrees))


def test_presentation_verification(criterion):
    rng = random.Random(8)
    rejected = []
    tried = 0
    while tried < 40:
        values = rng.sample(range(2, 60), rng.randint(2, 5))
        if gcd(*values) != 1:
            continue
        sg = minimal_generators(values)
        if len(sg.generators) < 2:
            continue
        tried += 1
        gens = [int(g.coeffs[0]) for g in sg.generators]
        if not verify_presentation(relation_ideal(sg, gens)).ok:
            rejected.append(gens)
    for _ in range(10):
        s = [rng.randint(2, 4) for _ in range(rng.randint(2, 4))]
        sg = exzar_semigroup(s, len(s))
        scale = prod(s)
        gens = [int(g.coeffs[0] * scale) for g in sg.generators]
        tried += 1
        if not verify_presentation(relation_ideal(sg, gens)).ok:
            rejected.append(s)
    planted = BinomialIdeal(2, (Binomial((2, 0), (0, 2), 2), Binomial((4, 0), (0, 4), 5)))
    cert = verify_presentation(planted)
    planted_rejected = not cert.ok and not cert.lambda_compatible
    criterion(8, not rejected and planted_rejected,
              f"{tried} minimal-relation ideals, {len(rejected)} wrongly rejected; planted "
              f"family rejected as lambda-incompatible={planted_rejected}")


# ---------------------------------------------------------------- 9

def test_orbit_smoothness_oracle(criterion):
    total = 0
    disagreements = []
    for N, rows in saturated_lattices(max_vars=4, bound=3):
        total += 1
        ideal = BinomialIdeal(N, tuple(Binomial(tuple(max(x, 0) for x in r),
                                                tuple(max(-x, 0) for x in r)) for r in rows))
        lib = {o.nonzero_vars: o.smooth for o in singular_locus(ideal).orbits}
        if lib != orbit_smoothness(rows, N):
            disagreements.append(rows)
    criterion(9, not disagreements and total > 0,
              f"{total} saturated lattices (N <= 4, entries <= 3): "
              f"{len(disagreements)} disagreements")


# ---------------------------------------------------------------- 10

def test_chart_change_invariance(criterion):
    report = resolve_monomial_curve(branch_generators(2), max_dim=4, with_transforms=False)
    ideal = BinomialIdeal(4, report.equations)
    base = jacobian_certificate(ideal).minors_gcd
    diffs = sp.Matrix([list(b.difference()) for b in ideal.binomials]).T
    rng = random.Random(10)
    changed = 0
    for _ in range(100):
        U = random_unimodular(4, rng)
        lib = jacobian_certificate(ideal, U).minors_gcd
        oracle = prod(smith_invariants((sp.Matrix(U) * diffs).tolist()))
        if lib != base or oracle != base:
            changed += 1
    criterion(10, changed == 0, f"branch p=2 minors gcd {base}; {changed} of 100 random "
                                f"unimodular chart changes differ")


def test_resolve_of_branch_ideal_is_consistent():
    ideal = BinomialIdeal(4, tuple(resolve_monomial_curve(branch_generators(2), max_dim=4,
                                                          with_transforms=False).equations))
    assert resolve(ideal, max_dim=4, with_transforms=False).all_certified

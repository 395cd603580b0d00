"""Ordered value groups, continued-fraction reals and value semigroups."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from typing import Iterator, Sequence

from .errors import ComputationError, InputError
from .exact_linalg import in_lattice, rank

DEFAULT_CF_DEPTH = 64
DEFAULT_SEARCH_BOUND = 4096


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


# ---------------------------------------------------------------- CF reals

TAIL_KINDS = ("terminated", "periodic", "arithmetic", "explicit")


@dataclass(frozen=True)
class CFReal:
    """A nonnegative real given by partial quotients [c_0; c_1, c_2, ...].

    ``tail`` says how terms continue past ``prefix``: ``terminated`` (the
    number is the rational [prefix]), ``periodic`` (repeat ``period``),
    ``arithmetic`` (start, start+step, ...) or ``explicit`` (unknown; asking
    for more terms raises ``cf-exhausted``).
    """

    prefix: tuple[int, ...]
    tail: str = "terminated"
    period: tuple[int, ...] = ()
    start: int = 0
    step: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(c) for c in self.prefix))
        object.__setattr__(self, "period", tuple(int(c) for c in self.period))
        if self.tail not in TAIL_KINDS:
            raise InputError("bad-cf-tail", f"unknown tail kind {self.tail!r}")
        if not self.prefix and self.tail in ("terminated", "explicit"):
            raise InputError("bad-cf", "empty prefix")
        if self.prefix and self.prefix[0] < 0:
            raise InputError("bad-cf", "leading partial quotient must be >= 0")
        if any(c < 1 for c in self.prefix[1:]):
            raise InputError("bad-cf", "partial quotients after the first must be >= 1")
        if self.tail == "periodic" and (not self.period or min(self.period) < 1):
            raise InputError("bad-cf", "periodic tail needs positive terms")
        if self.tail == "arithmetic" and (self.start < 1 or self.step < 0):
            raise InputError("bad-cf", "arithmetic tail needs start >= 1 and step >= 0")

    @classmethod
    def from_fraction(cls, q) -> "CFReal":
        q = Fraction(q)
        if q < 0:
            raise InputError("bad-cf", "only nonnegative reals are represented")
        terms = []
        while True:
            a = q.numerator // q.denominator
            terms.append(a)
            q -= a
            if q == 0:
                break
            q = 1 / q
        return cls(tuple(terms))

    @property
    def is_rational(self) -> bool:
        return self.tail == "terminated"

    def term(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        k = i - len(self.prefix)
        if self.tail == "periodic":
            return self.period[k % len(self.period)]
        if self.tail == "arithmetic":
            return self.start + k * self.step
        raise ComputationError("cf-exhausted", f"partial quotient {i} is not available")

    def available_terms(self) -> int | None:
        """Number of known terms, or None when the tail is infinite and known."""
        return len(self.prefix) if self.tail in ("terminated", "explicit") else None

    def value(self) -> Fraction:
        if not self.is_rational:
            raise InputError("irrational-value", "exact value exists only for terminated expansions")
        p, q = self.convergents(len(self.prefix))[-1]
        return Fraction(p, q)

    def convergents(self, h: int) -> list[tuple[int, int]]:
        """Convergents (p_i, q_i), i = 1..h, with p_0 = 1, q_0 = 0, p_1 = c_0, q_1 = 1."""
        if h < 1:
            raise InputError("bad-depth", "h must be at least 1")
        out = []
        pm, qm, p, q = 0, 1, 1, 0
        for i in range(h):
            s = self.term(i)
            pm, qm, p, q = p, q, pm + s * p, qm + s * q
            out.append((p, q))
        return out

    def bracket(self, depth: int) -> tuple[Fraction, Fraction]:
        """A closed interval containing the number, from two consecutive convergents."""
        known = self.available_terms()
        if self.is_rational:
            v = self.value()
            return v, v
        if known is not None and depth + 1 > known:
            depth = known - 1
            if depth < 1:
                raise ComputationError("cf-exhausted", "prefix too short to bracket the value")
        conv = self.convergents(depth + 1)
        a = Fraction(*conv[-2])
        b = Fraction(*conv[-1])
        return (a, b) if a <= b else (b, a)

    def to_json(self) -> dict:
        tail: dict = {"kind": self.tail}
        if self.tail == "periodic":
            tail["period"] = list(self.period)
        elif self.tail == "arithmetic":
            tail.update(start=self.start, step=self.step)
        return {"prefix": list(self.prefix), "tail": tail}

    @classmethod
    def from_json(cls, obj: dict) -> "CFReal":
        tail = obj.get("tail", {"kind": "terminated"})
        kind = tail.get("kind", "terminated")
        return cls(tuple(obj["prefix"]), kind, tuple(tail.get("period", ())),
                   int(tail.get("start", 0)), int(tail.get("step", 0)))


def cf_convergents(x: CFReal, h: int) -> list[tuple[int, int]]:
    return x.convergents(h)


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class OrderSpec:
    """Which ordered group an element lives in.

    ``lex``: Z^d (or Q^d) ordered lexicographically.  ``rational``: Q.
    ``weighted``: the subgroup of R spanned by ``weights``, which are
    declared rationally independent.
    """

    kind: str
    dim: int = 1
    weights: tuple[CFReal, ...] = ()
    cf_depth: int = DEFAULT_CF_DEPTH

    def __post_init__(self):
        if self.kind not in ("lex", "rational", "weighted"):
            raise InputError("bad-order", f"unknown order kind {self.kind!r}")
        if self.kind == "weighted":
            object.__setattr__(self, "weights", tuple(self.weights))
            object.__setattr__(self, "dim", len(self.weights))
            if not self.weights:
                raise InputError("bad-order", "weighted line needs at least one weight")
        if self.kind == "rational":
            object.__setattr__(self, "dim", 1)
        if self.dim < 1:
            raise InputError("bad-order", "dimension must be >= 1")

    @property
    def rank(self) -> int:
        return self.dim


def LexZ(d: int) -> OrderSpec:
    return OrderSpec("lex", d)


def RationalLine() -> OrderSpec:
    return OrderSpec("rational", 1)


def WeightedLine(weights: Sequence[CFReal], cf_depth: int = DEFAULT_CF_DEPTH) -> OrderSpec:
    return OrderSpec("weighted", len(weights), tuple(weights), cf_depth)


@dataclass(frozen=True)
class GroupElement:
    coeffs: tuple[Fraction, ...]
    spec: OrderSpec = field(default_factory=RationalLine)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if len(self.coeffs) != self.spec.rank:
            raise InputError("rank-mismatch",
                             f"{len(self.coeffs)} coefficients for a rank-{self.spec.rank} group")

    @classmethod
    def zero(cls, spec: OrderSpec) -> "GroupElement":
        return cls((0,) * spec.rank, spec)

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.spec != self.spec:
            raise InputError("order-mismatch", "elements belong to different ordered groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.spec)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.spec)

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a for a in self.coeffs), self.spec)

    def __mul__(self, k) -> "GroupElement":
        if isinstance(k, GroupElement):
            return NotImplemented
        k = Fraction(k)
        return GroupElement(tuple(k * a for a in self.coeffs), self.spec)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.spec.kind == "lex":
            return next(1 if c > 0 else -1 for c in self.coeffs if c)
        if self.spec.kind == "rational":
            return 1 if self.coeffs[0] > 0 else -1
        return _weighted_sign(self.coeffs, self.spec)

    def interval(self, depth: int) -> tuple[Fraction, Fraction]:
        """Closed real interval containing the element (rank-one orders only)."""
        if self.spec.kind == "rational":
            return self.coeffs[0], self.coeffs[0]
        if self.spec.kind == "lex":
            raise InputError("no-real-value", "lexicographic elements have no real value")
        lo = hi = Fraction(0)
        for a, w in zip(self.coeffs, self.spec.weights):
            if a == 0:
                continue
            wl, wh = w.bracket(depth)
            if a > 0:
                lo += a * wl
                hi += a * wh
            else:
                lo += a * wh
                hi += a * wl
        return lo, hi

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_json(self) -> dict:
        out = {"coeffs": [str(c) for c in self.coeffs], "order": self.spec.kind}
        if self.spec.kind == "weighted":
            out["weights"] = [w.to_json() for w in self.spec.weights]
        return out

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"GroupElement<{self.spec.kind}>({body})"


def _weighted_sign(coeffs: Sequence[Fraction], spec: OrderSpec) -> int:
    terms = [(a, w) for a, w in zip(coeffs, spec.weights) if a]
    exact = sum((a * w.value() for a, w in terms if w.is_rational), Fraction(0))
    inexact = [(a, w) for a, w in terms if not w.is_rational]
    if not inexact:
        if exact == 0:
            raise ComputationError("independence-violation-suspected",
                                   "a nonzero combination of the weights vanishes exactly")
        return 1 if exact > 0 else -1
    depth = 2
    while True:
        depth = min(depth, spec.cf_depth)
        lo = hi = exact
        for a, w in inexact:
            wl, wh = w.bracket(depth)
            lo += a * (wl if a > 0 else wh)
            hi += a * (wh if a > 0 else wl)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if depth >= spec.cf_depth:
            raise ComputationError("independence-violation-suspected",
                                   f"sign undecided after {spec.cf_depth} partial quotients")
        depth *= 2


def compare(a: GroupElement, b: GroupElement) -> Ordering:
    s = (a - b).sign()
    return Ordering.LESS if s < 0 else Ordering.GREATER if s > 0 else Ordering.EQUAL


def rational(q) -> GroupElement:
    return GroupElement((Fraction(q),), RationalLine())


def as_element(x, spec: OrderSpec | None = None) -> GroupElement:
    """Coerce ints/Fractions/strings to rational-line elements; pass elements through."""
    if isinstance(x, GroupElement):
        return x
    if isinstance(x, bool):
        raise InputError("bad-value", "booleans are not group elements")
    if spec is not None and spec.kind == "lex" and isinstance(x, (tuple, list)):
        return GroupElement(tuple(x), spec)
    return rational(Fraction(x))


def group_element_from_json(obj: dict, cf_depth: int = DEFAULT_CF_DEPTH) -> GroupElement:
    order = obj.get("order", "rational")
    coeffs = tuple(Fraction(c) for c in obj["coeffs"])
    if order == "lex":
        spec = LexZ(len(coeffs))
    elif order == "rational":
        spec = RationalLine()
    elif order == "weighted":
        if "weights" not in obj:
            raise InputError("missing-weights", "weighted elements need a 'weights' list")
        spec = WeightedLine([CFReal.from_json(w) for w in obj["weights"]], cf_depth)
    else:
        raise InputError("bad-order", f"unknown order {order!r}")
    return GroupElement(coeffs, spec)


# ---------------------------------------------------------------- semigroups

@dataclass(frozen=True)
class ValueSemigroup:
    generators: tuple[GroupElement, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise InputError("empty-semigroup", "a semigroup needs generators")
        spec = gens[0].spec
        for g in gens:
            if g.spec != spec:
                raise InputError("order-mismatch", "generators live in different groups")
            if g.sign() <= 0:
                raise InputError("nonpositive-generator", f"{g!r} is not positive")
        for a, b in zip(gens, gens[1:]):
            if not a < b:
                raise InputError("not-increasing", "generators must be strictly increasing")

    @property
    def spec(self) -> OrderSpec:
        return self.generators[0].spec

    def __len__(self) -> int:
        return len(self.generators)

    def contains(self, x: GroupElement, bound: int = DEFAULT_SEARCH_BOUND) -> bool:
        if x.is_zero():
            return True
        return next(representations(x, self.generators, bound), None) is not None


def _is_rank_one_rational(gens: Sequence[GroupElement]) -> bool:
    return gens[0].spec.kind == "rational"


def representations(target: GroupElement, gens: Sequence[GroupElement],
                    bound: int = DEFAULT_SEARCH_BOUND,
                    excluded: frozenset[int] = frozenset()) -> Iterator[tuple[int, ...]]:
    """All nonnegative coefficient vectors c with Σ c_k·gens[k] = target, c_k <= bound.

    Generators must be positive.  Indices in ``excluded`` get coefficient 0.
    """
    gens = list(gens)
    if not gens:
        if target.is_zero():
            yield ()
        return
    if target.sign() < 0:
        return
    if _is_rank_one_rational(gens):
        yield from _reps_scalar(target.coeffs[0], [g.coeffs[0] for g in gens], bound, excluded)
    else:
        yield from _reps_general(target, gens, bound, excluded)


def _reps_scalar(target: Fraction, gens: list[Fraction], bound: int,
                 excluded: frozenset[int]) -> Iterator[tuple[int, ...]]:
    def rec(idx: int, remaining: Fraction, acc: tuple[int, ...]):
        if idx == 0:
            if 0 in excluded:
                if remaining == 0:
                    yield (0,) + acc
                return
            q = remaining / gens[0]
            if q.denominator == 1 and 0 <= q <= bound:
                yield (int(q),) + acc
            return
        if idx in excluded:
            yield from rec(idx - 1, remaining, (0,) + acc)
            return
        c = 0
        g = gens[idx]
        while c <= bound and remaining >= 0:
            yield from rec(idx - 1, remaining, (c,) + acc)
            c += 1
            remaining -= g

    yield from rec(len(gens) - 1, Fraction(target), ())


def _reps_general(target: GroupElement, gens: list[GroupElement], bound: int,
                  excluded: frozenset[int]) -> Iterator[tuple[int, ...]]:
    def exact_multiple(remaining: GroupElement, g: GroupElement) -> int | None:
        j = next(k for k, c in enumerate(g.coeffs) if c)
        q = remaining.coeffs[j] / g.coeffs[j]
        if q.denominator != 1 or q < 0 or q > bound:
            return None
        return int(q) if (remaining - g * q).is_zero() else None

    def rec(idx: int, remaining: GroupElement, acc: tuple[int, ...]):
        if idx == 0:
            if 0 in excluded:
                if remaining.is_zero():
                    yield (0,) + acc
                return
            q = exact_multiple(remaining, gens[0])
            if q is not None:
                yield (q,) + acc
            return
        if idx in excluded:
            yield from rec(idx - 1, remaining, (0,) + acc)
            return
        c = 0
        g = gens[idx]
        while c <= bound and remaining.sign() >= 0:
            yield from rec(idx - 1, remaining, (c,) + acc)
            c += 1
            remaining = remaining - g

    yield from rec(len(gens) - 1, target, ())


def sort_elements(values: Sequence[GroupElement]) -> list[GroupElement]:
    return sorted(values, key=cmp_to_key(lambda a, b: (a - b).sign()))


def minimal_generators(values: Sequence, bound: int = DEFAULT_SEARCH_BOUND) -> ValueSemigroup:
    """The unique minimal generating subset of the semigroup spanned by ``values``."""
    elems = [as_element(v) for v in values]
    if not elems:
        raise InputError("empty-semigroup", "no values given")
    for e in elems:
        if e.sign() <= 0:
            raise InputError("nonpositive-generator", f"{e!r} is not positive")
    gens: list[GroupElement] = []
    for v in sort_elements(elems):
        if gens and v == gens[-1]:
            continue
        if not gens or next(representations(v, gens, bound), None) is None:
            gens.append(v)
    return ValueSemigroup(tuple(gens))


@dataclass(frozen=True)
class Relation:
    """n·γ_i + Σ n_k γ_k = Σ ℓ_k γ_k over the generators before γ_i (1-based i)."""

    index: int
    n: int
    n_coeffs: tuple[int, ...]
    l_coeffs: tuple[int, ...]

    def binomial_exponents(self, num_vars: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(m, n) exponent vectors of U^m − U^n, variables U_0..U_{N-1}."""
        m = list(self.n_coeffs) + [self.n] + [0] * (num_vars - self.index)
        n = list(self.l_coeffs) + [0] * (num_vars - self.index + 1)
        return tuple(m), tuple(n)


def _integer_coords(elems: Sequence[GroupElement]) -> list[list[int]]:
    den = 1
    for e in elems:
        for c in e.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
    return [[int(c * den) for c in e.coeffs] for e in elems]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _relation_key(l_coeffs: tuple[int, ...]):
    # Prefer the smallest positive power of the immediately preceding
    # generator, then the fewest terms, then lexicographic order.
    top = l_coeffs[-1]
    return (top == 0, top, sum(1 for c in l_coeffs if c), l_coeffs)


def minimal_relation(semigroup: ValueSemigroup, i: int,
                     search_bound: int = DEFAULT_SEARCH_BOUND,
                     max_extra_degree: int = 64) -> Relation:
    """Minimal relation expressing a multiple of γ_i through earlier generators.

    n is the least positive integer with n·γ_i in the group spanned by
    γ_1..γ_{i-1}.  Relations with nothing added on the left are preferred;
    otherwise the left addend of least total degree is used.
    """
    gens = semigroup.generators
    if not 2 <= i <= len(gens):
        raise InputError("index-out-of-range", f"i={i} for {len(gens)} generators")
    earlier, g = list(gens[: i - 1]), gens[i - 1]
    coords = _integer_coords(list(earlier) + [g])
    if rank(coords[:-1]) != rank(coords):
        raise InputError("not-rationally-dependent",
                         f"generator {i} is rationally independent of the earlier ones")
    n = next((k for k in range(1, search_bound + 1)
              if in_lattice([k * x for x in coords[-1]], coords[:-1])), None)
    if n is None:
        raise ComputationError(f"relation-not-found({search_bound})", f"generator {i}")
    target = g * n
    found = list(representations(target, earlier, search_bound))
    if found:
        return Relation(i, n, (0,) * (i - 1), min(found, key=_relation_key))
    for degree in range(1, max_extra_degree + 1):
        best = None
        for extra in _compositions(degree, i - 1):
            lhs = target
            for c, e in zip(extra, earlier):
                lhs = lhs + e * c
            support = frozenset(k for k, c in enumerate(extra) if c)
            for ell in representations(lhs, earlier, search_bound, excluded=support):
                key = (extra, _relation_key(ell))
                if best is None or key < best[0]:
                    best = (key, extra, ell)
        if best is not None:
            return Relation(i, n, best[1], best[2])
    raise ComputationError(f"relation-not-found({search_bound})", f"generator {i}")


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for combo in product(range(total + 1), repeat=parts):
        if sum(combo) == total:
            yield combo


def exzar_semigroup(s: Sequence[int], count: int) -> ValueSemigroup:
    """γ_1 = 1/s_1 and γ_{i+1} = s_i·γ_i + 1/(s_1···s_{i+1})."""
    s = [int(x) for x in s]
    if count < 1 or count > len(s):
        raise InputError("not-enough-quotients", f"count={count} needs that many s entries")
    if s[0] < 1 or any(x < 2 for x in s[1:]):
        raise InputError("bad-s", "need s_1 >= 1 and s_i >= 2 for i >= 2")
    gammas = [Fraction(1, s[0])]
    prod = s[0]
    for k in range(1, count):
        prod *= s[k]
        gammas.append(s[k - 1] * gammas[-1] + Fraction(1, prod))
    return ValueSemigroup(tuple(rational(g) for g in gammas))

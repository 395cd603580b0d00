"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InputError

Exponent = tuple[int, ...]


class SparsePoly:
    """Immutable map from exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        self.nvars = int(nvars)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise InputError("arity-mismatch", f"exponent {e} for {self.nvars} variables")
            if any(x < 0 for x in e):
                raise InputError("negative-exponent", f"exponent {e}")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._hash = None

    # construction
    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1) -> "SparsePoly":
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    # access
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order (total degree, then exponent tuple)."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def coeff(self, exponent: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def min_exponent(self) -> Exponent:
        """Componentwise minimum exponent (the largest monomial factor)."""
        if not self._terms:
            raise InputError("zero-polynomial", "zero has no monomial content")
        es = list(self._terms)
        return tuple(min(e[j] for e in es) for j in range(self.nvars))

    # arithmetic
    def _same(self, other: "SparsePoly"):
        if other.nvars != self.nvars:
            raise InputError("arity-mismatch", "polynomials in different rings")

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._same(other)
            return other
        return SparsePoly.constant(self.nvars, Fraction(other))

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SparsePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            k = Fraction(other)
            return SparsePoly(self.nvars, {e: k * c for e, c in self._terms.items()})
        self._same(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise InputError("negative-power", "polynomials have no negative powers")
        out = SparsePoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # monomial operations
    def shift(self, exponent: Sequence[int]) -> "SparsePoly":
        """Multiply by the monomial with the given exponent."""
        return SparsePoly(self.nvars, {tuple(a + b for a, b in zip(e, exponent)): c
                                       for e, c in self._terms.items()})

    def divide_monomial(self, exponent: Sequence[int]) -> "SparsePoly":
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exponent))
            if any(x < 0 for x in q):
                raise InputError("not-divisible", f"monomial {tuple(exponent)} does not divide {e}")
            out[q] = c
        return SparsePoly(self.nvars, out)

    def pullback(self, chart: Sequence[Sequence[int]]) -> "SparsePoly":
        """Substitute U_i = Π_j Y_j^{chart[j][i]}; exponent e maps to chart·e."""
        k = len(chart)
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            f = tuple(sum(row[i] * e[i] for i in range(self.nvars)) for row in chart)
            out[f] = out.get(f, Fraction(0)) + c
        return SparsePoly(k, out)

    def substitute(self, values: Sequence["SparsePoly"]) -> "SparsePoly":
        """Replace variable i by values[i] (all in a common ring)."""
        if len(values) != self.nvars:
            raise InputError("arity-mismatch", "one value per variable required")
        n = values[0].nvars if values else 0
        out = SparsePoly.zero(n)
        cache: dict[tuple[int, int], SparsePoly] = {}
        for e, c in self._terms.items():
            t = SparsePoly.constant(n, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = values[i] ** k
                    t = t * cache[key]
            out = out + t
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def derivative(self, i: int) -> "SparsePoly":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return SparsePoly(self.nvars, out)

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    # output
    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coeff": str(c)} for e, c in self.items()]

    @classmethod
    def from_json(cls, nvars: int, records: Iterable[dict]) -> "SparsePoly":
        return cls(nvars, [(r["exp"], Fraction(str(r["coeff"]))) for r in records])

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"y{j + 1}" for j in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self.items()):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"SparsePoly({self.format()})"

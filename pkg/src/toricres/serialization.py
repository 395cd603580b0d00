"""JSON input/output shared by the command line tool."""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from typing import Any

from .binomial_ideals import Binomial, BinomialIdeal
from .errors import InputError
from .ordered_groups import CFReal
from .polynomial import SparsePoly
from .resolution import DeformedEquation

SCHEMA_VERSION = "1"


def dumps(payload: dict) -> str:
    """Deterministic, newline-terminated JSON with a schema version."""
    body = dict(payload)
    body["schema_version"] = SCHEMA_VERSION
    return json.dumps(body, sort_keys=True, ensure_ascii=False, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (tuple, frozenset, set)):
        return list(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def load_json_arg(text: str) -> Any:
    """Parse ``text`` as a path to a JSON file, or else as inline JSON."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError("bad-json", f"{exc.msg} at line {exc.lineno} column {exc.colno}") from exc


def require(obj: Any, key: str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError("missing-field", f"expected field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError("bad-field", f"field {key!r} has the wrong type")
    return value


def fraction(x) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("bad-number", f"cannot read {x!r} as a rational") from exc


def int_list(obj, what: str = "list") -> list[int]:
    if isinstance(obj, str):
        obj = load_json_arg(obj if obj.strip().startswith("[") else f"[{obj}]")
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise InputError("bad-field", f"{what} must be a list of integers")
    return obj


# ---------------------------------------------------------------- continued fractions

_CF = re.compile(r"^\[\s*(\d+)\s*(?:;\s*(.*?))?\s*\]$")


def parse_cf(text: str) -> CFReal:
    """Read a real number.

    Accepted forms: a rational ``"3/2"``; a finite expansion ``"[1;2,3]"``;
    a periodic tail in parentheses ``"[1;(2)]"`` or ``"[1;2,(1,4)]"``; an
    arithmetic tail continued from the last two terms ``"[1;2,3,...]"``.
    """
    text = text.strip()
    if not text.startswith("["):
        return CFReal.from_fraction(fraction(text))
    m = _CF.match(text)
    if not m:
        raise InputError("bad-cf", f"cannot parse continued fraction {text!r}")
    head = int(m.group(1))
    rest = (m.group(2) or "").strip()
    period: list[int] = []
    if "(" in rest:
        before, _, after = rest.partition("(")
        if not after.endswith(")"):
            raise InputError("bad-cf", f"unbalanced period in {text!r}")
        period = [int(x) for x in after[:-1].split(",") if x.strip()]
        rest = before.rstrip().rstrip(",")
    ellipsis = rest.endswith("...")
    if ellipsis:
        rest = rest[:-3].rstrip().rstrip(",")
    try:
        terms = [int(x) for x in rest.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError("bad-cf", f"cannot parse continued fraction {text!r}") from exc
    prefix = (head, *terms)
    if period:
        return CFReal(prefix, "periodic", tuple(period))
    if ellipsis:
        if len(terms) < 2:
            raise InputError("bad-cf", "an arithmetic tail needs two terms after ';'")
        step = terms[-1] - terms[-2]
        return CFReal(prefix, "arithmetic", start=terms[-1] + step, step=step)
    return CFReal(prefix)


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not inside brackets or parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_tau(text: str) -> list[CFReal]:
    return [parse_cf(p) for p in split_top_level(text)]


# ---------------------------------------------------------------- domain objects

def binomial_from_json(obj) -> Binomial:
    try:
        return Binomial.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad-binomial", str(exc)) from exc


def ideal_from_json(obj) -> BinomialIdeal:
    if not isinstance(obj, dict) or "binomials" not in obj:
        raise InputError("bad-ideal", "an ideal needs 'vars' and 'binomials'")
    try:
        return BinomialIdeal.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("bad-ideal", str(exc)) from exc


def polynomial_from_json(nvars: int, records) -> SparsePoly:
    if not isinstance(records, list):
        raise InputError("bad-polynomial", "a polynomial is a list of {exp, coeff} records")
    padded = []
    for r in records:
        if not isinstance(r, dict) or "exp" not in r:
            raise InputError("bad-polynomial", "each term needs 'exp' and 'coeff'")
        exp = list(r["exp"])
        if len(exp) > nvars:
            raise InputError("arity-mismatch", f"exponent {exp} has more than {nvars} entries")
        padded.append({"exp": exp + [0] * (nvars - len(exp)), "coeff": r.get("coeff", 1)})
    return SparsePoly.from_json(nvars, padded)


def deformed_from_json(obj) -> DeformedEquation:
    if isinstance(obj, dict) and "binomial" in obj:
        try:
            return DeformedEquation.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("bad-equation", str(exc)) from exc
    return DeformedEquation(binomial_from_json(obj))


def tails_from_json(obj) -> dict:
    """{"0": {"terms": [{"coeff": .., "exp": [..]}], "linear_var": 2}} -> resolution tails."""
    if not isinstance(obj, dict):
        raise InputError("bad-tails", "tails must map equation indices to tail records")
    out = {}
    for key, rec in obj.items():
        try:
            k = int(key)
        except ValueError as exc:
            raise InputError("bad-tails", f"bad equation index {key!r}") from exc
        terms = [(fraction(t.get("coeff", 1)), tuple(t["exp"])) for t in require(rec, "terms", list)]
        out[k] = (terms, rec.get("linear_var"))
    return out

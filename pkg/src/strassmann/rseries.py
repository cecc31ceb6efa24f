"""Restricted power series known modulo p^N.

An :class:`ApproxSeries` is a finite polynomial with integer coefficients in
[0, p^N) together with the precision N; it stands for the whole coset
``P + p^N * R<x>``.  Every operation below gives the same answer for any
representative of its input cosets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .fppoly import FpPoly
from ._groebner import monomial_key
from .padic import AtLeast, PrecisionError, vp

DEFAULT_DEGREE_CAP = 64


class DegreeCapError(ArithmeticError):
    """A product produced a term above the degree cap that is not O(p^N)."""


def _default_names(n):
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class ApproxSeries:
    p: int
    nvars: int
    coeffs: dict  # exponent tuple -> residue in [1, p^prec)
    prec: int
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("series precision must be at least 1")
        m = self.p**self.prec
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e}")
            c = (clean.get(e, 0) + int(c)) % m
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        object.__setattr__(self, "coeffs", clean)
        if not self.names:
            object.__setattr__(self, "names", _default_names(self.nvars))

    # construction -----------------------------------------------------------

    @classmethod
    def from_terms(cls, p, nvars, terms, prec, names=()):
        return cls(p, nvars, dict(terms), prec, tuple(names))

    @classmethod
    def constant(cls, p, nvars, c, prec, names=()):
        return cls(p, nvars, {(0,) * nvars: c}, prec, tuple(names))

    def _like(self, coeffs, prec):
        return ApproxSeries(self.p, self.nvars, coeffs, prec, self.names)

    def _check(self, other):
        if not isinstance(other, ApproxSeries):
            raise TypeError(f"cannot combine ApproxSeries with {type(other).__name__}")
        if other.p != self.p or other.nvars != self.nvars:
            raise ValueError("series live in different rings")

    # valuations --------------------------------------------------------------

    def content_valuation(self) -> int | AtLeast:
        if not self.coeffs:
            return AtLeast(self.prec)
        return min(vp(c, self.p) for c in self.coeffs.values())

    def _content_int(self) -> int:
        return int(self.content_valuation())

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    # arithmetic --------------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        n = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return self._like(out, n)

    def __neg__(self):
        return self._like({e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other, degree_cap=DEFAULT_DEGREE_CAP):
        self._check(other)
        n = min(self.prec + other._content_int(), other.prec + self._content_int())
        m = self.p**n
        out = {}
        for e1, a in self.coeffs.items():
            for e2, b in other.coeffs.items():
                k = tuple(x + y for x, y in zip(e1, e2))
                out[k] = (out.get(k, 0) + a * b) % m
        return self._like(_apply_cap(out, degree_cap), n)

    __mul__ = mul

    def scale(self, c: int):
        """Multiply by an exact integer; the precision grows by v_p(c)."""
        if c == 0:
            raise ValueError("scaling by 0 loses all information; build the zero series directly")
        return self._like({e: a * c for e, a in self.coeffs.items()}, self.prec + vp(c, self.p))

    def mul_exact(self, poly: dict, degree_cap=DEFAULT_DEGREE_CAP):
        """Multiply by an exact integer polynomial ``{exps: int}``; precision is unchanged."""
        out = {}
        for e1, a in self.coeffs.items():
            for e2, b in poly.items():
                k = tuple(x + y for x, y in zip(e1, e2))
                out[k] = out.get(k, 0) + a * b
        m = self.p**self.prec
        return self._like(_apply_cap({k: v % m for k, v in out.items()}, degree_cap), self.prec)

    def with_prec(self, prec: int):
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return self._like(self.coeffs, prec)

    # reduction and division ----------------------------------------------------

    def reduce_mod_p(self) -> FpPoly:
        return FpPoly(self.p, self.nvars, {e: c % self.p for e, c in self.coeffs.items()})

    def divide_by_p(self, l: int = 1):
        """Exact division by p^l; loses l digits of precision."""
        if l > self.prec - 1:
            raise PrecisionError(f"dividing by p^{l} at precision {self.prec} leaves nothing")
        q = self.p**l
        if any(c % q for c in self.coeffs.values()):
            raise ValueError(f"series is not divisible by p^{l}")
        return self._like({e: c // q for e, c in self.coeffs.items()}, self.prec - l)

    def normalize(self):
        """Divide out the content so that some coefficient is a unit."""
        m = self.content_valuation()
        if isinstance(m, AtLeast):
            raise ValueError("cannot normalize a series that is zero at its precision")
        if m == 0:
            return self
        return self.divide_by_p(m)

    def evaluate(self, point) -> int:
        """Value at an integer point, as a residue modulo p^prec."""
        m = self.p**self.prec
        acc = 0
        for e, c in self.coeffs.items():
            t = c
            for x, k in zip(point, e):
                t = t * pow(int(x), k, m) % m
            acc += t
        return acc % m

    # text form -------------------------------------------------------------------

    def sorted_terms(self, order="grevlex"):
        key = monomial_key(order)
        return sorted(self.coeffs.items(), key=lambda t: key(t[0]), reverse=True)

    def to_text(self) -> str:
        parts = []
        for e, c in sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0]))):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        parts.append(f"O({self.p}^{self.prec})")
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()


def _apply_cap(coeffs, cap):
    if cap is None:
        return coeffs
    for e, c in coeffs.items():
        if c and sum(e) > cap:
            raise DegreeCapError(f"term of degree {sum(e)} exceeds the cap {cap}")
    return coeffs


def series_arith(f: ApproxSeries, g: ApproxSeries, kind: str) -> ApproxSeries:
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f.mul(g)
    raise ValueError(f"unknown operation {kind!r}")


_TERM = re.compile(r"^(?:(\d+)\*)?(.*)$")
_BIG_O = re.compile(r"^O\((\d+)(?:\^(\d+))?\)$")


def parse_series(text: str, names) -> ApproxSeries:
    """Parse the canonical text form ``"c + c*x1^2*x2 + ... + O(p^N)"``.

    Terms are joined by ``+`` or ``-``; a term is an optional integer and ``*``
    followed by ``name`` or ``name^k`` factors joined by ``*``.
    """
    names = tuple(names)
    idx = {n: i for i, n in enumerate(names)}
    tokens = re.split(r"\s*([+-])\s*", text.strip())
    if tokens and tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise ValueError(f"cannot parse series {text!r}")
    pairs = list(zip(tokens[0::2], tokens[1::2]))
    if not pairs:
        raise ValueError("empty series")
    sign, last = pairs[-1]
    mo = _BIG_O.match(last.replace(" ", ""))
    if not mo or sign != "+":
        raise ValueError(f"series must end with '+ O(p^N)': {text!r}")
    p, prec = int(mo.group(1)), int(mo.group(2) or 1)
    coeffs = {}
    for sign, body in pairs[:-1]:
        body = body.replace(" ", "")
        m = _TERM.match(body)
        coeff = 1
        rest = body
        if body.isdigit():
            coeff, rest = int(body), ""
        elif m.group(1):
            coeff, rest = int(m.group(1)), m.group(2)
        e = [0] * len(names)
        if rest:
            for factor in rest.split("*"):
                name, _, k = factor.partition("^")
                if name not in idx:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                e[idx[name]] += int(k) if k else 1
        e = tuple(e)
        coeffs[e] = coeffs.get(e, 0) + (coeff if sign == "+" else -coeff)
    return ApproxSeries(p, len(names), coeffs, prec, names)


@dataclass(frozen=True)
class ApproxIdeal:
    p: int
    nvars: int
    gens: tuple
    names: tuple = ()

    def __post_init__(self):
        if not self.gens:
            raise ValueError("an ideal needs at least one generator")
        for g in self.gens:
            if g.p != self.p or g.nvars != self.nvars:
                raise ValueError("generators live in different rings")
        object.__setattr__(self, "gens", tuple(self.gens))
        if not self.names:
            object.__setattr__(self, "names", self.gens[0].names)

    @classmethod
    def of(cls, gens):
        gens = tuple(gens)
        return cls(gens[0].p, gens[0].nvars, gens, gens[0].names)

    @property
    def min_precision(self) -> int:
        return min(g.prec for g in self.gens)

    def reductions(self) -> list[FpPoly]:
        return [g.reduce_mod_p() for g in self.gens]

"""Exact polynomials over Z localized at p: strong Gröbner bases and membership.

Polynomials are ``{exps: int | Fraction}`` dicts.  These helpers back the
exact lifting test, generator pruning and the polynomial saturation step.
"""

from __future__ import annotations

from fractions import Fraction

from ._groebner import (
    LocalRing,
    buchberger,
    combine_rows,
    frac_val,
    module_to_ring,
    ring_to_module,
    vector_to_module,
)


def clean(f):
    return {e: Fraction(c) for e, c in f.items() if c}


def padd(f, g, sign=1):
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pmul(f, g):
    out = {}
    for e1, a in f.items():
        for e2, b in g.items():
            k = tuple(x + y for x, y in zip(e1, e2))
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


def pscale(f, c):
    return {e: a * c for e, a in f.items() if a * c}


def combination(coeffs, gens):
    acc = {}
    for a, g in zip(coeffs, gens):
        if a and g:
            acc = padd(acc, pmul(a, g))
    return acc


def content_valuation(f, p) -> int:
    return min(frac_val(c, p) for c in f.values())


def is_p_integral(f, p) -> bool:
    return all(Fraction(c).denominator % p for c in f.values())


def residue(c, p):
    """Image of a p-integral rational in F_p."""
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ValueError(f"{c} is not p-integral")
    return c.numerator * pow(c.denominator, -1, p) % p


def reduce_mod_p(f, p):
    out = {}
    for e, c in f.items():
        r = residue(c, p)
        if r:
            out[e] = r
    return out


class LocalIdeal:
    """Ideal of Z_(p)[x] with a strong Gröbner basis that remembers how it was built."""

    def __init__(self, gens, p, nvars, order="grevlex"):
        self.p = p
        self.nvars = nvars
        self.order = order
        self.gens = [clean(g) for g in gens]
        self.dom = LocalRing(p)
        self.gb = buchberger([ring_to_module(g) for g in self.gens], order, self.dom, nvars,
                             track=True)

    def reduce(self, f):
        rem, _ = self.gb.reduce(ring_to_module(clean(f)))
        return module_to_ring(rem)

    def contains(self, f) -> bool:
        return not self.reduce(f)

    def express(self, f):
        """Coefficients c with f = sum c_i gens[i], or None when f is not in the ideal."""
        rem, quots = self.gb.reduce(ring_to_module(clean(f)), track=True)
        if rem:
            return None
        r = len(self.gens)
        return combine_rows(quots, self.gb.rows, self.dom, r)


def module_contains(vectors, target, p, nvars, order="grevlex") -> bool:
    """Is ``target`` in the Z_(p)[x]-span of ``vectors`` (lists of polynomials)?"""
    tgt = vector_to_module([clean(a) for a in target])
    if not tgt:
        return True
    mods = [vector_to_module([clean(a) for a in v]) for v in vectors]
    mods = [m for m in mods if m]
    if not mods:
        return False
    gb = buchberger(mods, order, LocalRing(p), nvars)
    return gb.contains(tgt)


__all__ = [
    "LocalIdeal",
    "clean",
    "combination",
    "content_valuation",
    "is_p_integral",
    "module_contains",
    "padd",
    "pmul",
    "pscale",
    "reduce_mod_p",
    "residue",
]

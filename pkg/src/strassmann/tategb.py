"""Gröbner bases in the Tate algebra at finite precision p^M.

Terms ``c * x^m`` are compared by the valuation of ``c`` first (smaller
valuation is larger) and then by the monomial order.  One term divides
another when its valuation is not larger and its monomial divides.  All work
happens on integer polynomials reduced modulo p^M, which makes division and
Buchberger's algorithm terminate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._groebner import divides_mono, mono_add, mono_lcm, mono_sub, monomial_key
from .fppoly import DEFAULT_ORDER
from .padic import PrecisionError, vp
from .rseries import DEFAULT_DEGREE_CAP, ApproxIdeal, ApproxSeries, DegreeCapError
from .saturation import saturate_exact

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TateTerm:
    val: int
    unit: int  # unit part of the coefficient, defined modulo p^(M - val)
    mono: tuple

    def divides(self, other: "TateTerm") -> bool:
        return self.val <= other.val and divides_mono(self.mono, other.mono)


def _tkey(order):
    mk = monomial_key(order)
    return lambda t: (-t[0], mk(t[1]))


def _terms(f: dict, p):
    return [(vp(c, p), e) for e, c in f.items()]


def _lt(f: dict, p, M, order) -> TateTerm:
    if not f:
        raise ValueError("leading term of a series that is O(p^M) is undefined")
    key = _tkey(order)
    v, e = max(_terms(f, p), key=key)
    return TateTerm(v, (f[e] // p**v) % p ** (M - v), e)


def _reduce_mod(f: dict, mod: int) -> dict:
    out = {}
    for e, c in f.items():
        c %= mod
        if c:
            out[e] = c
    return out


def _axpy(f, g, c, shift, mod, cap):
    """f + c * x^shift * g mod ``mod``."""
    out = dict(f)
    for e, a in g.items():
        k = mono_add(e, shift)
        if cap is not None and sum(k) > cap:
            raise DegreeCapError(f"degree {sum(k)} exceeds the cap {cap}")
        v = (out.get(k, 0) + c * a) % mod
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def leading_term(f: ApproxSeries, order=DEFAULT_ORDER) -> TateTerm:
    return _lt(f.coeffs, f.p, f.prec, order)


def _divide(f, basis, p, M, order, cap=DEFAULT_DEGREE_CAP, skip=None):
    """Full division of ``f`` by ``basis`` modulo p^M; returns (quotients, remainder)."""
    mod = p**M
    key = _tkey(order)
    leads = [_lt(g, p, M, order) if g else None for g in basis]
    invs = [pow(l.unit, -1, mod) if l else None for l in leads]
    quots = [dict() for _ in basis]
    rem = {}
    f = _reduce_mod(f, mod)
    while f:
        v, e = max(_terms(f, p), key=key)
        c = f[e]
        for i, lg in enumerate(leads):
            if lg is None or i == skip:
                continue
            if lg.val <= v and divides_mono(lg.mono, e):
                q = (c // p**lg.val) * invs[i] % mod
                shift = mono_sub(e, lg.mono)
                f = _axpy(f, basis[i], -q, shift, mod, cap)
                quots[i] = _axpy(quots[i], {(0,) * len(e): 1}, q, shift, mod, None)
                break
        else:
            # a monomial can come back at higher valuation after it was moved
            rem = _axpy(rem, {e: c}, 1, (0,) * len(e), mod, None)
            del f[e]
    return quots, rem


def tate_divide(f: ApproxSeries, G: list, order=DEFAULT_ORDER, M: int | None = None,
                degree_cap=DEFAULT_DEGREE_CAP):
    """Quotients and remainder of ``f`` by ``G`` modulo p^M.

    No term of the remainder is divisible by a leading term of ``G``, and
    ``f = sum q_i g_i + r`` holds modulo p^M.
    """
    M = f.prec if M is None else M
    if M > f.prec or any(M > g.prec for g in G):
        raise PrecisionError("target precision exceeds the input precision")
    basis = [_reduce_mod(g.coeffs, f.p**M) for g in G]
    if any(not b for b in basis):
        raise ValueError("a divisor is O(p^M) and has no leading term")
    quots, rem = _divide(f.coeffs, basis, f.p, M, order, degree_cap)
    mk = lambda d: ApproxSeries(f.p, f.nvars, d, M, f.names)
    return [mk(q) for q in quots], mk(rem)


@dataclass
class TateGB:
    p: int
    nvars: int
    basis: list  # integer polynomials modulo p^M
    order: str
    M: int
    minimal: bool = False
    reduced: bool = False
    names: tuple = field(default=())

    def series(self) -> list:
        return [ApproxSeries(self.p, self.nvars, g, self.M, self.names) for g in self.basis]

    def leading_terms(self) -> list:
        return [_lt(g, self.p, self.M, self.order) for g in self.basis]

    def reduce(self, f: dict) -> dict:
        _, rem = _divide(f, self.basis, self.p, self.M, self.order)
        return rem

    def contains(self, f: dict) -> bool:
        return not self.reduce(f)


def _spair(f, g, lf, lg, p, M):
    mod = p**M
    V = max(lf.val, lg.val)
    m = mono_lcm(lf.mono, lg.mono)
    cf = p ** (V - lf.val) * pow(lf.unit, -1, mod) % mod
    cg = p ** (V - lg.val) * pow(lg.unit, -1, mod) % mod
    s = _axpy({}, f, cf, mono_sub(m, lf.mono), mod, None)
    return _axpy(s, g, -cg, mono_sub(m, lg.mono), mod, None)


def tate_buchberger(gens, order=DEFAULT_ORDER, M: int | None = None,
                    degree_cap=DEFAULT_DEGREE_CAP) -> TateGB:
    """Gröbner basis modulo p^M of the ideal generated by ``gens`` (series or an ApproxIdeal)."""
    if isinstance(gens, ApproxIdeal):
        gens = list(gens.gens)
    gens = list(gens)
    p, n, names = gens[0].p, gens[0].nvars, gens[0].names
    M = min(g.prec for g in gens) if M is None else M
    if any(g.prec < M for g in gens):
        raise PrecisionError("generator precision is below the target precision")
    mod = p**M
    basis = [b for b in (_reduce_mod(g.coeffs, mod) for g in gens) if b]
    leads = [_lt(b, p, M, order) for b in basis]
    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2)]
    pairs += [(i, None) for i in range(len(basis)) if leads[i].val > 0]
    while pairs:
        i, j = pairs.pop(0)
        if j is None:
            # clear p from the leading coefficient against p^M = 0
            s = _axpy({}, basis[i], p ** (M - leads[i].val) * pow(leads[i].unit, -1, mod), (0,) * n, mod, None)
        else:
            s = _spair(basis[i], basis[j], leads[i], leads[j], p, M)
        _, rem = _divide(s, basis, p, M, order, degree_cap)
        if not rem:
            continue
        basis.append(rem)
        lt = _lt(rem, p, M, order)
        leads.append(lt)
        k = len(basis) - 1
        pairs.extend((a, k) for a in range(k))
        if lt.val > 0:
            pairs.append((k, None))
    return TateGB(p, n, basis, order, M, names=names)


def minimalize(gb: TateGB) -> TateGB:
    """Drop elements whose leading term is divisible by another leading term."""
    key = _tkey(gb.order)
    items = [(g, _lt(g, gb.p, gb.M, gb.order)) for g in gb.basis if g]
    keep = []
    for idx, (g, lt) in enumerate(items):
        dominated = False
        for jdx, (h, lh) in enumerate(items):
            if jdx == idx or not lh.divides(lt):
                continue
            same = lt.divides(lh)
            if not same or jdx < idx:
                dominated = True
                break
        if not dominated:
            keep.append((g, lt))
    keep.sort(key=lambda t: key((t[1].val, t[1].mono)), reverse=True)
    return TateGB(gb.p, gb.nvars, [g for g, _ in keep], gb.order, gb.M, True, False, gb.names)


def reduce_basis(gb: TateGB) -> TateGB:
    """Reduced basis from a minimal basis whose leading coefficients are units."""
    p, M = gb.p, gb.M
    mod = p**M
    basis = [dict(g) for g in gb.basis]
    leads = [_lt(g, p, M, gb.order) for g in basis]
    bad = [i for i, l in enumerate(leads) if l.val > 0]
    if bad:
        raise ValueError("leading coefficient is not a unit; the ideal is not saturated")
    for i in range(len(basis)):
        lt = leads[i]
        c = basis[i][lt.mono]
        tail = {e: a for e, a in basis[i].items() if e != lt.mono}
        _, r = _divide(tail, basis, p, M, gb.order)
        inv = pow(c, -1, mod)
        new = {e: a * inv % mod for e, a in r.items()}
        new[lt.mono] = 1
        basis[i] = _reduce_mod(new, mod)
    key = _tkey(gb.order)
    basis.sort(key=lambda g: key((0, _lt(g, p, M, gb.order).mono)), reverse=True)
    return TateGB(p, gb.nvars, basis, gb.order, M, True, True, gb.names)


@dataclass
class Algorithm2Result:
    status: str  # ok or FAIL
    basis: list  # ApproxSeries in the original variables (empty on FAIL)
    full_basis: list  # reduced basis in x and the auxiliary y variables
    offending: int | None = None
    saturated_generators: list = field(default_factory=list)


def _to_residues(f, mod):
    out = {}
    for e, c in f.items():
        c = Fraction(c)
        r = c.numerator * pow(c.denominator, -1, mod) % mod
        if r:
            out[e] = r
    return out


def algorithm2(polys: list, p: int, N: int, M: int, nvars: int, order=DEFAULT_ORDER,
               names=(), degree_cap=DEFAULT_DEGREE_CAP) -> Algorithm2Result:
    """Generators of the saturation modulo p^M for series known as ``polys + O(p^N)``, or FAIL.

    Each ``p_i + O(p^N)`` is replaced by ``p_i + p^N y_i`` with a new variable
    y_i; the polynomial ideal is saturated exactly, a reduced Tate basis is
    computed modulo p^M, and the answer is FAIL as soon as some basis element
    still involves a y_j.
    """
    if M > N:
        raise ValueError("target precision M must not exceed N")
    r = len(polys)
    tot = nvars + r
    aux = []
    for i, f in enumerate(polys):
        g = {tuple(e) + (0,) * r: c for e, c in f.items() if c}
        y = [0] * tot
        y[nvars + i] = 1
        g[tuple(y)] = g.get(tuple(y), 0) + p**N
        aux.append(g)
    sat = saturate_exact(aux, p, tot, order)
    mod = p**M
    names = tuple(names) or tuple(f"x{i + 1}" for i in range(nvars))
    full_names = names + tuple(f"y{i + 1}" for i in range(r))
    series = [ApproxSeries(p, tot, _to_residues(g, mod), M, full_names) for g in sat]
    series = [s for s in series if not s.is_zero()]
    if not series:
        return Algorithm2Result("ok", [], [], None, sat)
    gb = tate_buchberger(series, order, M, degree_cap)
    red = reduce_basis(minimalize(gb))
    for k, g in enumerate(red.basis):
        if any(any(e[nvars:]) for e in g):
            log.info("auxiliary variable survives in basis element %d", k)
            return Algorithm2Result("FAIL", [], red.series(), k, sat)
    out = [ApproxSeries(p, nvars, {e[:nvars]: c for e, c in g.items()}, M, names) for g in red.basis]
    return Algorithm2Result("ok", out, red.series(), None, sat)

"""Exact multivariate polynomials and ideals over the residue field F_p."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from . import _accel
from ._groebner import (
    PrimeField,
    apply_vector,
    buchberger,
    monomial_key,
    ring_to_module,
    module_to_ring,
    syzygies_of,
    vector_to_module,
)

log = logging.getLogger(__name__)

DEFAULT_ORDER = "grevlex"
POINT_BUDGET = 10**7


class FpPoly:
    """Sparse polynomial over F_p; ``terms`` maps exponent tuples to coefficients in [1, p)."""

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms=None):
        self.p = p
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = int(c) % p
            if c:
                clean[e] = (clean.get(e, 0) + c) % p
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def constant(cls, p, nvars, c):
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, p, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(p, nvars, {tuple(e): 1})

    def _like(self, terms):
        return FpPoly(self.p, self.nvars, terms)

    def _check(self, other):
        if isinstance(other, int):
            return FpPoly.constant(self.p, self.nvars, other)
        if other.p != self.p or other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = (t.get(e, 0) + c) % self.p
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        t = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                k = tuple(x + y for x, y in zip(e1, e2))
                t[k] = (t.get(k, 0) + a * b) % self.p
        return self._like(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = FpPoly.constant(self.p, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = FpPoly.constant(self.p, self.nvars, other)
        return isinstance(other, FpPoly) and (self.p, self.nvars, self.terms) == (
            other.p, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.p, self.nvars, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __call__(self, point):
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                t = t * pow(int(x), k, self.p) % self.p
            acc += t
        return acc % self.p

    def translate(self, z):
        """f(x + z)."""
        out = {}
        for e, c in self.terms.items():
            pieces = []
            for i, k in enumerate(e):
                # (x_i + z_i)^k = sum_j C(k, j) z_i^(k-j) x_i^j
                pieces.append([(j, comb(k, j) * pow(int(z[i]), k - j, self.p)) for j in range(k + 1)])
            for combo in product(*pieces):
                coeff = c
                exps = []
                for j, a in combo:
                    coeff = coeff * a % self.p
                    exps.append(j)
                if coeff:
                    key = tuple(exps)
                    out[key] = (out.get(key, 0) + coeff) % self.p
        return self._like(out)

    def to_str(self, names=None):
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        key = monomial_key(DEFAULT_ORDER)
        parts = []
        for e in sorted(self.terms, key=key, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FpPoly(p={self.p}, {self.to_str()})"


def _raw(polys):
    return [dict(f.terms) for f in polys]


@dataclass
class SyzygyBasis:
    """Generators of the relations sum a_i g_i = 0 among ``gens``."""

    gens: list
    vectors: list  # each a list of FpPoly, same length as gens

    def check(self) -> bool:
        for vec in self.vectors:
            acc = FpPoly.constant(self.gens[0].p, self.gens[0].nvars, 0)
            for a, g in zip(vec, self.gens):
                acc = acc + a * g
            if not acc.is_zero():
                return False
        return True

    def contains(self, vec, order=DEFAULT_ORDER) -> bool:
        """Membership of a relation vector in the module spanned by the stored vectors."""
        if not self.gens:
            return True
        p, n = self.gens[0].p, self.gens[0].nvars
        dom = PrimeField(p)
        mods = [vector_to_module([dict(a.terms) for a in v]) for v in self.vectors]
        target = vector_to_module([dict(a.terms) for a in vec])
        if not target:
            return True
        if not mods:
            return False
        gb = buchberger(mods, order, dom, n)
        return gb.contains(target)

    def __len__(self):
        return len(self.vectors)


@dataclass
class FpIdeal:
    p: int
    nvars: int
    gens: list
    _gb: dict = field(default_factory=dict, repr=False)

    @classmethod
    def of(cls, polys, p=None, nvars=None):
        polys = list(polys)
        if polys:
            p, nvars = polys[0].p, polys[0].nvars
        return cls(p, nvars, polys)

    def _result(self, order):
        if order not in self._gb:
            dom = PrimeField(self.p)
            gb = buchberger([ring_to_module(f.terms) for f in self.gens], order, dom,
                            self.nvars, track=True)
            self._gb[order] = gb
        return self._gb[order]

    def groebner_basis(self, order=DEFAULT_ORDER) -> list:
        gb = self._result(order)
        return [FpPoly(self.p, self.nvars, module_to_ring(b)) for b in gb.basis]

    def transformation(self, order=DEFAULT_ORDER):
        """Matrices (A, B) with basis = A * gens and gens = B * basis."""
        gb = self._result(order)
        A = [[FpPoly(self.p, self.nvars, part) for part in row] for row in gb.rows]
        B = []
        for f in self.gens:
            rem, quots = gb.reduce(ring_to_module(f.terms), track=True)
            assert not rem
            B.append([FpPoly(self.p, self.nvars, q) for q in quots])
        return A, B

    def leading_monomials(self, order=DEFAULT_ORDER):
        return [lt[1] for lt, _ in self._result(order).leads]

    def reduce(self, f: FpPoly, order=DEFAULT_ORDER) -> FpPoly:
        rem, _ = self._result(order).reduce(ring_to_module(f.terms))
        return FpPoly(self.p, self.nvars, module_to_ring(rem))

    def contains(self, f: FpPoly, order=DEFAULT_ORDER) -> bool:
        return self.reduce(f, order).is_zero()

    def contains_ideal(self, other: "FpIdeal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def same_ideal(self, other: "FpIdeal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_unit_ideal(self) -> bool:
        return any(sum(e) == 0 for e in self.leading_monomials())

    def __add__(self, other):
        return FpIdeal(self.p, self.nvars, list(self.gens) + list(other.gens))


def groebner_basis(ideal: FpIdeal, order=DEFAULT_ORDER) -> FpIdeal:
    """The same ideal, generated by its reduced Gröbner basis for ``order``."""
    return FpIdeal(ideal.p, ideal.nvars, ideal.groebner_basis(order))


def check_buchberger_criterion(basis: list, order=DEFAULT_ORDER) -> bool:
    """Every S-polynomial of ``basis`` reduces to zero against it."""
    from ._groebner import GBResult, s_element, term_key

    if not basis:
        return True
    p, n = basis[0].p, basis[0].nvars
    dom = PrimeField(p)
    mods = [ring_to_module(b.terms) for b in basis if not b.is_zero()]
    gb = GBResult(mods, None, term_key(order), dom)
    for i, j in combinations(range(len(mods)), 2):
        s, _, _ = s_element(mods[i], mods[j], gb.leads[i], gb.leads[j], dom)
        if not gb.contains(s):
            return False
    return True


def syzygies(gens: list, order=DEFAULT_ORDER) -> SyzygyBasis:
    if not gens:
        return SyzygyBasis([], [])
    p, n = gens[0].p, gens[0].nvars
    dom = PrimeField(p)
    vecs = syzygies_of(_raw(gens), order, dom, n)
    out = [[FpPoly(p, n, part) for part in v] for v in vecs]
    basis = SyzygyBasis(list(gens), out)
    for v in vecs:
        assert not apply_vector(v, _raw(gens), dom), "syzygy does not annihilate the generators"
    return basis


@dataclass(frozen=True)
class QuotientDimension:
    krull: int  # -1 for the unit ideal
    vector_dim: int | None  # dim_k when krull == 0, 0 for the unit ideal, else None

    @property
    def zero_dimensional(self):
        return self.krull == 0


def krull_from_leading(lms, nvars):
    if any(sum(e) == 0 for e in lms):
        return -1
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            s = set(subset)
            if not any(all(i in s for i, k in enumerate(e) if k) for e in lms):
                return size
    return 0


def standard_monomials(lms, nvars):
    """Monomials outside the leading-term ideal; the ideal must be zero-dimensional."""
    bounds = []
    for i in range(nvars):
        pure = [e[i] for e in lms if e[i] and all(k == 0 for j, k in enumerate(e) if j != i)]
        if not pure:
            raise ValueError("ideal is not zero-dimensional")
        bounds.append(min(pure))
    out = []
    for e in product(*(range(b) for b in bounds)):
        if not any(all(a <= b for a, b in zip(m, e)) for m in lms):
            out.append(e)
    return out


def quotient_dimension(ideal: FpIdeal, order=DEFAULT_ORDER) -> QuotientDimension:
    lms = ideal.leading_monomials(order)
    krull = krull_from_leading(lms, ideal.nvars)
    if krull == -1:
        return QuotientDimension(-1, 0)
    if krull == 0:
        return QuotientDimension(0, len(standard_monomials(lms, ideal.nvars)))
    return QuotientDimension(krull, None)


class BudgetExceeded(RuntimeError):
    pass


def rational_points(ideal: FpIdeal, budget=POINT_BUDGET) -> list[tuple[int, ...]]:
    """All F_p-points of a zero-dimensional ideal, by exhaustive evaluation."""
    qd = quotient_dimension(ideal)
    if qd.krull > 0:
        raise ValueError("ideal is positive-dimensional")
    if qd.krull < 0:
        return []
    p, n = ideal.p, ideal.nvars
    if p**n > budget:
        raise BudgetExceeded(f"{p}^{n} points exceeds the enumeration budget {budget}")
    polys = [dict(g.terms) for g in ideal.groebner_basis()]
    if p < _accel.KERNEL_PRIME_LIMIT:
        pts = _accel.common_zeros(p, n, polys)
        return [tuple(int(v) for v in row) for row in pts]
    gb = ideal.groebner_basis()
    return [z for z in product(range(p), repeat=n) if all(g(z) == 0 for g in gb)]


def _monomials_below(nvars, D):
    out = []
    for d in range(D):
        for e in product(range(d + 1), repeat=nvars):
            if sum(e) == d:
                out.append(e)
    return out


def truncated_quotient_dim(gens, z, D) -> int:
    """dim_k k[x] / (I + m_z^D) via the rank of the truncated multiplication matrix."""
    if not gens:
        raise ValueError("need at least one generator")
    p, n = gens[0].p, gens[0].nvars
    shifted = [g.translate(z) for g in gens]
    monos = _monomials_below(n, D)
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    for g in shifted:
        low = min((sum(e) for e in g.terms), default=D)
        for a in monos:
            if sum(a) + low >= D:
                continue
            row = [0] * len(monos)
            for e, c in g.terms.items():
                k = tuple(x + y for x, y in zip(a, e))
                if sum(k) < D:
                    row[index[k]] = (row[index[k]] + c) % p
            if any(row):
                rows.append(row)
    if not rows:
        return len(monos)
    if p < _accel.KERNEL_PRIME_LIMIT:
        rank = _accel.rank_mod_p(np.array(rows, dtype=np.int64), p)
    else:
        rank = _rank_python(rows, p)
    return len(monos) - rank


def _rank_python(rows, p):
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [v * inv % p for v in a[rank]]
        for i in range(rank + 1, len(a)):
            if a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def local_dimension(ideal: FpIdeal, z) -> int:
    """dim_k of the localization of k[x]/I at the maximal ideal of the point z."""
    z = tuple(int(v) % ideal.p for v in z)
    if any(g(z) for g in ideal.gens):
        raise ValueError(f"{z} is not a zero of the ideal")
    qd = quotient_dimension(ideal)
    if qd.krull != 0:
        raise ValueError("local dimension needs a zero-dimensional ideal")
    gens = [g for g in ideal.groebner_basis()]
    D = max(1, qd.vector_dim)
    prev = truncated_quotient_dim(gens, z, D)
    while True:
        D *= 2
        cur = truncated_quotient_dim(gens, z, D)
        if cur == prev:
            return cur
        log.debug("local dimension at %s not yet stable at D=%d", z, D)
        prev = cur

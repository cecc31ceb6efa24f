"""Skolem's method for Thue equations Norm(X - Y a) = rhs.

Solutions with (X, Y) in a fixed residue class mod p are units in one coset
``u * <v_1, ..., v_r>`` of the group of units congruent to 1 mod p.  Writing
``u * prod v_j^{n_j} = u * exp(sum n_j log v_j)`` turns the coefficients of
a^2, ..., a^(d-1) into restricted power series in n_1, ..., n_r; their common
zeros in Z_p^r are bounded with the saturation chain.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from . import _accel
from .fppoly import DEFAULT_ORDER, FpPoly
from .padic import AtLeast, NumberRingElement, _polymulmod, inverse, padic_exp, padic_log, vp, vp_factorial
from .rseries import ApproxIdeal, ApproxSeries
from .saturation import run_chain
from .zerobound import ZeroBoundReport, bound_from_chain

log = logging.getLogger(__name__)


# --- exact arithmetic in Z[a] -------------------------------------------------


def _mul(a, b, f):
    return _polymulmod(a, b, f, None)


def _mult_matrix(a, f):
    d = len(f) - 1
    cols = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        cols.append(_mul(a, e, f))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _det(mat):
    """Exact determinant by fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            fac = a[r][c] / a[c][c]
            if fac:
                a[r] = [x - fac * y for x, y in zip(a[r], a[c])]
    return int(det)


def norm(a, f) -> int:
    return _det(_mult_matrix(a, f))


def exact_inverse(a, f):
    """Inverse of a unit of Z[a] (integer coefficients)."""
    mat = _mult_matrix(a, f)
    d = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == 0))] for i, row in enumerate(mat)]
    for c in range(d):
        piv = next(r for r in range(c, d) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(d):
            if r != c and aug[r][c]:
                fac = aug[r][c]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[c])]
    out = [aug[i][d] for i in range(d)]
    if any(x.denominator != 1 for x in out):
        raise ValueError("element is not a unit of Z[a]")
    return [int(x) for x in out]


def _pow(a, n, f, mod=None):
    d = len(f) - 1
    out = [1] + [0] * (d - 1)
    base = list(a)
    while n:
        if n & 1:
            out = _polymulmod(out, base, f, mod)
        base = _polymulmod(base, base, f, mod)
        n >>= 1
    return out


def norm_form(x: int, y: int, f) -> int:
    """Norm(x - y a) = sum_k f_k x^k y^(d-k) for monic f (coefficients low degree first)."""
    d = len(f) - 1
    return sum(c * x**k * y ** (d - k) for k, c in enumerate(f))


def _squarefree_mod_p(f, p) -> bool:
    df = [(k * c) % p for k, c in enumerate(f)][1:]
    a = [c % p for c in f]
    b = df
    while any(b):
        while b and b[-1] == 0:
            b = b[:-1]
        a = _polyrem(a, b, p)
        a, b = b, a
    while a and a[-1] == 0:
        a = a[:-1]
    return len(a) == 1


def _polyrem(a, b, p):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        while a and a[-1] == 0:
            a.pop()
    return a


# --- the instance --------------------------------------------------------------


@dataclass
class ThueInstance:
    minpoly: tuple  # monic, integer coefficients, low degree first
    p: int
    units: tuple  # fundamental units as coefficient vectors in the power basis
    rhs: int = 1
    box: int = 20
    pinned_v: tuple | None = None
    pinned_u: dict = field(default_factory=dict)  # (a, b) -> coefficient vector

    def __post_init__(self):
        f = tuple(int(c) for c in self.minpoly)
        if f[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = f
        d = len(f) - 1
        self.units = tuple(tuple(list(u) + [0] * (d - len(u))) for u in self.units)
        if self.rhs not in (1, -1):
            raise ValueError("only rhs = +1 or -1 is supported")
        if self.p == 2:
            raise ValueError("p must be odd")
        for u in self.units:
            if abs(norm(u, f)) != 1:
                raise ValueError(f"{u} does not have norm +-1")
        if not _squarefree_mod_p(f, self.p):
            raise ValueError(f"minimal polynomial is not squarefree mod {self.p}")
        if d - 2 < len(self.units):
            raise ValueError("need at least as many equations (d - 2) as units")
        if self.pinned_v is not None:
            self.pinned_v = tuple(tuple(v) for v in self.pinned_v)
        self.pinned_u = {tuple(k): tuple(v) for k, v in self.pinned_u.items()}

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def rank(self) -> int:
        return len(self.units)


def survives_norm_test(a: int, b: int, inst: ThueInstance) -> bool:
    return (norm_form(a, b, inst.minpoly) - inst.rhs) % inst.p == 0


def surviving_pairs(inst: ThueInstance) -> list:
    p = inst.p
    return [(a, b) for a, b in product(range(p), repeat=2) if survives_norm_test(a, b, inst)]


# --- units modulo p -------------------------------------------------------------


def _key(a, p):
    return tuple(c % p for c in a)


def _neg_key(k, p):
    return tuple((-c) % p for c in k)


def _pm_class(k, p):
    return min(k, _neg_key(k, p))


def unit_order(u, f, p) -> int:
    one = _key([1] + [0] * (len(f) - 2), p)
    x = _key(u, p)
    n = 1
    limit = p ** (len(f) - 1)
    while x != one:
        x = tuple(_polymulmod(x, u, f, p))
        n += 1
        if n > limit:
            raise ValueError("element is not a unit mod p")
    return n


@dataclass
class UnitLattice:
    orders: list
    basis: list  # rows: exponent vectors w_j with prod u^w_j = +-1 mod p
    signs: list  # v_j = sign_j * prod u^w_j is 1 mod p
    index: int


def unit_lattice_mod_p(inst: ThueInstance) -> UnitLattice:
    """Exponent vectors e with prod u_i^e_i = +-1 mod p, as a Hermite-reduced basis.

    The relations come from a breadth-first walk over the image of the unit
    group modulo +-1: each edge that closes a cycle gives a kernel vector.
    """
    f, p, r = inst.minpoly, inst.p, inst.rank
    d = inst.degree
    orders = [unit_order(u, f, p) for u in inst.units]
    start = _pm_class(_key([1] + [0] * (d - 1), p), p)
    seen = {start: (0,) * r}
    frontier = [start]
    rels = []
    for i, o in enumerate(orders):
        rels.append(tuple(o if k == i else 0 for k in range(r)))
    while frontier:
        nxt = []
        for h in frontier:
            eh = seen[h]
            for i, u in enumerate(inst.units):
                h2 = _pm_class(tuple(_polymulmod(h, u, f, p)), p)
                e2 = tuple(x + (1 if k == i else 0) for k, x in enumerate(eh))
                if h2 in seen:
                    rel = tuple(a - b for a, b in zip(e2, seen[h2]))
                    if any(rel):
                        rels.append(rel)
                else:
                    seen[h2] = e2
                    nxt.append(h2)
        frontier = nxt
    H = hermite_normal_form(Matrix(rels).T)
    basis = [tuple(int(H[i, j]) for i in range(r)) for j in range(H.shape[1])]
    basis = [w for w in basis if any(w)]
    if len(basis) != r:
        raise ArithmeticError("kernel lattice does not have full rank")
    signs = []
    for w in basis:
        v = _unit_power_mod(inst, w, p)
        one = [1] + [0] * (d - 1)
        if v == one:
            signs.append(1)
        elif v == [(-c) % p for c in one]:
            signs.append(-1)
        else:
            raise AssertionError("kernel vector does not map to +-1")
    index = abs(int(Matrix(basis).det()))
    return UnitLattice(orders, basis, signs, index)


def _unit_power_mod(inst, e, mod):
    f = inst.minpoly
    out = [1] + [0] * (inst.degree - 1)
    for u, k in zip(inst.units, e):
        if k < 0:
            u = exact_inverse(u, f)
            k = -k
        out = _polymulmod(out, _pow(u, k, f, mod), f, mod)
    return [c % mod for c in out]


def unit_power_exact(inst, e, sign=1):
    f = inst.minpoly
    out = [1] + [0] * (inst.degree - 1)
    for u, k in zip(inst.units, e):
        if k < 0:
            u = exact_inverse(u, f)
            k = -k
        out = _mul(out, _pow(u, k, f), f)
    return [sign * c for c in out]


def coset_representative(inst: ThueInstance, lat: UnitLattice, target):
    """Lexicographically least (e0, e_1, ..., e_r), 0 <= e_i < order_i, with
    (-1)^e0 prod u_i^e_i = target mod p; None when the class holds no unit."""
    f, p, r = inst.minpoly, inst.p, inst.rank
    tgt = _key(target, p)
    last = inst.units[-1]
    table = {}
    x = _key([1] + [0] * (inst.degree - 1), p)
    for k in range(lat.orders[-1]):
        table.setdefault(x, k)
        x = tuple(_polymulmod(x, last, f, p))
    for e0 in (0, 1):
        for head in product(*(range(o) for o in lat.orders[:-1])):
            h = _unit_power_mod(inst, list(head) + [0], p)
            # need u_r^k = (-1)^e0 * target * h^{-1}
            hinv = _unit_power_mod(inst, [-k for k in head] + [0], p)
            want = _polymulmod(list(tgt), hinv, f, p)
            if e0:
                want = [(-c) % p for c in want]
            k = table.get(tuple(want))
            if k is not None:
                return (e0,) + tuple(head) + (k,)
    return None


def unit_exponents(inst: ThueInstance, w, prec=60):
    """(sign, e) with w = sign * prod u_i^e_i exactly, or None.

    The exponents are estimated from logarithms of archimedean embeddings at
    high precision and then confirmed by exact multiplication.
    """
    f = inst.minpoly
    r = inst.rank
    with mpmath.workdps(prec):
        roots = mpmath.polyroots(list(reversed(f)), maxsteps=200, extraprec=prec * 4)
        emb = []
        for z in roots:
            if abs(mpmath.im(z)) < mpmath.mpf(10) ** (-prec // 2):
                emb.append(mpmath.re(z))
            elif mpmath.im(z) > 0:
                emb.append(z)
        emb = emb[:r]
        if len(emb) < r:
            return None

        def logs(c):
            return [mpmath.log(abs(mpmath.fsum(ci * z**i for i, ci in enumerate(c)))) for z in emb]

        A = mpmath.matrix([logs(u) for u in inst.units]).T
        b = mpmath.matrix(logs(w))
        try:
            sol = mpmath.lu_solve(A, b)
        except ZeroDivisionError:
            return None
        guess = [int(mpmath.nint(s)) for s in sol]
    w = list(w)
    for delta in product((0, -1, 1), repeat=r):
        e = [g + dd for g, dd in zip(guess, delta)]
        val = unit_power_exact(inst, e)
        if val == w:
            return 1, tuple(e)
        if [-c for c in val] == w:
            return -1, tuple(e)
    return None


# --- series for one disk -----------------------------------------------------------


@dataclass
class DiskSeries:
    raw: list  # F_0..F_{d-1} before normalisation, working precision
    normalized: list  # F_0..F_{d-1} after normalisation, precision N (None if zero)
    contents: list
    work_prec: int


def _exponent_vectors(r, k):
    if r == 1:
        yield (k,)
        return
    for a in range(k, -1, -1):
        for rest in _exponent_vectors(r - 1, k - a):
            yield (a,) + rest


def build_disk_series(u, vs, f, p, N, work_prec=None, max_extra=12, names=None) -> DiskSeries:
    """Expand u * exp(sum n_j log v_j) = sum_i F_i(n) a^i and normalise each F_i to precision N."""
    d = len(f) - 1
    r = len(vs)
    names = tuple(names or (f"t{j + 1}" for j in range(r)))
    W = work_prec or N + 2
    while True:
        raw = _expand(u, vs, f, p, W, names)
        contents = [F.content_valuation() for F in raw]
        ok = all(isinstance(m, int) and W - m >= N for m in contents[2:])
        if ok or W >= N + max_extra:
            break
        W += 2
    normalized = []
    for F, m in zip(raw, contents):
        if isinstance(m, AtLeast) or W - m < N:
            normalized.append(None)
        else:
            normalized.append(F.normalize().with_prec(N))
    return DiskSeries(raw, normalized, contents, W)


def _expand(u, vs, f, p, W, names):
    d = len(f) - 1
    r = len(vs)
    # a coefficient of t^a has valuation >= sum a_j c_j - sum v_p(a_j!)
    Ls0 = [padic_log(NumberRingElement.from_ints(p, f, v, W)) for v in vs]
    cs = [min(int(L.valuation()), W) for L in Ls0]
    cmin = min(cs)
    exps = []
    k = 0
    while True:
        if k * cmin - k / (p - 1) >= W and k > 0:
            break
        for a in _exponent_vectors(r, k):
            low = sum(x * c for x, c in zip(a, cs)) - sum(vp_factorial(x, p) for x in a)
            if low < W:
                exps.append(a)
        k += 1
    extra = max(sum(vp_factorial(x, p) for x in a) for a in exps)
    Wx = W + extra
    mod = p**Wx
    Ls = [padic_log(NumberRingElement.from_ints(p, f, v, Wx)).coeffs for v in vs]
    kmax = max(max(a) for a in exps)
    powers = []
    for L in Ls:
        pw = [[1] + [0] * (d - 1)]
        for _ in range(kmax):
            pw.append(_polymulmod(pw[-1], L, f, mod))
        powers.append(pw)
    out_mod = p**W
    coeffs = [dict() for _ in range(d)]
    for a in exps:
        c = [x % mod for x in u]
        for j, aj in enumerate(a):
            if aj:
                c = _polymulmod(c, powers[j][aj], f, mod)
        fact = 1
        for aj in a:
            for t in range(2, aj + 1):
                fact *= t
        v = vp(fact, p)
        unit_inv = pow(fact // p**v, -1, out_mod)
        for i in range(d):
            coeffs[i][a] = (c[i] // p**v) * unit_inv % out_mod
    return [ApproxSeries(p, r, coeffs[i], W, names) for i in range(d)]


def direct_power(u, vs, n, f, p, prec):
    """Coefficients of u * prod v_j^n_j modulo p^prec (negative exponents allowed)."""
    mod = p**prec
    out = [c % mod for c in u]
    for v, k in zip(vs, n):
        base = list(v)
        if k < 0:
            base = list(inverse(NumberRingElement.from_ints(p, f, v, prec)).coeffs)
            k = -k
        out = _polymulmod(out, _pow(base, k, f, mod), f, mod)
    return out


# --- the pipeline --------------------------------------------------------------------


@dataclass
class DiskReport:
    pair: tuple
    status: str  # certified, empty-coset or inconclusive
    coset: tuple | None = None
    u: list | None = None
    v: list | None = None
    series: list = field(default_factory=list)
    bound: ZeroBoundReport | None = None
    chain: object = None
    solutions: list = field(default_factory=list)
    exponents: dict = field(default_factory=dict)  # solution -> (n_1, ..., n_r)
    zero_checks: dict = field(default_factory=dict)  # solution -> bool

    @property
    def bound_value(self):
        if self.status == "empty-coset":
            return 0
        return self.bound.bound if self.bound is not None else None

    def to_dict(self):
        out = {
            "pair": list(self.pair),
            "status": self.status,
            "coset": list(self.coset) if self.coset else None,
            "bound": self.bound_value,
            "solutions": [list(s) for s in self.solutions],
            "exponents": {f"{s[0]},{s[1]}": (list(n) if n else None) for s, n in self.exponents.items()},
            "zero_checks": {f"{s[0]},{s[1]}": ok for s, ok in self.zero_checks.items()},
        }
        if self.series:
            out["series"] = [F.to_text() if F is not None else None for F in self.series]
        if self.bound is not None:
            out["bound_report"] = self.bound.to_dict()
        if self.chain is not None:
            out["chain"] = {
                "status": self.chain.status,
                "certificate": self.chain.certificate.kind,
                "levels": [
                    {
                        "level": lv.level,
                        "generators": [g.series.to_text() for g in lv.generators],
                        "reduction_basis": [g.to_str(self.chain.base.names) for g in lv.reduction_basis],
                        "krull": lv.dimension.krull,
                        "dropped": lv.dropped,
                    }
                    for lv in self.chain.levels
                ],
            }
        return out


@dataclass
class ThueReport:
    verdict: str  # solved, bounded or inconclusive
    surviving: list
    disks: list
    bound: int | None
    solutions: list
    lattice: UnitLattice

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "surviving_pairs": [list(x) for x in self.surviving],
            "bound": self.bound,
            "solutions": [list(s) for s in self.solutions],
            "lattice": {"orders": self.lattice.orders, "basis": [list(w) for w in self.lattice.basis],
                        "index": self.lattice.index},
            "disks": [d.to_dict() for d in self.disks],
        }


def search_solutions(inst: ThueInstance) -> list:
    B = inst.box
    return [(x, y) for x in range(-B, B + 1) for y in range(-B, B + 1)
            if norm_form(x, y, inst.minpoly) == inst.rhs]


def _lattice_vectors(inst, lat):
    """Generators v_j (exact when small enough) and their exponent vectors."""
    if inst.pinned_v is not None:
        vs = [list(v) for v in inst.pinned_v]
        ws = []
        for v in vs:
            if any(c % inst.p for c in ([v[0] - 1] + v[1:])):
                raise ValueError("pinned v is not congruent to 1 mod p")
            ex = unit_exponents(inst, v)
            if ex is None:
                raise ValueError(f"pinned v {v} is not a product of the given units")
            ws.append(ex[1])
        H1 = hermite_normal_form(Matrix(ws).T)
        H2 = hermite_normal_form(Matrix(lat.basis).T)
        if H1 != H2:
            raise ValueError("pinned v do not generate the units congruent to 1 mod p")
        return vs, ws
    vs = [unit_power_exact(inst, w, s) for w, s in zip(lat.basis, lat.signs)]
    return vs, [tuple(w) for w in lat.basis]


def _solve_disk(inst, lat, vs, ws, pair, sols, N, max_level, order):
    p, f, d = inst.p, inst.minpoly, inst.degree
    a, b = pair
    target = [a, -b] + [0] * (d - 2)
    rep = DiskReport(pair, "inconclusive")
    rep.solutions = sorted(s for s in sols if (s[0] % p, s[1] % p) == pair)
    if pair in inst.pinned_u:
        u = list(inst.pinned_u[pair])
        if _key(u, p) != _key(target, p):
            raise ValueError(f"pinned u is not congruent to {a} - {b}a mod {p}")
        ex = unit_exponents(inst, u)
        if ex is None:
            raise ValueError("pinned u is not a product of the given units")
        coset = ((0 if ex[0] == 1 else 1),) + tuple(ex[1])
    else:
        coset = coset_representative(inst, lat, target)
        if coset is None:
            rep.status = "empty-coset"
            return rep
        u = unit_power_exact(inst, coset[1:], -1 if coset[0] else 1)
    rep.coset, rep.u, rep.v = coset, u, vs
    ser = build_disk_series(u, vs, f, p, N)
    rep.series = ser.normalized
    eqs = ser.normalized[2:]
    if any(F is None for F in eqs):
        return rep
    chain = run_chain(ApproxIdeal.of(eqs), max_level=max_level, order=order)
    rep.chain = chain
    rep.bound = bound_from_chain(chain, order)
    if rep.bound.verdict == "finite-certified":
        rep.status = "certified"
    Winv = Matrix(ws).T.inv()
    for s in rep.solutions:
        ex = unit_exponents(inst, [s[0], -s[1]] + [0] * (d - 2))
        n = None
        if ex is not None:
            sign, e = ex
            diff = Matrix([x - y for x, y in zip(e, coset[1:])])
            sol = Winv * diff
            if all(x.is_integer for x in sol):
                n = tuple(int(x) for x in sol)
                if sign * (-1 if coset[0] else 1) != 1:
                    n = None
        rep.exponents[s] = n
        if n is not None:
            rep.zero_checks[s] = all(F.evaluate(n) == 0 for F in eqs)
    return rep


def solve_thue(inst: ThueInstance, N: int = 3, max_level: int = 2, order=DEFAULT_ORDER) -> ThueReport:
    lat = unit_lattice_mod_p(inst)
    vs, ws = _lattice_vectors(inst, lat)
    survivors = surviving_pairs(inst)
    sols = search_solutions(inst)
    workers = min(_accel.thread_count(), max(1, len(survivors)))
    job = lambda pair: _solve_disk(inst, lat, vs, ws, pair, sols, N, max_level, order)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            disks = list(ex.map(job, survivors))
    else:
        disks = [job(pair) for pair in survivors]
    stray = [s for s in sols if (s[0] % inst.p, s[1] % inst.p) not in set(survivors)]
    if stray:
        raise AssertionError(f"solutions outside the surviving disks: {stray}")
    certified = all(dk.status in ("certified", "empty-coset") for dk in disks)
    total = sum(dk.bound_value for dk in disks) if certified else None
    if not certified:
        verdict = "inconclusive"
    elif all(len(dk.solutions) == dk.bound_value for dk in disks):
        verdict = "solved"
    else:
        verdict = "bounded"
    return ThueReport(verdict, survivors, disks, total, sorted(sols), lat)


QUINTIC_INSTANCE = dict(
    minpoly=(-1, 0, -1, 1, -1, 1),
    p=5,
    units=((0, -1, 1, -1, 1), (-1, 0, -1, 1, 0)),
    rhs=1,
    box=20,
)

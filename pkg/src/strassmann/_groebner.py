"""Sparse Buchberger engine for submodules of R[x]^r over a field or a DVR.

Elements are dicts ``{(pos, exps): coeff}``; an ideal is a rank-1 module with
every key at position 0.  Ring polynomials (quotients, representation rows)
are plain ``{exps: coeff}`` dicts.  The coefficient domain supplies
divisibility: over F_p everything nonzero divides, over Z_(p) a coefficient
divides another iff its valuation is not larger.  For a DVR the S-pairs alone
give a strong Gröbner basis (the gcd of two coefficients is one of them up to a
unit), so no gcd-polynomials are formed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


# --- coefficient domains ----------------------------------------------------


class PrimeField:
    is_field = True

    def __init__(self, p: int):
        self.p = p

    def canon(self, c):
        return c % self.p

    def iszero(self, c):
        return c % self.p == 0

    def divides(self, a, b):
        return True

    def quo(self, b, a):
        return b * pow(a, -1, self.p) % self.p

    def pair_cofactors(self, a, b):
        p = self.p
        return pow(a, -1, p), pow(b, -1, p)

    def monic_factor(self, c):
        return pow(c, -1, self.p)

    def __repr__(self):
        return f"GF({self.p})"


def frac_val(c: Fraction, p: int) -> int:
    c = Fraction(c)
    v = 0
    num, den = c.numerator, c.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class LocalRing:
    """Z localized at p, with exact rational coefficients."""

    is_field = False

    def __init__(self, p: int):
        self.p = p

    def canon(self, c):
        return Fraction(c)

    def iszero(self, c):
        return c == 0

    def val(self, c):
        return frac_val(c, self.p)

    def divides(self, a, b):
        return self.val(a) <= self.val(b)

    def quo(self, b, a):
        return Fraction(b) / Fraction(a)

    def pair_cofactors(self, a, b):
        if self.val(a) >= self.val(b):
            return Fraction(1), Fraction(a) / Fraction(b)
        return Fraction(b) / Fraction(a), Fraction(1)

    def monic_factor(self, c):
        return Fraction(self.p ** self.val(c)) / Fraction(c)

    def __repr__(self):
        return f"Z_({self.p})"


# --- monomial orders --------------------------------------------------------


def _grevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex(e):
    return tuple(e)


def _grlex(e):
    return (sum(e), tuple(e))


MONOMIAL_ORDERS = {"grevlex": _grevlex, "lex": _lex, "grlex": _grlex}


def monomial_key(order: str):
    try:
        return MONOMIAL_ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


def term_key(order: str):
    """Term-over-position key for module terms ``(pos, exps)``; lower positions win ties."""
    mk = monomial_key(order)
    return lambda t: (mk(t[1]), -t[0])


# --- small helpers ----------------------------------------------------------


def divides_mono(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def leading(f, tkey):
    t = max(f, key=tkey)
    return t, f[t]


def add_scaled(f, g, c, shift, dom):
    """Return ``f + c * x^shift * g`` for module elements."""
    out = dict(f)
    for (pos, e), a in g.items():
        k = (pos, mono_add(e, shift))
        v = dom.canon(out.get(k, 0) + c * a)
        if dom.iszero(v):
            out.pop(k, None)
        else:
            out[k] = v
    return out


def radd_scaled(f, g, c, shift, dom):
    """Return ``f + c * x^shift * g`` for ring polynomials."""
    out = dict(f)
    for e, a in g.items():
        k = mono_add(e, shift)
        v = dom.canon(out.get(k, 0) + c * a)
        if dom.iszero(v):
            out.pop(k, None)
        else:
            out[k] = v
    return out


def rmul(f, g, dom):
    out = {}
    for e1, a in f.items():
        for e2, b in g.items():
            k = mono_add(e1, e2)
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in ((k, dom.canon(v)) for k, v in out.items()) if not dom.iszero(v)}


def radd(f, g, dom, sign=1):
    out = dict(f)
    for e, a in g.items():
        v = dom.canon(out.get(e, 0) + sign * a)
        if dom.iszero(v):
            out.pop(e, None)
        else:
            out[e] = v
    return out


def ring_to_module(f, pos=0):
    return {(pos, e): c for e, c in f.items()}


def module_to_ring(f):
    out = {}
    for (pos, e), c in f.items():
        if pos != 0:
            raise ValueError("element is not in rank one")
        out[e] = c
    return out


def vector_to_module(vec):
    out = {}
    for pos, f in enumerate(vec):
        for e, c in f.items():
            out[(pos, e)] = c
    return out


def module_to_vector(f, rank):
    vec = [dict() for _ in range(rank)]
    for (pos, e), c in f.items():
        vec[pos][e] = c
    return vec


def combine_rows(coeffs, rows, dom, width):
    """Sum_k coeffs[k] * rows[k] where coeffs are ring polys and rows are vectors."""
    out = [dict() for _ in range(width)]
    for q, row in zip(coeffs, rows):
        if not q:
            continue
        for j in range(width):
            if row[j]:
                out[j] = radd(out[j], rmul(q, row[j], dom), dom)
    return out


# --- reduction --------------------------------------------------------------


def normal_form(f, basis, tkey, dom, leads=None, track=False, full=True):
    """Divide ``f`` by ``basis``; returns ``(remainder, quotients)``.

    ``quotients[i]`` is a ring polynomial with ``f = sum q_i b_i + remainder``.
    With ``full=False`` only the leading term is reduced (top reduction).
    """
    if leads is None:
        leads = [leading(b, tkey) for b in basis]
    quots = [dict() for _ in basis] if track else None
    rem = {}
    f = dict(f)
    while f:
        t, c = leading(f, tkey)
        pos, e = t
        for i, ((lpos, le), lc) in enumerate(leads):
            if lpos == pos and divides_mono(le, e) and dom.divides(lc, c):
                q = dom.quo(c, lc)
                shift = mono_sub(e, le)
                f = add_scaled(f, basis[i], -q, shift, dom)
                if track:
                    quots[i][shift] = dom.canon(quots[i].get(shift, 0) + q)
                    if dom.iszero(quots[i][shift]):
                        del quots[i][shift]
                break
        else:
            if not full:
                rem.update(f)
                break
            rem[t] = c
            del f[t]
    return rem, quots


def s_element(f, g, lf, lg, dom):
    """S-element of f, g (same leading position); returns (S, (cf, sf), (cg, sg))."""
    (pos, ef), cf0 = lf
    (_, eg), cg0 = lg
    m = mono_lcm(ef, eg)
    cf, cg = dom.pair_cofactors(cf0, cg0)
    sf, sg = mono_sub(m, ef), mono_sub(m, eg)
    s = add_scaled({}, f, cf, sf, dom)
    s = add_scaled(s, g, -cg, sg, dom)
    return s, (cf, sf), (cg, sg)


# --- Buchberger -------------------------------------------------------------


class GBResult:
    """Basis plus optional representation rows (basis[i] = sum_j rows[i][j] * input[j])."""

    def __init__(self, basis, rows, tkey, dom):
        self.basis = basis
        self.rows = rows
        self.tkey = tkey
        self.dom = dom
        self.leads = [leading(b, tkey) for b in basis]

    def reduce(self, f, track=False):
        return normal_form(f, self.basis, self.tkey, self.dom, leads=self.leads, track=track)

    def contains(self, f) -> bool:
        rem, _ = self.reduce(f)
        return not rem


def buchberger(gens, order, dom, nvars, track=False, reduced=True):
    """Gröbner basis (strong over a DVR) of the module generated by ``gens``."""
    tkey = term_key(order)
    mkey = monomial_key(order)
    r = len(gens)
    one = (0,) * nvars
    basis = []
    rows = []
    for i, g in enumerate(gens):
        g = {k: dom.canon(v) for k, v in g.items() if not dom.iszero(v)}
        if not g:
            continue
        basis.append(g)
        if track:
            row = [dict() for _ in range(r)]
            row[i] = {one: dom.canon(1)}
            rows.append(row)
    leads = [leading(b, tkey) for b in basis]
    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2) if leads[i][0][0] == leads[j][0][0]]

    def pair_key(ij):
        i, j = ij
        m = mono_lcm(leads[i][0][1], leads[j][0][1])
        return (mkey(m), ij)

    rank_one = all(k[0] == 0 for b in basis for k in b)
    while pairs:
        pairs.sort(key=pair_key, reverse=True)
        i, j = pairs.pop()
        ei, ej = leads[i][0][1], leads[j][0][1]
        if dom.is_field and rank_one and all(min(a, b) == 0 for a, b in zip(ei, ej)):
            continue
        s, (ci, si), (cj, sj) = s_element(basis[i], basis[j], leads[i], leads[j], dom)
        rem, quots = normal_form(s, basis, tkey, dom, leads=leads, track=track)
        if not rem:
            continue
        if track:
            row = [dict() for _ in range(r)]
            for k in range(r):
                acc = radd_scaled({}, rows[i][k], ci, si, dom)
                acc = radd_scaled(acc, rows[j][k], -cj, sj, dom)
                row[k] = acc
            sub = combine_rows(quots, rows, dom, r)
            row = [radd(a, b, dom, sign=-1) for a, b in zip(row, sub)]
            rows.append(row)
        basis.append(rem)
        leads.append(leading(rem, tkey))
        new = len(basis) - 1
        pairs.extend((k, new) for k in range(new) if leads[k][0][0] == leads[new][0][0])
    if reduced:
        basis, rows = _minimalize(basis, rows, tkey, dom)
        basis, rows = _interreduce(basis, rows, tkey, dom, track)
    return GBResult(basis, rows if track else None, tkey, dom)


def _lt_divides(la, lb, dom):
    (pa, ea), ca = la
    (pb, eb), cb = lb
    return pa == pb and divides_mono(ea, eb) and dom.divides(ca, cb)


def _minimalize(basis, rows, tkey, dom):
    leads = [leading(b, tkey) for b in basis]
    order = sorted(range(len(basis)), key=lambda i: (tkey(leads[i][0]), i))
    keep = []
    for i in order:
        if any(_lt_divides(leads[k], leads[i], dom) for k in keep):
            continue
        keep.append(i)
    keep.sort(key=lambda i: tkey(leads[i][0]))
    return [basis[i] for i in keep], ([rows[i] for i in keep] if rows else rows)


def _interreduce(basis, rows, tkey, dom, track):
    """Tail-reduce each element by the others and normalise leading coefficients."""
    basis = list(basis)
    rows = list(rows) if rows else rows
    r = len(rows[0]) if rows else 0
    for i in range(len(basis)):
        g = basis[i]
        lt, lc = leading(g, tkey)
        others = [b for k, b in enumerate(basis) if k != i]
        tail = {k: v for k, v in g.items() if k != lt}
        rem, quots = normal_form(tail, others, tkey, dom, track=track)
        new = dict(rem)
        new[lt] = lc
        mf = dom.monic_factor(lc)
        new = {k: dom.canon(v * mf) for k, v in new.items()}
        if track:
            other_rows = [rw for k, rw in enumerate(rows) if k != i]
            sub = combine_rows(quots, other_rows, dom, r)
            row = [radd(a, b, dom, sign=-1) for a, b in zip(rows[i], sub)]
            rows[i] = [{e: dom.canon(c * mf) for e, c in part.items()} for part in row]
        basis[i] = new
    return basis, rows


# --- syzygies ---------------------------------------------------------------


def syzygies_of(gens, order, dom, nvars):
    """Generators of the first syzygy module of a list of ring polynomials (field case).

    Schreyer's S-pair relations on a reduced basis, pulled back through the
    representation matrices, together with the rows of ``I - B*A``.
    """
    if not dom.is_field:
        raise ValueError("syzygies are computed over a field")
    r = len(gens)
    mods = [ring_to_module(g) for g in gens]
    gb = buchberger(mods, order, dom, nvars, track=True)
    basis, A = gb.basis, gb.rows
    s = len(basis)
    out = []
    for i, j in combinations(range(s), 2):
        sel, (ci, si), (cj, sj) = s_element(basis[i], basis[j], gb.leads[i], gb.leads[j], dom)
        rem, quots = gb.reduce(sel, track=True)
        assert not rem, "reduced basis failed the Buchberger criterion"
        sigma = [dict() for _ in range(s)]
        sigma[i] = radd_scaled(sigma[i], {(0,) * nvars: 1}, ci, si, dom)
        sigma[j] = radd_scaled(sigma[j], {(0,) * nvars: 1}, -cj, sj, dom)
        sigma = [radd(a, q, dom, sign=-1) for a, q in zip(sigma, quots)]
        out.append(combine_rows(sigma, A, dom, r))
    for i in range(r):
        rem, quots = gb.reduce(mods[i], track=True)
        assert not rem
        back = combine_rows(quots, A, dom, r)
        unit = [dict() for _ in range(r)]
        unit[i] = {(0,) * nvars: 1}
        out.append([radd(a, b, dom, sign=-1) for a, b in zip(unit, back)])
    seen = set()
    result = []
    for vec in out:
        if not any(vec):
            continue
        key = tuple(tuple(sorted(v.items())) for v in vec)
        if key in seen:
            continue
        seen.add(key)
        result.append(vec)
    return result


def apply_vector(vec, gens, dom):
    """sum_i vec[i] * gens[i] for ring polynomials."""
    acc = {}
    for a, g in zip(vec, gens):
        if a and g:
            acc = radd(acc, rmul(a, g, dom), dom)
    return acc


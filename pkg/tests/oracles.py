"""Independent reference computations used by the tests.

Nothing here imports the package under test: these are slow, direct
implementations (exact rationals, brute force, plain Hensel lifting) that the
fast code is compared against.
"""

from fractions import Fraction
from itertools import product


def vp_slow(n, p):
    if n == 0:
        return float("inf")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# --- Q[a]/(f) with exact rationals --------------------------------------------


def qmul(a, b, f):
    d = len(f) - 1
    prod = [Fraction(0)] * (2 * d - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d):
                prod[k - d + i] -= c * f[i]
        prod[k] = 0
    return prod[:d]


def qadd(a, b):
    return [x + y for x, y in zip(a, b)]


def log_series(x, f, terms):
    """sum_{k>=1} (-1)^(k+1) x^k / k with exact rationals."""
    d = len(f) - 1
    acc = [Fraction(0)] * d
    pw = [Fraction(c) for c in x]
    for k in range(1, terms + 1):
        sign = 1 if k % 2 else -1
        acc = qadd(acc, [sign * c / k for c in pw])
        pw = qmul(pw, x, f)
    return acc


def exp_series(x, f, terms):
    d = len(f) - 1
    acc = [Fraction(1)] + [Fraction(0)] * (d - 1)
    term = list(acc)
    for k in range(1, terms + 1):
        term = [c / k for c in qmul(term, x, f)]
        acc = qadd(acc, term)
    return acc


def to_residues(v, p, N):
    m = p**N
    out = []
    for c in v:
        c = Fraction(c)
        assert c.denominator % p != 0, "series term is not p-integral"
        out.append(c.numerator * pow(c.denominator, -1, m) % m)
    return out


# --- polynomials over Z as {exps: int} --------------------------------------------


def peval(f, pt, mod=None):
    acc = 0
    for e, c in f.items():
        t = c
        for x, k in zip(pt, e):
            t *= x**k if mod is None else pow(x, k, mod)
        acc += t
    return acc if mod is None else acc % mod


def pderiv(f, i):
    out = {}
    for e, c in f.items():
        if e[i]:
            k = list(e)
            k[i] -= 1
            out[tuple(k)] = out.get(tuple(k), 0) + c * e[i]
    return out


def brute_zeros_mod_p(polys, p, nvars):
    return [pt for pt in product(range(p), repeat=nvars) if all(peval(f, pt, p) == 0 for f in polys)]


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return _det2(m)
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def approximate_zeros(polys, p, nvars, depth, budget=200_000):
    """All points mod p^depth where every polynomial vanishes mod p^depth."""
    level = [pt for pt in product(range(p), repeat=nvars) if all(peval(f, pt, p) == 0 for f in polys)]
    for k in range(1, depth):
        mod = p ** (k + 1)
        nxt = []
        for pt in level:
            for digits in product(range(p), repeat=nvars):
                q = tuple(x + d * p**k for x, d in zip(pt, digits))
                if all(peval(f, q, mod) == 0 for f in polys):
                    nxt.append(q)
        if len(nxt) > budget:
            raise RuntimeError("too many approximate zeros")
        level = nxt
    return level


def hensel_zero_count(polys, p, nvars, depth=6):
    """Lower bound on the number of common zeros in Z_p^n of a square system.

    A point a mod p^depth counts when either a centred representative is an
    exact integer zero, or the Jacobian determinant has valuation delta with
    2*delta < depth, in which case Hensel's lemma gives a unique true zero in
    the ball of radius p^-(delta+1) around a.  Distinct balls hold distinct
    zeros; exact zeros inside a counted ball are not counted twice.
    """
    assert len(polys) == nvars
    mod = p**depth
    jac = [[pderiv(f, i) for i in range(nvars)] for f in polys]
    balls = {}
    exact = set()
    for a in approximate_zeros(polys, p, nvars, depth):
        centred = tuple(x - mod if x > mod // 2 else x for x in a)
        if all(peval(f, centred) == 0 for f in polys):
            exact.add(centred)
            continue
        det = _det([[peval(g, a) for g in row] for row in jac])
        delta = vp_slow(det, p)
        if delta != float("inf") and 2 * delta < depth:
            r = delta + 1
            balls[tuple(x % p**r for x in a)] = r
    count = len(balls)
    for z in exact:
        if not any(tuple(x % p**r for x in z) == c for c, r in balls.items()):
            count += 1
    return count

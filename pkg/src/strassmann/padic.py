"""Capped-precision p-adic integers and the quotient rings Z_p[a]/(f).

A :class:`PadicScalar` is a residue modulo ``p**prec``; ``prec == 0`` is the
absorbing "nothing known" element.  Precision follows the usual interval rule:
sums keep the smaller precision, products gain the valuation of the other
factor.  The product of two inexact zeros uses the convention that the
valuation of ``0 + O(p^N)`` is ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class PrecisionError(ArithmeticError):
    """Raised when an operation needs more p-adic precision than is available."""


class PrimeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AtLeast:
    """Lower bound on a valuation that cannot be decided at the working precision."""

    bound: int

    def __int__(self):
        return self.bound

    def __repr__(self):
        return f"AtLeast({self.bound})"

    def __str__(self):
        return f"at-least-{self.bound}"


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(n: int, p: int) -> int:
    """Legendre's formula for v_p(n!)."""
    v = 0
    q = p
    while q <= n:
        v += n // q
        q *= p
    return v


def _ilog(n: int, p: int) -> int:
    k = 0
    q = p
    while q <= n:
        q *= p
        k += 1
    return k


def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        s += n % p
        n //= p
    return s


@dataclass(frozen=True)
class PadicScalar:
    p: int
    residue: int
    prec: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("prime must be >= 2")
        if self.prec < 0:
            raise ValueError("precision must be >= 0")
        object.__setattr__(self, "residue", self.residue % self.p**self.prec)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def valuation(self) -> int | AtLeast:
        if self.residue == 0:
            return AtLeast(self.prec)
        return vp(self.residue, self.p)

    def _val_int(self) -> int:
        return self.prec if self.residue == 0 else vp(self.residue, self.p)

    def is_exact_zero_at_prec(self) -> bool:
        return self.residue == 0

    def _check(self, other: "PadicScalar"):
        if not isinstance(other, PadicScalar):
            raise TypeError(f"cannot combine PadicScalar with {type(other).__name__}")
        if other.p != self.p:
            raise PrimeMismatchError(f"primes differ: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check(other)
        n = min(self.prec, other.prec)
        return PadicScalar(self.p, self.residue + other.residue, n)

    def __sub__(self, other):
        self._check(other)
        n = min(self.prec, other.prec)
        return PadicScalar(self.p, self.residue - other.residue, n)

    def __neg__(self):
        return PadicScalar(self.p, -self.residue, self.prec)

    def __mul__(self, other):
        self._check(other)
        if self.prec == 0 or other.prec == 0:
            return PadicScalar(self.p, 0, 0)
        va, vb = self._val_int(), other._val_int()
        n = min(self.prec + vb, other.prec + va, self.prec + other.prec)
        return PadicScalar(self.p, self.residue * other.residue, n)

    def exact_divide_by_p(self, l: int) -> "PadicScalar":
        """Divide by ``p**l``; loses exactly ``l`` digits of precision."""
        if l < 0:
            raise ValueError("l must be nonnegative")
        if l > self.prec:
            raise PrecisionError(f"cannot divide by p^{l} at precision {self.prec}")
        v = self._val_int()
        if v < l:
            raise PrecisionError(f"valuation {v} < {l}")
        return PadicScalar(self.p, self.residue // self.p**l, self.prec - l)

    def lift(self) -> int:
        return self.residue

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.prec})"


def scalar_arith(a: PadicScalar, b: PadicScalar, kind: str) -> PadicScalar:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# Z_p[a]/(f)


def _polymulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], mod: int | None) -> list[int]:
    """Product of coefficient vectors (low degree first) reduced by monic f."""
    d = len(f) - 1
    prod = [0] * (2 * d - 1 if d else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            # a^k = -sum f_i a^(k-d+i)
            for i in range(d):
                prod[k - d + i] -= c * f[i]
            prod[k] = 0
    out = prod[:d] + [0] * max(0, d - len(prod))
    if mod is not None:
        out = [c % mod for c in out]
    return out


@dataclass(frozen=True)
class NumberRingElement:
    """Element of Z_p[a]/(f) known modulo p**prec, coefficients low degree first."""

    p: int
    modulus_poly: tuple[int, ...]
    coeffs: tuple[int, ...]
    prec: int

    def __post_init__(self):
        f = tuple(int(c) for c in self.modulus_poly)
        if len(f) < 2 or f[-1] != 1:
            raise ValueError("modulus polynomial must be monic of degree >= 1")
        d = len(f) - 1
        if len(self.coeffs) != d:
            raise ValueError(f"expected {d} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "modulus_poly", f)
        m = self.p**self.prec
        object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))

    @classmethod
    def from_ints(cls, p, f, coeffs, prec):
        d = len(f) - 1
        coeffs = list(coeffs) + [0] * (d - len(coeffs))
        return cls(p, tuple(f), tuple(coeffs), prec)

    @classmethod
    def one(cls, p, f, prec):
        return cls.from_ints(p, f, [1], prec)

    @property
    def degree(self) -> int:
        return len(self.modulus_poly) - 1

    def valuation(self) -> int | AtLeast:
        vals = [vp(c, self.p) for c in self.coeffs if c]
        return min(vals) if vals else AtLeast(self.prec)

    def _val_int(self) -> int:
        v = self.valuation()
        return int(v)

    def _check(self, other):
        if not isinstance(other, NumberRingElement):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        if other.p != self.p:
            raise PrimeMismatchError(f"primes differ: {self.p} vs {other.p}")
        if other.modulus_poly != self.modulus_poly:
            raise ValueError("elements live in different rings")

    def __add__(self, other):
        self._check(other)
        n = min(self.prec, other.prec)
        return NumberRingElement(self.p, self.modulus_poly,
                                 tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), n)

    def __sub__(self, other):
        self._check(other)
        n = min(self.prec, other.prec)
        return NumberRingElement(self.p, self.modulus_poly,
                                 tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), n)

    def __neg__(self):
        return NumberRingElement(self.p, self.modulus_poly, tuple(-c for c in self.coeffs), self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return NumberRingElement(self.p, self.modulus_poly,
                                     tuple(c * other for c in self.coeffs), self.prec)
        self._check(other)
        if self.prec == 0 or other.prec == 0:
            return NumberRingElement(self.p, self.modulus_poly, (0,) * self.degree, 0)
        n = min(self.prec + other._val_int(), other.prec + self._val_int(), self.prec + other.prec)
        prod = _polymulmod(self.coeffs, other.coeffs, self.modulus_poly, self.p**n)
        return NumberRingElement(self.p, self.modulus_poly, tuple(prod), n)

    __rmul__ = __mul__

    def with_prec(self, prec: int) -> "NumberRingElement":
        if prec > self.prec:
            raise PrecisionError("cannot raise precision")
        return NumberRingElement(self.p, self.modulus_poly, self.coeffs, prec)

    def is_one_mod_p(self) -> bool:
        return self.coeffs[0] % self.p == 1 and all(c % self.p == 0 for c in self.coeffs[1:])

    def __repr__(self):
        terms = " + ".join(f"{c}*a^{i}" for i, c in enumerate(self.coeffs) if c) or "0"
        return f"{terms} + O({self.p}^{self.prec})"


def _check_odd(p):
    if p == 2:
        raise ValueError("exp/log are only implemented for odd primes")


def _pow_series_terms(x: Sequence[int], f, nmax: int, mod: int) -> list[list[int]]:
    """[x^0, x^1, ..., x^nmax] as integer vectors modulo ``mod``."""
    d = len(f) - 1
    out = [[1] + [0] * (d - 1)]
    for _ in range(nmax):
        out.append(_polymulmod(out[-1], x, f, mod))
    return out


def padic_log(u: NumberRingElement) -> NumberRingElement:
    """log(1 + x) for ``u = 1 + x`` with x divisible by p, at the precision of ``u``."""
    p, f, N = u.p, u.modulus_poly, u.prec
    _check_odd(p)
    if N == 0:
        return NumberRingElement(p, f, (0,) * u.degree, 0)
    if not u.is_one_mod_p():
        raise ValueError("log needs an element congruent to 1 mod p")
    x = [(u.coeffs[0] - 1)] + list(u.coeffs[1:])
    if all(c == 0 for c in x):
        return NumberRingElement(p, f, (0,) * u.degree, N)
    c = min(vp(a, p) for a in x if a)
    c = min(c, N)
    # term n has valuation >= n*c - v_p(n); keep every n where that bound is < N
    # n*c - floor(log_p n) never decreases, and bounds n*c - v_p(n) from below
    terms = []
    n = 1
    while n * c - _ilog(n, p) < N:
        if n * c - vp(n, p) < N:
            terms.append(n)
        n += 1
    nmax = max(terms)
    extra = max(vp(n, p) for n in terms)
    work = p ** (N + extra)
    powers = _pow_series_terms(x, f, nmax, work)
    mod = p**N
    acc = [0] * u.degree
    for n in terms:
        v = vp(n, p)
        unit_inv = pow(n // p**v, -1, mod)
        sign = 1 if n % 2 else -1
        for i, a in enumerate(powers[n]):
            acc[i] += sign * (a // p**v) * unit_inv
    return NumberRingElement(p, f, tuple(a % mod for a in acc), N)


def padic_exp(x: NumberRingElement) -> NumberRingElement:
    """exp(x) for x divisible by p (p odd), at the precision of ``x``."""
    p, f, N = x.p, x.modulus_poly, x.prec
    _check_odd(p)
    if N == 0:
        return NumberRingElement(p, f, (0,) * x.degree, 0)
    if any(a % p for a in x.coeffs):
        raise ValueError("exp needs an element of valuation >= 1")
    if all(a == 0 for a in x.coeffs):
        return NumberRingElement.one(p, f, N)
    c = min(min(vp(a, p) for a in x.coeffs if a), N)
    # term k has valuation >= k*c - v_p(k!) >= k*c - (k - s_p(k))/(p-1)
    kmax = 0
    k = 1
    while True:
        bound = k * c - (k - digit_sum(k, p)) // (p - 1)
        if bound < N:
            kmax = k
        elif k * c - k / (p - 1) >= N:
            break
        k += 1
    extra = vp_factorial(kmax, p)
    work = p ** (N + extra)
    powers = _pow_series_terms(list(x.coeffs), f, kmax, work)
    mod = p**N
    acc = [0] * x.degree
    fact = 1
    for k in range(kmax + 1):
        if k:
            fact *= k
        v = vp(fact, p)
        unit_inv = pow(fact // p**v, -1, mod)
        for i, a in enumerate(powers[k]):
            acc[i] += (a // p**v) * unit_inv
    return NumberRingElement(p, f, tuple(a % mod for a in acc), N)


def inverse(u: NumberRingElement) -> NumberRingElement:
    """Inverse of a unit of Z_p[a]/(f) by Newton iteration."""
    p, f, N = u.p, u.modulus_poly, u.prec
    d = u.degree
    # solve mod p by linear algebra over F_p, then lift
    mat = _mult_matrix(u.coeffs, f, p)
    rhs = [1] + [0] * (d - 1)
    y0 = _solve_mod_p(mat, rhs, p)
    y = NumberRingElement(p, f, tuple(y0), N)
    two = NumberRingElement.from_ints(p, f, [2], N)
    prec = 1
    while prec < N:
        y = y * (two - u * y)
        y = NumberRingElement(p, f, y.coeffs, N)
        prec *= 2
    return y


def _mult_matrix(a, f, mod):
    """Matrix of multiplication by a in the power basis (columns = images of a^j)."""
    d = len(f) - 1
    cols = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        cols.append(_polymulmod(a, e, f, mod))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _solve_mod_p(mat, rhs, p):
    n = len(mat)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ZeroDivisionError("element is not a unit mod p")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, p)
        aug[col] = [(v * inv) % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % p:
                fac = aug[r][col]
                aug[r] = [(a - fac * b) % p for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]

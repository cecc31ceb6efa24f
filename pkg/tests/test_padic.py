import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exp_series, log_series, to_residues, vp_slow
from strassmann.padic import (
    AtLeast,
    NumberRingElement,
    PadicScalar,
    PrecisionError,
    PrimeMismatchError,
    inverse,
    padic_exp,
    padic_log,
    scalar_arith,
    vp,
    vp_factorial,
)

QUINTIC = (-1, 0, -1, 1, -1, 1)  # x^5 - x^4 + x^3 - x^2 - 1, low degree first
V1 = (-4, -5, 5, -5, 5)


def S(r, n, p=5):
    return PadicScalar(p, r, n)


class TestScalars:
    def test_add_uses_smaller_precision(self):
        out = S(3, 3) + S(4, 2)
        assert (out.residue, out.prec) == (7, 2)

    def test_mul_valuations_add(self):
        out = S(5, 3) * S(5, 3)
        assert (out.residue, out.prec) == (25, 4)

    def test_mul_of_two_zeros(self):
        out = S(0, 2) * S(0, 2)
        assert (out.residue, out.prec) == (0, 4)

    def test_valuation(self):
        assert S(50, 4).valuation() == 2
        assert S(3, 1).valuation() == 0
        v = S(0, 3).valuation()
        assert isinstance(v, AtLeast) and str(v) == "at-least-3"

    def test_divide_by_p(self):
        out = S(25, 4).exact_divide_by_p(2)
        assert (out.residue, out.prec) == (1, 2)
        out = S(0, 3).exact_divide_by_p(1)
        assert (out.residue, out.prec) == (0, 2)
        with pytest.raises(PrecisionError):
            S(15, 3).exact_divide_by_p(2)

    def test_prime_mismatch(self):
        with pytest.raises(PrimeMismatchError):
            S(1, 2, 5) + S(1, 2, 7)
        with pytest.raises(ValueError):
            scalar_arith(S(1, 2), S(1, 2), "div")

    @settings(max_examples=200, deadline=None)
    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(1, 6), st.integers(1, 6),
           st.integers(0, 5**6), st.integers(0, 5**6))
    def test_representative_independence(self, a, b, na, nb, da, db):
        """Changing inputs by multiples of p^N only moves the output within its precision."""
        p = 5
        x, y = S(a, na), S(b, nb)
        xx, yy = S(a + da * p**na, na), S(b + db * p**nb, nb)
        for kind in ("add", "sub", "mul"):
            r1, r2 = scalar_arith(x, y, kind), scalar_arith(xx, yy, kind)
            assert r1.prec == r2.prec
            assert (r1.residue - r2.residue) % p**r1.prec == 0

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 10**8), st.integers(0, 60))
    def test_vp_and_factorial(self, n, m):
        assert vp(n, 3) == vp_slow(n, 3)
        fact = 1
        for k in range(2, m + 1):
            fact *= k
        assert vp_factorial(m, 5) == vp_slow(fact, 5)


def rand_elem(rng, N, v=1, f=QUINTIC, p=5):
    return NumberRingElement(p, f, tuple(p**v * rng.randrange(p**N) for _ in range(len(f) - 1)), N)


class TestNumberRing:
    def test_ring_multiplication_matches_exact(self):
        rng = random.Random(3)
        for _ in range(20):
            a, b = rand_elem(rng, 6, 0), rand_elem(rng, 6, 0)
            from oracles import qmul

            exact = qmul([int(c) for c in a.coeffs], [int(c) for c in b.coeffs], QUINTIC)
            assert list((a * b).coeffs) == [int(c) % 5**6 for c in exact]

    def test_inverse(self):
        rng = random.Random(5)
        one = NumberRingElement.one(5, QUINTIC, 8)
        x = NumberRingElement.from_ints(5, QUINTIC, [0, 1], 8)
        assert (x * inverse(x)).coeffs == one.coeffs
        for _ in range(10):
            u = one + rand_elem(rng, 8, 1)
            assert (u * inverse(u)).coeffs == one.coeffs

    def test_log_of_one_and_exp_of_zero(self):
        one = NumberRingElement.one(5, QUINTIC, 10)
        zero = NumberRingElement(5, QUINTIC, (0,) * 5, 10)
        assert padic_log(one).coeffs == zero.coeffs
        assert padic_exp(zero).coeffs == one.coeffs

    def test_log_needs_one_mod_p(self):
        with pytest.raises(ValueError):
            padic_log(NumberRingElement.from_ints(5, QUINTIC, [2], 5))
        with pytest.raises(ValueError):
            padic_exp(NumberRingElement.from_ints(5, QUINTIC, [1], 5))
        with pytest.raises(ValueError):
            padic_log(NumberRingElement.from_ints(2, (1, 1), [1], 5))

    def test_log_of_v1(self):
        v1 = NumberRingElement.from_ints(5, QUINTIC, V1, 10)
        lg = padic_log(v1)
        assert all(c % 5 == 0 for c in lg.coeffs)
        assert padic_exp(lg).coeffs == v1.coeffs

    def test_log_against_rational_series(self):
        rng = random.Random(11)
        N = 8
        for _ in range(5):
            x = rand_elem(rng, N, 1)
            u = NumberRingElement.one(5, QUINTIC, N) + x
            want = to_residues(log_series(list(x.coeffs), QUINTIC, 3 * N + 6), 5, N)
            assert list(padic_log(u).coeffs) == want

    def test_exp_against_rational_series(self):
        rng = random.Random(12)
        N = 8
        for _ in range(5):
            x = rand_elem(rng, N, 1)
            want = to_residues(exp_series(list(x.coeffs), QUINTIC, 3 * N + 6), 5, N)
            assert list(padic_exp(x).coeffs) == want

    def test_exp_is_multiplicative(self):
        rng = random.Random(13)
        for _ in range(20):
            x = rand_elem(rng, 10, 1)
            one = NumberRingElement.one(5, QUINTIC, 10)
            assert (padic_exp(x) * padic_exp(-x)).with_prec(10).coeffs == one.coeffs

    def test_roundtrips_other_ring(self):
        rng = random.Random(14)
        f = (-2, 0, 1)  # x^2 - 2 at p = 7
        for _ in range(20):
            x = rand_elem(rng, 9, 1, f, 7)
            assert padic_log(padic_exp(x)).coeffs == x.coeffs

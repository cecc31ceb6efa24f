import random
from types import SimpleNamespace

import pytest
import sympy

from conftest import PINNED_U, PINNED_V
from strassmann.fppoly import FpPoly
from strassmann.skolem import (
    QUINTIC_INSTANCE,
    ThueInstance,
    build_disk_series,
    exact_inverse,
    norm,
    norm_form,
    search_solutions,
    surviving_pairs,
    unit_exponents,
    unit_lattice_mod_p,
    unit_order,
    unit_power_exact,
)

F = QUINTIC_INSTANCE["minpoly"]
A = sympy.Symbol("a")
SOLUTIONS = [(-1, -1), (0, -1), (1, 0), (5, 4)]


def to_expr(v):
    return sum(c * A**i for i, c in enumerate(v))


def from_expr(expr, d):
    coeffs = sympy.Poly(expr, A).all_coeffs()[::-1]
    return [int(c) for c in coeffs] + [0] * (d - len(coeffs))


def exact_power_oracle(u, vs, n, f):
    """u * prod v_j^n_j in Z[a]/(f), computed with sympy."""
    fx = to_expr(f)
    acc = to_expr(u)
    for v, k in zip(vs, n):
        base = to_expr(v) if k >= 0 else sympy.invert(to_expr(v), fx, domain=sympy.QQ)
        acc = sympy.rem(sympy.expand(acc * sympy.rem(base ** abs(k), fx)), fx)
    return from_expr(sympy.expand(acc), len(f) - 1)


class TestArithmetic:
    def test_norm_form_matches_resultant(self):
        fx = to_expr(F)
        rng = random.Random(0)
        for _ in range(20):
            x, y = rng.randrange(-9, 10), rng.randrange(-9, 10)
            want = sympy.resultant(fx, x - y * A, A)
            assert norm_form(x, y, F) == want

    def test_units_have_norm_one(self):
        for u in QUINTIC_INSTANCE["units"]:
            assert abs(norm(u, F)) == 1
        for u in QUINTIC_INSTANCE["units"]:
            inv = exact_inverse(u, F)
            prod = sympy.rem(sympy.expand(to_expr(u) * to_expr(inv)), to_expr(F))
            assert prod == 1

    def test_small_solutions(self, quintic):
        assert search_solutions(quintic) == SOLUTIONS

    def test_validation(self):
        with pytest.raises(ValueError):
            ThueInstance(F, 5, QUINTIC_INSTANCE["units"], rhs=2)
        with pytest.raises(ValueError):
            ThueInstance(F, 2, QUINTIC_INSTANCE["units"])
        with pytest.raises(ValueError):
            ThueInstance(F, 5, ((2, 0, 0, 0, 0),))


class TestDisks:
    def test_surviving_pairs(self, quintic):
        assert set(surviving_pairs(quintic)) == {(1, 0), (0, 4), (4, 4), (3, 4), (2, 4)}
        assert (0, 0) not in surviving_pairs(quintic)

    def test_every_solution_disk_survives(self, quintic):
        surv = set(surviving_pairs(quintic))
        for x in range(-60, 61):
            for y in range(-60, 61):
                if norm_form(x, y, F) == 1:
                    assert (x % 5, y % 5) in surv


class TestUnits:
    def test_order_divides_group_order(self):
        _, factors = sympy.factor_list(to_expr(F), modulus=5)
        group = 1
        for g, k in factors:
            group *= (5 ** sympy.degree(g, A) - 1) * 5 ** (sympy.degree(g, A) * (k - 1))
        for u in QUINTIC_INSTANCE["units"]:
            assert group % unit_order(u, F, 5) == 0

    def test_quadratic_lattice_index(self):
        # Z[sqrt 2] at p = 5: F_25, unit 1 + sqrt 2
        inst = SimpleNamespace(minpoly=(-2, 0, 1), p=5, units=((1, 1),), rank=1, degree=2)
        lat = unit_lattice_mod_p(inst)
        k, x = 1, [1, 1]
        while [c % 5 for c in x] not in ([1, 0], [4, 0]):
            x = [x[0] + 2 * x[1], x[0] + x[1]]
            k += 1
        assert lat.index == k

    def test_quintic_lattice(self, quintic):
        lat = unit_lattice_mod_p(quintic)
        assert lat.index == 624
        # pinned generators span the same lattice
        ws = [unit_exponents(quintic, v)[1] for v in PINNED_V]
        assert abs(sympy.Matrix(ws).det()) == lat.index
        for w in lat.basis:
            sol = sympy.Matrix(ws).T.solve(sympy.Matrix(w))
            assert all(c.is_integer for c in sol)

    def test_exponents_roundtrip(self, quintic):
        rng = random.Random(4)
        for _ in range(10):
            e = (rng.randrange(-20, 21), rng.randrange(-20, 21))
            sign = rng.choice([1, -1])
            w = unit_power_exact(quintic, e, sign)
            assert unit_exponents(quintic, w) == (sign, e)

    def test_pinned_values_are_unit_products(self, quintic):
        for v in PINNED_V + (PINNED_U[(0, 4)],):
            assert unit_exponents(quintic, v) is not None


@pytest.fixture(scope="module")
def disk():
    return build_disk_series(list(PINNED_U[(0, 4)]), [list(v) for v in PINNED_V], F, 5, 3)


class TestSeries:
    def test_reductions_are_multiples_of_one_line(self, disk):
        """F_2, F_3, F_4 mod 5 are 3(t2+1), (t2+1), 3(t2+1) up to one common unit."""
        listed = {2: 3, 3: 1, 4: 3}
        scale = None
        for i, c in listed.items():
            red = disk.normalized[i].reduce_mod_p()
            lam = red.terms.get((0, 1), 0) * pow(c, -1, 5) % 5
            assert red == FpPoly(5, 2, {(0, 0): c * lam, (0, 1): c * lam})
            scale = lam if scale is None else scale
            assert lam == scale != 0

    def test_value_at_origin(self, disk):
        u = PINNED_U[(0, 4)]
        for i, Fi in enumerate(disk.raw):
            assert Fi.evaluate((0, 0)) == u[i] % 5**Fi.prec

    def test_direct_power_oracle(self, disk):
        rng = random.Random(7)
        u, vs = PINNED_U[(0, 4)], PINNED_V
        W = disk.work_prec
        for _ in range(12):
            n = (rng.randrange(-3, 4), rng.randrange(-3, 4))
            want = exact_power_oracle(u, vs, n, F)
            for i, Fi in enumerate(disk.raw):
                c = sympy.Rational(want[i])
                assert Fi.evaluate(n) == int(c.p * pow(int(c.q), -1, 5**W)) % 5**W


class TestPipeline:
    def test_report(self, quintic_report):
        rep = quintic_report
        assert rep.verdict == "solved"
        assert rep.bound == 4
        assert rep.solutions == SOLUTIONS
        by_pair = {d.pair: d for d in rep.disks}
        assert by_pair[(0, 4)].bound_value == 2
        assert by_pair[(0, 4)].solutions == [(0, -1), (5, 4)]
        assert all(by_pair[(0, 4)].zero_checks.values())

    def test_disk_chain(self, quintic_report):
        disk = next(d for d in quintic_report.disks if d.pair == (0, 4))
        t1, t2 = FpPoly.var(5, 2, 0), FpPoly.var(5, 2, 1)
        one = FpPoly.constant(5, 2, 1)
        lv0, lv1 = disk.chain.levels[0], disk.chain.levels[1]
        assert lv0.reduction_basis == [t2 + one]
        assert set(lv1.reduction_basis) == {t2 + one, t1 * t1 - t1}
        assert disk.bound.level == 1

    def test_no_survivors_is_vacuous(self, monkeypatch):
        import strassmann.skolem as sk

        inst = ThueInstance(**{**QUINTIC_INSTANCE, "box": 0})
        monkeypatch.setattr(sk, "surviving_pairs", lambda inst: [])
        rep = sk.solve_thue(inst)
        assert rep.bound == 0 and rep.verdict == "solved" and rep.disks == []

import random

import pytest

from oracles import hensel_zero_count
from strassmann.fppoly import FpIdeal, FpPoly
from strassmann.rseries import ApproxIdeal, ApproxSeries, parse_series
from strassmann.saturation import run_chain
from strassmann.zerobound import bound_from_chain, multivariate_bound, strassmann_one_var

P = 5


def one_var(text):
    return parse_series(text, ("x",))


class TestOneVariable:
    def test_examples(self):
        assert strassmann_one_var(one_var("x^2 - 5 + O(5^4)")) == 2
        assert strassmann_one_var(one_var("5 + x + 25*x^2 + O(5^4)")) == 1

    def test_zero_series(self):
        with pytest.raises(ValueError):
            strassmann_one_var(one_var("0 + O(5^3)"))

    def test_needs_one_variable(self):
        with pytest.raises(ValueError):
            strassmann_one_var(parse_series("x + O(5^2)", ("x", "y")))

    def test_scaling_by_p_after_normalize(self):
        rng = random.Random(1)
        for _ in range(50):
            coeffs = {(k,): rng.randrange(-600, 600) for k in range(rng.randint(1, 6))}
            f = ApproxSeries(P, 1, coeffs, 6)
            if f.is_zero():
                continue
            k = rng.randint(1, 3)
            assert strassmann_one_var(f.scale(P**k).normalize()) == strassmann_one_var(f.normalize())

    def test_root_count_never_exceeds_bound(self):
        """Integer roots of an exact polynomial are at most the bound."""
        rng = random.Random(2)
        for _ in range(40):
            roots = [rng.randrange(-30, 30) for _ in range(rng.randint(0, 4))]
            poly = {(0,): rng.choice([1, 2, 3, 4, 6, 7])}
            for r in roots:
                nxt = {}
                for (e,), c in poly.items():
                    nxt[(e + 1,)] = nxt.get((e + 1,), 0) + c
                    nxt[(e,)] = nxt.get((e,), 0) - r * c
                poly = nxt
            f = ApproxSeries(P, 1, poly, 8)
            assert strassmann_one_var(f) >= len(set(roots))


class TestMultivariate:
    def test_two_simple_points(self):
        t1, t2 = FpPoly.var(P, 2, 0), FpPoly.var(P, 2, 1)
        one = FpPoly.constant(P, 2, 1)
        rep = multivariate_bound(FpIdeal.of([t2 + one, t1 * t1 - t1]))
        assert rep.verdict == "finite-certified"
        assert rep.points == [((0, 4), 1), ((1, 4), 1)]
        assert rep.bound == 2 and rep.dim_k == 2

    def test_fat_point(self):
        x, y = FpPoly.var(P, 2, 0), FpPoly.var(P, 2, 1)
        rep = multivariate_bound(FpIdeal.of([x * x, x * y, y * y]))
        assert rep.points == [((0, 0), 3)] and rep.bound == 3

    def test_non_rational_points_do_not_count(self):
        x, y = FpPoly.var(P, 2, 0), FpPoly.var(P, 2, 1)
        one = FpPoly.constant(P, 2, 1)
        rep = multivariate_bound(FpIdeal.of([x * x + one, y]))
        assert rep.bound == 2 and rep.dim_k == 2
        rep = multivariate_bound(FpIdeal.of([x * x - one * 2, y]))  # 2 is not a square mod 5
        assert rep.bound == 0 and rep.dim_k == 2

    def test_positive_dimension(self):
        rep = multivariate_bound(FpIdeal.of([FpPoly.var(P, 2, 0)]))
        assert rep.verdict == "not-finite" and rep.bound is None

    def test_budget(self):
        x = [FpPoly.var(101, 3, i) for i in range(3)]
        rep = multivariate_bound(FpIdeal.of([x[0] ** 2, x[1] ** 2, x[2] ** 2]), budget=100)
        assert rep.verdict == "unknown" and rep.coarse_bound == 8


class TestFromChain:
    def test_example_ideal(self):
        I = ApproxIdeal.of([parse_series(t, ("x", "y")) for t in ("x^2 + 5*y + O(5^4)", "x*y + O(5^4)")])
        rep = bound_from_chain(run_chain(I, exact=True))
        assert rep.level == 1 and rep.bound == 3
        assert hensel_zero_count([{(2, 0): 1, (0, 1): 5}, {(1, 1): 1}], P, 2) == 1

    def test_trivial_ideal(self):
        I = ApproxIdeal.of([parse_series("5 + 25*x + O(5^3)", ("x",))])
        rep = bound_from_chain(run_chain(I))
        assert rep.bound == 0 and rep.verdict == "finite-certified"

    def test_per_level_reports(self):
        I = ApproxIdeal.of([parse_series(t, ("x", "y")) for t in ("x^2 + 5*y + O(5^4)", "x*y + O(5^4)")])
        rep = bound_from_chain(run_chain(I, max_level=2))
        verdicts = [r.verdict for r in rep.per_level]
        assert verdicts[0] == "not-finite"
        assert all(v == "finite-certified" for v in verdicts[1:])
        assert rep.level == 1 and rep.bound == 3

    def test_threads_do_not_change_result(self, monkeypatch):
        I = ApproxIdeal.of([parse_series(t, ("x", "y")) for t in ("x^3 - x + 5*y + O(5^4)", "y^2 - y + O(5^4)")])
        base = bound_from_chain(run_chain(I)).to_dict()
        monkeypatch.setenv("STRASSMANN_THREADS", "4")
        assert bound_from_chain(run_chain(I)).to_dict() == base

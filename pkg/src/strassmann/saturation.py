"""The chain I = I_0 ⊆ I_1 ⊆ ... of colon ideals (I : p^l), built by lifting syzygies.

Each level adds, for every syzygy s of the reductions, the series
``g_s = (sum lift(s_i) g_i) / p``; one digit of precision is lost per level.
Every generator keeps an exact "ledger" vector ``B`` over Z[x] with
``g = p^(-l) * sum B_i f_i`` in terms of the input generators ``f_i``, which
drives redundancy pruning and, for exact inputs, the lifting certificate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .fppoly import DEFAULT_ORDER, FpIdeal, FpPoly, QuotientDimension, SyzygyBasis, quotient_dimension, syzygies
from .padic import PrecisionError
from .rseries import ApproxIdeal, ApproxSeries
from .zlocal import LocalIdeal, combination, module_contains, padd, pscale, reduce_mod_p

log = logging.getLogger(__name__)


@dataclass
class ChainGenerator:
    series: ApproxSeries
    ledger: tuple  # exact integer polynomials, one per input generator
    level: int  # level at which the generator first appeared
    index: int

    @property
    def label(self) -> str:
        return f"g{self.level}.{self.index}"


@dataclass
class ChainLevel:
    level: int
    generators: list
    reductions: list
    dimension: QuotientDimension
    reduction_basis: list
    dropped: list = field(default_factory=list)
    skipped_koszul: int = 0

    @property
    def precision(self) -> int:
        return min(g.series.prec for g in self.generators)

    def reduction_ideal(self) -> FpIdeal:
        return FpIdeal.of(self.reductions)


@dataclass(frozen=True)
class SaturationCertificate:
    kind: str  # trivial-ideal, dimension-criterion, syzygy-lifting or none
    level: int | None = None
    data: dict = field(default_factory=dict)


@dataclass
class SaturationChain:
    base: ApproxIdeal
    levels: list
    certificate: SaturationCertificate
    status: str  # certified, stable-uncertified or exhausted

    @property
    def last(self) -> ChainLevel:
        return self.levels[-1]


# --- helpers -------------------------------------------------------------------


def _lift(a: FpPoly) -> dict:
    """Canonical integer lift with coefficients in [0, p)."""
    return dict(a.terms)


def koszul_vectors(reds: list) -> list:
    r = len(reds)
    if not reds:
        return []
    zero = FpPoly(reds[0].p, reds[0].nvars)
    out = []
    for i in range(r):
        for j in range(i + 1, r):
            if reds[i].is_zero() and reds[j].is_zero():
                continue
            v = [zero] * r
            v[i] = reds[j]
            v[j] = -reds[i]
            out.append(v)
    return out


def _ledger_combination(lifts, ledgers):
    r0 = len(ledgers[0])
    out = []
    for k in range(r0):
        acc = {}
        for a, B in zip(lifts, ledgers):
            if a and B[k]:
                acc = padd(acc, _int_mul(a, B[k]))
        out.append(acc)
    return tuple(out)


def _int_mul(f, g):
    out = {}
    for e1, a in f.items():
        for e2, b in g.items():
            k = tuple(x + y for x, y in zip(e1, e2))
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


# --- one level ----------------------------------------------------------------


def saturation_step(gens: list, level: int, order=DEFAULT_ORDER):
    """Generators of I_{level+1} from those of I_level; returns (generators, skipped Koszul count)."""
    if not gens:
        return [], 0
    p = gens[0].series.p
    reds = [g.series.reduce_mod_p() for g in gens]
    syz = syzygies(reds, order)
    kos = SyzygyBasis(reds, koszul_vectors(reds))
    out = [ChainGenerator(g.series, tuple(pscale(b, p) for b in g.ledger), g.level, g.index)
           for g in gens]
    skipped = 0
    k = 0
    for s in syz.vectors:
        if kos.vectors and kos.contains(s, order):
            skipped += 1
            continue
        lifts = [_lift(a) for a in s]
        combo = None
        for a, g in zip(lifts, gens):
            if a:
                term = g.series.mul_exact(a)
                combo = term if combo is None else combo + term
        if combo is None:
            continue
        if combo.prec < 2:
            raise PrecisionError(f"precision exhausted at level {level}")
        gs = combo.divide_by_p()
        if gs.is_zero():
            log.debug("syzygy %s gives a series that vanishes at its precision", s)
            continue
        k += 1
        ledger = _ledger_combination(lifts, [g.ledger for g in gens])
        out.append(ChainGenerator(gs, ledger, level + 1, k))
    return out, skipped


def prune_generators(gens: list, order=DEFAULT_ORDER):
    """Drop generators whose ledger vector lies in the Z_(p)[x]-span of the others.

    Candidates are tried newest first, so generators from lower levels and with
    lower index are the ones kept on ties.  Returns (kept, dropped labels).
    """
    if not gens:
        return [], []
    p, n = gens[0].series.p, gens[0].series.nvars
    kept = list(gens)
    dropped = []
    for cand in sorted(gens, key=lambda g: (-g.level, -g.index)):
        others = [g for g in kept if g is not cand]
        if not others:
            break
        if not any(cand.ledger) or module_contains([list(o.ledger) for o in others],
                                                  list(cand.ledger), p, n, order):
            kept = others
            dropped.append(cand.label)
    return kept, dropped


# --- exact lifting test --------------------------------------------------------


@dataclass
class LiftingReport:
    saturated: bool
    witness: list | None  # an F_p syzygy that does not lift
    lifts: list  # pairs (F_p syzygy, exact lifted syzygy)
    koszul_skipped: int = 0


def lifting_check(gens: list, p: int, nvars: int, order=DEFAULT_ORDER) -> LiftingReport:
    """Decide whether the exact polynomials ``gens`` generate a p-saturated ideal of Z_(p)[x].

    A syzygy s of the reductions lifts iff ``(sum lift(s_i) g_i) / p`` lies in
    the ideal; the lifted syzygy is then ``lift(s) - p*c``.
    """
    gens = [{e: Fraction(c) for e, c in g.items() if c} for g in gens]
    for g in gens:
        if any(c.denominator % p == 0 for c in g.values()):
            raise ValueError("generators must be p-integral")
    reds = [FpPoly(p, nvars, reduce_mod_p(g, p)) for g in gens]
    syz = syzygies(reds, order)
    kos = SyzygyBasis(reds, koszul_vectors(reds))
    ideal = LocalIdeal(gens, p, nvars, order)
    lifts = []
    skipped = 0
    for s in syz.vectors:
        if kos.vectors and kos.contains(s, order):
            skipped += 1
            continue
        lifted_s = [_lift(a) for a in s]
        gs = pscale(combination(lifted_s, gens), Fraction(1, p))
        c = ideal.express(gs)
        if c is None:
            return LiftingReport(False, s, lifts, skipped)
        vec = [padd(a, pscale(ci, p), sign=-1) for a, ci in zip(lifted_s, c)]
        assert not combination(vec, gens), "lifted syzygy does not annihilate"
        lifts.append((s, vec))
    return LiftingReport(True, None, lifts, skipped)


def saturate_exact(gens: list, p: int, nvars: int, order=DEFAULT_ORDER, max_rounds=50):
    """Generators of the p-saturation of an exact ideal of Z_(p)[x].

    Repeats the colon step on exact polynomials until the lifting test passes.
    """
    gens = [{e: Fraction(c) for e, c in g.items() if c} for g in gens]
    gens = [g for g in gens if g]
    for _ in range(max_rounds):
        rep = lifting_check(gens, p, nvars, order)
        if rep.saturated:
            return gens
        ideal = LocalIdeal(gens, p, nvars, order)
        reds = [FpPoly(p, nvars, reduce_mod_p(g, p)) for g in gens]
        kos = SyzygyBasis(reds, koszul_vectors(reds))
        added = []
        for s in syzygies(reds, order).vectors:
            if kos.vectors and kos.contains(s, order):
                continue
            gs = pscale(combination([_lift(a) for a in s], gens), Fraction(1, p))
            if gs and not ideal.contains(gs):
                added.append(gs)
        if not added:
            raise AssertionError("lifting test failed but no new generator was found")
        gens = gens + added
    raise RuntimeError(f"saturation did not stabilise within {max_rounds} rounds")


# --- the chain ----------------------------------------------------------------


def _level_report(level, gens, order, dropped=(), skipped=0):
    reds = [g.series.reduce_mod_p() for g in gens]
    ideal = FpIdeal.of(reds)
    return ChainLevel(level, list(gens), reds, quotient_dimension(ideal, order),
                      ideal.groebner_basis(order), list(dropped), skipped)


def _exact_level_gens(gens, inputs, p, level):
    out = []
    for g in gens:
        f = combination([{e: Fraction(c) for e, c in b.items()} for b in g.ledger], inputs)
        out.append(pscale(f, Fraction(1, p**level)))
    return out


def run_chain(ideal: ApproxIdeal, max_level: int = 2, order=DEFAULT_ORDER, exact: bool = False,
              prune: bool = True) -> SaturationChain:
    """Build I_0, I_1, ... until a certificate fires, the reductions repeat, or max_level.

    With ``exact=True`` the generators are taken to be exact polynomials (the
    O-term is zero), which enables the syzygy-lifting certificate.
    """
    if max_level >= ideal.min_precision:
        raise ValueError("max_level must be smaller than the input precision")
    p, n = ideal.p, ideal.nvars
    r0 = len(ideal.gens)
    zero_poly = {}
    gens = []
    for i, f in enumerate(ideal.gens):
        led = [zero_poly] * r0
        led[i] = {(0,) * n: 1}
        gens.append(ChainGenerator(f, tuple(led), 0, i + 1))
    inputs = [{e: Fraction(c) for e, c in f.coeffs.items()} for f in ideal.gens]
    dropped = []
    if prune:
        gens, dropped = prune_generators([g for g in gens if not g.series.is_zero()], order)
    levels = [_level_report(0, gens, order, dropped)]
    level = 0
    while True:
        cur = levels[-1]
        r = len(cur.generators)
        krull = cur.dimension.krull
        cert = None
        if krull == -1:
            cert = SaturationCertificate("trivial-ideal", level, {"r": r, "n": n, "dim": krull})
        elif krull < n - r:
            cert = SaturationCertificate("trivial-ideal", level, {"r": r, "n": n, "dim": krull})
        elif krull == n - r:
            cert = SaturationCertificate("dimension-criterion", level, {"r": r, "n": n, "dim": krull})
        elif exact:
            exact_gens = _exact_level_gens(cur.generators, inputs, p, level)
            rep = lifting_check(exact_gens, p, n, order)
            if rep.saturated:
                cert = SaturationCertificate("syzygy-lifting", level,
                                             {"r": r, "n": n, "dim": krull, "lifted": len(rep.lifts)})
        if cert is not None:
            return SaturationChain(ideal, levels, cert, "certified")
        if level >= 1 and levels[-2].reduction_ideal().same_ideal(cur.reduction_ideal()):
            return SaturationChain(ideal, levels, SaturationCertificate("none"), "stable-uncertified")
        if level >= max_level:
            return SaturationChain(ideal, levels, SaturationCertificate("none"), "exhausted")
        nxt, skipped = saturation_step(cur.generators, level, order)
        dropped = []
        if prune:
            nxt, dropped = prune_generators(nxt, order)
        level += 1
        levels.append(_level_report(level, nxt, order, dropped, skipped))

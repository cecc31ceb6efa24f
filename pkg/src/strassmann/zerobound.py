"""Upper bounds on the number of common zeros in Z_p^n."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import _accel
from .fppoly import DEFAULT_ORDER, POINT_BUDGET, BudgetExceeded, FpIdeal, local_dimension, quotient_dimension, rational_points
from .padic import AtLeast, vp
from .rseries import ApproxSeries


@dataclass
class ZeroBoundReport:
    verdict: str  # finite-certified, not-finite or unknown
    dim_k: int | None
    points: list = field(default_factory=list)  # (point, local dimension)
    bound: int | None = None
    coarse_bound: int | None = None
    level: int | None = None
    chain_status: str | None = None
    note: str = ""
    per_level: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "bound": self.bound,
            "coarse_bound": self.coarse_bound,
            "dim_k": self.dim_k,
            "points": [{"point": list(z), "local_dim": d} for z, d in self.points],
            "level": self.level,
            "chain_status": self.chain_status,
            "note": self.note,
            "per_level": [r.to_dict() for r in self.per_level],
        }


def strassmann_one_var(f: ApproxSeries) -> int:
    """Largest n such that the coefficient of x^n has the minimal valuation."""
    if f.nvars != 1:
        raise ValueError("one-variable bound needs a series in one variable")
    m = f.content_valuation()
    if isinstance(m, AtLeast):
        raise ValueError("series is zero at its precision; the bound is indeterminate")
    return max(e[0] for e, c in f.coeffs.items() if vp(c, f.p) == m)


def multivariate_bound(reductions: FpIdeal, order=DEFAULT_ORDER, budget=POINT_BUDGET) -> ZeroBoundReport:
    """Sum of local dimensions at the F_p-points of a zero-dimensional reduction."""
    qd = quotient_dimension(reductions, order)
    if qd.krull == -1:
        return ZeroBoundReport("finite-certified", 0, [], 0, 0, note="reduction is the unit ideal")
    if qd.krull > 0:
        return ZeroBoundReport("not-finite", None,
                               note=f"reduction has Krull dimension {qd.krull}; this ideal gives no bound")
    try:
        pts = rational_points(reductions, budget)
    except BudgetExceeded as exc:
        return ZeroBoundReport("unknown", qd.vector_dim, coarse_bound=qd.vector_dim, note=str(exc))
    workers = min(_accel.thread_count(), max(1, len(pts)))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            dims = list(ex.map(lambda z: local_dimension(reductions, z), pts))
    else:
        dims = [local_dimension(reductions, z) for z in pts]
    points = list(zip(pts, dims))
    return ZeroBoundReport("finite-certified", qd.vector_dim, points, sum(dims), qd.vector_dim)


def bound_from_chain(chain, order=DEFAULT_ORDER, budget=POINT_BUDGET) -> ZeroBoundReport:
    """Bound from the chain level with the smallest finite bound (earliest on ties).

    Every level has the same zeros as the input, so each finite level gives a
    valid bound; per-level reports are attached.
    """
    cert = chain.certificate
    if cert.kind == "trivial-ideal":
        rep = ZeroBoundReport("finite-certified", 0, [], 0, 0, level=cert.level,
                              chain_status=chain.status, note="saturation is the unit ideal")
        return rep
    per_level = []
    best = None
    for lv in chain.levels:
        rep = multivariate_bound(lv.reduction_ideal(), order, budget)
        rep.level = lv.level
        per_level.append(rep)
        if rep.verdict == "finite-certified" and (best is None or rep.bound < best.bound):
            best = rep
    if best is None:
        out = ZeroBoundReport("unknown", None, level=None, chain_status=chain.status,
                              note="no level of the chain has a zero-dimensional reduction")
    else:
        out = ZeroBoundReport(best.verdict, best.dim_k, best.points, best.bound, best.coarse_bound,
                              best.level, chain.status, best.note)
    out.per_level = per_level
    return out

"""Command line interface: ``strassmann <subcommand> INPUT [options]``.

INPUT is a path to a JSON file or the JSON text itself.  An ideal is written as

    {"p": 5, "vars": ["t1", "t2"],
     "generators": [{"terms": [{"exps": [0, 1], "coeff": 1}, ...], "precision": 3}, ...]}

A generator may give ``"text"`` (the canonical form ``"3 + 2*t1^2*t2 + O(5^3)"``)
instead of ``"terms"``.  Reports are JSON with sorted keys.  Exit status is 0
for certified or solved outcomes, 2 for FAIL or inconclusive ones and 1 for
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .fppoly import POINT_BUDGET
from .rseries import DEFAULT_DEGREE_CAP, ApproxIdeal, ApproxSeries, parse_series
from .saturation import run_chain
from .skolem import ThueInstance, solve_thue
from .tategb import algorithm2, minimalize, reduce_basis, tate_buchberger
from .zerobound import bound_from_chain, strassmann_one_var

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

_TERM_SCHEMA = {
    "type": "object",
    "properties": {
        "exps": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "coeff": {"type": "integer"},
    },
    "required": ["exps", "coeff"],
    "additionalProperties": False,
}

IDEAL_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "vars": {"type": "array", "items": {"type": "string", "pattern": r"^[A-Za-z_][A-Za-z_0-9]*$"},
                 "minItems": 1, "uniqueItems": True},
        "generators": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "terms": {"type": "array", "items": _TERM_SCHEMA},
                    "text": {"type": "string"},
                    "precision": {"type": "integer", "minimum": 1},
                },
                "anyOf": [{"required": ["terms"]}, {"required": ["text"]}],
            },
        },
    },
    "required": ["p", "vars", "generators"],
}

_VEC = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

THUE_SCHEMA = {
    "type": "object",
    "properties": {
        "minpoly": _VEC,
        "p": {"type": "integer", "minimum": 3},
        "units": {"type": "array", "items": _VEC},
        "rhs": {"enum": [1, -1]},
        "N": {"type": "integer", "minimum": 2},
        "box": {"type": "integer", "minimum": 0},
        "pinned": {"$ref": "#/$defs/pinned"},
    },
    "required": ["minpoly", "p", "units"],
    "$defs": {
        "pinned": {
            "type": "object",
            "properties": {
                "v": {"type": "array", "items": _VEC},
                "u": {"type": "object", "patternProperties": {r"^-?\d+,-?\d+$": _VEC},
                      "additionalProperties": False},
            },
            "additionalProperties": False,
        }
    },
}

PIN_SCHEMA = {**THUE_SCHEMA["$defs"]["pinned"], "$defs": THUE_SCHEMA["$defs"]}


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    subcommand: str
    source: str
    output: str | None = None
    p: int | None = None
    N: int | None = None
    M: int | None = None
    max_level: int = 2
    order: str = "grevlex"
    degree_cap: int = DEFAULT_DEGREE_CAP
    point_budget: int = POINT_BUDGET
    box: int | None = None
    algorithm2: bool = False
    exact: bool = False
    pinned: dict = field(default_factory=dict)

    def check(self):
        if self.M is not None and self.N is not None and self.M > self.N:
            raise InputError("target precision M must not exceed N")
        for name in ("degree_cap", "point_budget"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.box is not None and self.box < 0:
            raise InputError("box must be non-negative")
        if self.max_level < 0:
            raise InputError("max_level must be non-negative")

    def as_dict(self):
        return {k: v for k, v in self.__dict__.items() if k not in ("source", "output")}


# --- JSON helpers --------------------------------------------------------------


def load_json(source: str):
    """Parse ``source`` as inline JSON or as a path to a JSON file."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _validate(data, schema, what):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise InputError(f"{what}: field {where}: {err.message}")


def parse_ideal(data, default_precision: int | None = None, prime: int | None = None) -> ApproxIdeal:
    """Build an ApproxIdeal from the JSON schema above; coefficients are reduced mod p^N."""
    if isinstance(data, str):
        data = load_json(data)
    _validate(data, IDEAL_SCHEMA, "ideal")
    p, names = data["p"], tuple(data["vars"])
    if prime is not None and prime != p:
        raise InputError(f"--prime {prime} disagrees with p = {p} in the input")
    n = len(names)
    gens = []
    for i, g in enumerate(data["generators"]):
        prec = g.get("precision", default_precision)
        if "terms" in g:
            if prec is None:
                raise InputError(f"ideal: field generators/{i}/precision: missing and no --precision given")
            coeffs = {}
            for j, t in enumerate(g["terms"]):
                e = tuple(t["exps"])
                if len(e) != n:
                    raise InputError(f"ideal: field generators/{i}/terms/{j}/exps: expected {n} exponents")
                coeffs[e] = coeffs.get(e, 0) + t["coeff"]
            gens.append(ApproxSeries(p, n, coeffs, prec, names))
        else:
            try:
                s = parse_series(g["text"], names)
            except ValueError as exc:
                raise InputError(f"ideal: field generators/{i}/text: {exc}") from exc
            if s.p != p:
                raise InputError(f"ideal: field generators/{i}/text: prime {s.p} differs from p = {p}")
            if "precision" in g and g["precision"] != s.prec:
                raise InputError(f"ideal: field generators/{i}: precision disagrees with the text")
            gens.append(s)
    return ApproxIdeal(p, n, tuple(gens), names)


def emit_series(f: ApproxSeries, order="grevlex") -> dict:
    return {
        "terms": [{"exps": list(e), "coeff": c} for e, c in f.sorted_terms(order)],
        "precision": f.prec,
        "text": f.to_text(),
    }


def emit_ideal(ideal, order="grevlex") -> dict:
    """Canonical JSON form of an ideal or a list of series."""
    gens = list(ideal.gens) if isinstance(ideal, ApproxIdeal) else list(ideal)
    if not gens:
        return {"generators": []}
    return {"p": gens[0].p, "vars": list(gens[0].names), "generators": [emit_series(g, order) for g in gens]}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- subcommands ---------------------------------------------------------------


def _ideal(cfg: JobConfig) -> ApproxIdeal:
    return parse_ideal(load_json(cfg.source), cfg.N, cfg.p)


def _chain_dict(chain) -> dict:
    names = chain.base.names
    return {
        "status": chain.status,
        "certificate": {"kind": chain.certificate.kind, "level": chain.certificate.level,
                        "data": chain.certificate.data},
        "levels": [
            {
                "level": lv.level,
                "precision": lv.precision,
                "generators": [{"label": g.label, "series": g.series.to_text()} for g in lv.generators],
                "reduction_basis": [b.to_str(names) for b in lv.reduction_basis],
                "krull": lv.dimension.krull,
                "vector_dim": lv.dimension.vector_dim,
                "dropped": lv.dropped,
                "skipped_koszul": lv.skipped_koszul,
            }
            for lv in chain.levels
        ],
    }


def _levels(cfg, ideal):
    # a chain over inputs known to O(p^N) has at most N - 1 levels
    return min(cfg.max_level, ideal.min_precision - 1)


def cmd_strassmann1(cfg: JobConfig):
    ideal = _ideal(cfg)
    if ideal.nvars != 1:
        raise InputError("strassmann1 needs series in one variable")
    out = []
    for f in ideal.gens:
        out.append({"series": f.to_text(), "bound": strassmann_one_var(f)})
    return {"results": out}, EXIT_OK


def cmd_saturate(cfg: JobConfig):
    ideal = _ideal(cfg)
    chain = run_chain(ideal, _levels(cfg, ideal), cfg.order, exact=cfg.exact)
    code = EXIT_OK if chain.status == "certified" else EXIT_INCONCLUSIVE
    return {"chain": _chain_dict(chain)}, code


def cmd_bound(cfg: JobConfig):
    ideal = _ideal(cfg)
    chain = run_chain(ideal, _levels(cfg, ideal), cfg.order, exact=cfg.exact)
    rep = bound_from_chain(chain, cfg.order, cfg.point_budget)
    code = EXIT_OK if rep.verdict == "finite-certified" else EXIT_INCONCLUSIVE
    return {"bound": rep.to_dict(), "chain": _chain_dict(chain)}, code


def cmd_groebner(cfg: JobConfig):
    ideal = _ideal(cfg)
    M = cfg.M if cfg.M is not None else ideal.min_precision
    if M > ideal.min_precision:
        raise InputError("target precision exceeds the input precision")
    if cfg.algorithm2:
        N = ideal.min_precision
        polys = [dict(g.coeffs) for g in ideal.gens]
        res = algorithm2(polys, ideal.p, N, M, ideal.nvars, cfg.order, ideal.names, cfg.degree_cap)
        report = {
            "status": res.status,
            "N": N,
            "M": M,
            "basis": emit_ideal(res.basis, cfg.order),
            "full_basis": emit_ideal(res.full_basis, cfg.order),
            "offending": res.offending,
        }
        return report, (EXIT_OK if res.status == "ok" else EXIT_INCONCLUSIVE)
    gb = minimalize(tate_buchberger(ideal, cfg.order, M, cfg.degree_cap))
    reduced = True
    try:
        gb = reduce_basis(gb)
    except ValueError:
        reduced = False
    return {"status": "ok", "M": M, "reduced": reduced, "basis": emit_ideal(gb.series(), cfg.order)}, EXIT_OK


def _pin_block(pinned: dict):
    v = tuple(tuple(x) for x in pinned["v"]) if "v" in pinned else None
    u = {}
    for key, vec in pinned.get("u", {}).items():
        a, b = (int(s) for s in key.split(","))
        u[(a, b)] = tuple(vec)
    return v, u


def load_thue(data, cfg: JobConfig) -> tuple[ThueInstance, int]:
    _validate(data, THUE_SCHEMA, "thue instance")
    if cfg.p is not None and cfg.p != data["p"]:
        raise InputError(f"--prime {cfg.p} disagrees with p = {data['p']} in the input")
    pinned = dict(data.get("pinned", {}))
    pinned.update(cfg.pinned)
    v, u = _pin_block(pinned)
    box = cfg.box if cfg.box is not None else data.get("box", 20)
    N = cfg.N if cfg.N is not None else data.get("N", 3)
    inst = ThueInstance(tuple(data["minpoly"]), data["p"], tuple(tuple(x) for x in data["units"]),
                        data.get("rhs", 1), box, v, u)
    return inst, N


def cmd_thue(cfg: JobConfig):
    inst, N = load_thue(load_json(cfg.source), cfg)
    rep = solve_thue(inst, N, cfg.max_level, cfg.order)
    code = EXIT_OK if rep.verdict in ("solved", "bounded") else EXIT_INCONCLUSIVE
    return {"N": N, **rep.to_dict()}, code


COMMANDS = {
    "strassmann1": cmd_strassmann1,
    "saturate": cmd_saturate,
    "bound": cmd_bound,
    "groebner": cmd_groebner,
    "thue": cmd_thue,
}


def run(cfg: JobConfig) -> tuple[dict, int]:
    cfg.check()
    report, code = COMMANDS[cfg.subcommand](cfg)
    report["config"] = cfg.as_dict()
    return report, code


# --- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strassmann", description="Zero bounds for p-adic power series.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="JSON file or inline JSON")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--prime", type=int, help="expected prime (checked against the input)")
    common.add_argument("--precision", type=int, help="input precision N (default for generators without one)")
    common.add_argument("--target-precision", type=int, help="output precision M <= N")
    common.add_argument("--max-level", type=int, default=2, help="deepest saturation level (default 2)")
    common.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    common.add_argument("--point-budget", type=int, default=POINT_BUDGET,
                        help="cap on enumerated F_p-points")
    common.add_argument("--exact", action="store_true",
                        help="treat generators as exact polynomials (enables the lifting certificate)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("strassmann1", parents=[common], help="one-variable Strassmann bound")
    sub.add_parser("saturate", parents=[common], help="saturation chain with certificates")
    sub.add_parser("bound", parents=[common], help="multivariate zero bound")
    g = sub.add_parser("groebner", parents=[common], help="Tate Groebner basis modulo p^M")
    g.add_argument("--algorithm2", action="store_true", help="saturate first and report FAIL when ambiguous")
    t = sub.add_parser("thue", parents=[common], help="solve a Thue equation by Skolem's method")
    t.add_argument("--box", type=int, help="search box for small solutions")
    t.add_argument("--pin", help="JSON file with pinned unit data {\"v\": [...], \"u\": {\"a,b\": [...]}}")
    return parser


def config_from_args(args) -> JobConfig:
    pinned = {}
    if getattr(args, "pin", None):
        pinned = load_json(args.pin)
        _validate(pinned, PIN_SCHEMA, "pin file")
    return JobConfig(
        subcommand=args.subcommand,
        source=args.input,
        output=args.output,
        p=args.prime,
        N=args.precision,
        M=args.target_precision,
        max_level=args.max_level,
        order=args.order,
        degree_cap=args.degree_cap,
        point_budget=args.point_budget,
        box=getattr(args, "box", None),
        algorithm2=getattr(args, "algorithm2", False),
        exact=args.exact,
        pinned=pinned,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except (InputError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dumps(report)
    if cfg.output:
        try:
            Path(cfg.output).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_ERROR
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

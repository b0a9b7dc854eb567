"""Command-line front end.

Every command prints one JSON report ``{"command", "status", "payload",
"bounds_used"}`` and exits with 0 (ok), 1 (not_found) or 2 (error).
Inputs are JSON files (or inline JSON strings starting with ``{``).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .cmspace import (CMPoint, GroupWord, LETTERS, cm_act, cm_equivalent, cm_make, cm_validate,
                      point_from_json, point_to_json, points_equal_up_to_gauge, word_from_json, word_to_json)
from .exact import SchemaError, format_rational, parse_rational
from .ideals import (FractionalIdeal, SearchBounds, cayley_hamilton_echo, equivariance_check, ideal_from_json,
                     ideal_isomorphic, ideal_to_json, is_cyclic, kappa_coefficient, kappa_series, member_witness,
                     omega_x, omega_y, stabilizer_in_pic, unit_stabilizer)
from .picard import (PicElement, is_inner, omega_of_automorphism, pic_from_json, pic_mul, pic_normalize,
                     pic_to_automorphism, pic_to_json, word_from_matrix)
from .skewlocal import skew_from_json
from .torus import TorusElement, ad_unit, automorphism_from_json, element_to_json, torus_mul

COMMANDS = ("cm-validate", "cm-make", "cm-act", "cm-equiv", "ideal-build", "ideal-member", "ideal-isom",
            "ideal-cyclic", "ideal-stab-units", "kappa-expand", "pic-mul", "pic-normalize", "pic-word",
            "pic-inner", "equivariance", "stabilizer", "selftest")

EXIT_CODES = {"ok": 0, "not_found": 1, "error": 2}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ToolConfig:
    membership_x_span: int = 6
    membership_y_span: int = 6
    unit_search_bound: int = 4
    series_depth: int = 10
    escalation_steps: int = 2
    seed: int = 0

    def __post_init__(self):
        for name in ("membership_x_span", "membership_y_span", "unit_search_bound", "series_depth"):
            if int(getattr(self, name)) < 1:
                raise SchemaError(f"{name} must be positive")
        if int(self.escalation_steps) < 0:
            raise SchemaError("escalation_steps must be nonnegative")

    @classmethod
    def from_json(cls, data: dict) -> "ToolConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**{k: int(v) for k, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad config: {exc}") from exc

    def bounds(self) -> SearchBounds:
        return SearchBounds(self.membership_x_span, self.membership_y_span,
                            self.unit_search_bound, self.escalation_steps)


@dataclass
class Report:
    command: str
    status: str
    payload: dict
    bounds_used: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


# -- parsing ---------------------------------------------------------------

def load_json(source: str):
    text = source if source.lstrip().startswith("{") else Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {source!r}: {exc}") from exc


def parse_point(path: str) -> CMPoint:
    return point_from_json(load_json(path))


def parse_ideal(path: str) -> FractionalIdeal:
    """An ideal JSON, or a point JSON standing for its x_left ideal omega_x."""
    data = load_json(path)
    if "X" in data:
        return omega_x(point_from_json(data))
    return ideal_from_json(data)


def parse_pic(path: str, q=None) -> PicElement:
    data = load_json(path)
    q = data.get("q", q)
    if q is None:
        raise UsageError("a Picard element needs q (in the file or via --q)")
    return pic_from_json(data, parse_rational(q) if isinstance(q, str) else Fraction(q))


def parse_word(path: str) -> GroupWord:
    return word_from_json(load_json(path))


def _need(args: list, k: int, usage: str) -> list:
    if len(args) != k:
        raise UsageError(f"usage: {usage}")
    return args


def _q_of(opts) -> Fraction:
    if opts.get("q") is None:
        raise UsageError("--q is required for this command")
    return parse_rational(opts["q"])


def _unit_json(w) -> dict | None:
    return None if w is None else {"alpha": format_rational(w[0]), "m": w[1], "k": w[2]}


# -- commands --------------------------------------------------------------

def _cm_validate(args, opts, cfg):
    (path,) = _need(args, 1, "cm-validate POINT")
    p = point_from_json(load_json(path), validate=False)
    ok, msg = cm_validate(p)
    return "ok", {"valid": ok, "diagnostic": msg}


def _cm_make(args, opts, cfg):
    (path,) = _need(args, 1, "cm-make SPEC  (SPEC: {\"q\", \"x\", \"i\", \"j\"})")
    data = load_json(path)
    try:
        q = parse_rational(data.get("q", opts.get("q")))
        xs, iv, jv = ([parse_rational(v) for v in data[k]] for k in ("x", "i", "j"))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad cm-make spec: {exc}") from exc
    return "ok", {"point": point_to_json(cm_make(len(xs), q, xs, iv, jv))}


def _cm_act(args, opts, cfg):
    pt, wd = _need(args, 2, "cm-act POINT WORD")
    return "ok", {"point": point_to_json(cm_act(parse_word(wd), parse_point(pt)))}


def _cm_equiv(args, opts, cfg):
    a, b = _need(args, 2, "cm-equiv POINT1 POINT2")
    res = cm_equivalent(parse_point(a), parse_point(b))
    if res is None:
        return "not_found", {"equivalent": False}
    g, k, m = res
    return "ok", {"equivalent": True, "k": k, "m": m,
                  "g": [[format_rational(v) for v in row] for row in g.entries]}


def _ideal_build(args, opts, cfg):
    (pt,) = _need(args, 1, "ideal-build POINT")
    p = parse_point(pt)
    return "ok", {"omega_x": ideal_to_json(omega_x(p)), "omega_y": ideal_to_json(omega_y(p))}


def _ideal_member(args, opts, cfg):
    el, idl = _need(args, 2, "ideal-member ELEMENT IDEAL")
    I = parse_ideal(idl)
    data = load_json(el)
    data.setdefault("side", I.side)
    data.setdefault("q", format_rational(I.q))
    f = skew_from_json(data)
    wit = member_witness(f, I, cfg.bounds())
    if wit is None:
        return "not_found", {"member": False}
    return "ok", {"member": True, "box": list(wit.bounds),
                  "multipliers": [element_to_json(m) for m in wit.multipliers]}


def _ideal_isom(args, opts, cfg):
    a, b = _need(args, 2, "ideal-isom IDEAL1 IDEAL2")
    w = ideal_isomorphic(parse_ideal(a), parse_ideal(b), cfg.bounds())
    return ("not_found" if w is None else "ok"), {"unit": _unit_json(w)}


def _ideal_cyclic(args, opts, cfg):
    (a,) = _need(args, 1, "ideal-cyclic IDEAL")
    w = is_cyclic(parse_ideal(a), cfg.bounds())
    return ("not_found" if w is None else "ok"), {"cyclic": w is not None, "unit": _unit_json(w)}


def _ideal_stab(args, opts, cfg):
    (a,) = _need(args, 1, "ideal-stab-units IDEAL")
    st = unit_stabilizer(parse_ideal(a), cfg.bounds())
    return "ok", {"units": [list(u) for u in sorted(st)]}


def _kappa(args, opts, cfg):
    (pt,) = _need(args, 1, "kappa-expand POINT")
    kd = kappa_series(parse_point(pt), cfg.series_depth)
    return "ok", {"depth": kd.depth,
                  "a": [[format_rational(v) for v in row] for row in kd.coefficients],
                  "product_is_one": True,
                  "cayley_hamilton_failures": [list(t) for t in cayley_hamilton_echo(kd)]}


def _pic_mul(args, opts, cfg):
    a, b = _need(args, 2, "pic-mul PIC1 PIC2")
    q = opts.get("q")
    p1 = parse_pic(a, q)
    p2 = parse_pic(b, q)
    return "ok", {"product": pic_to_json(pic_mul(p1, p2))}


def _pic_normalize(args, opts, cfg):
    (alpha,) = _need(args, 1, "pic-normalize ALPHA --q Q")
    c, k = pic_normalize(parse_rational(alpha), _q_of(opts))
    return "ok", {"canonical": format_rational(c), "k": k}


def _pic_word(args, opts, cfg):
    (m,) = _need(args, 1, "pic-word a,b,c,d")
    try:
        a, b, c, d = (int(v) for v in m.split(","))
    except ValueError as exc:
        raise SchemaError(f"matrix must be four integers a,b,c,d: {exc}") from exc
    return "ok", {"m": [[a, b], [c, d]], "word": list(word_from_matrix(((a, b), (c, d))))}


def _pic_inner(args, opts, cfg):
    (a,) = _need(args, 1, "pic-inner AUTOMORPHISM --q Q")
    data = load_json(a)
    q = parse_rational(data.get("q", opts.get("q"))) if data.get("q", opts.get("q")) else None
    if q is None:
        raise UsageError("--q is required for this command")
    s = automorphism_from_json(data, q)
    res = is_inner(s)
    payload = {"pic": pic_to_json(omega_of_automorphism(s)), "inner": res is not None}
    if res is not None:
        payload.update(n=res[0], m=res[1])
    return ("ok" if res is not None else "not_found"), payload


def _equivariance(args, opts, cfg):
    pt, wd = _need(args, 2, "equivariance POINT WORD")
    rep = equivariance_check(parse_point(pt), parse_word(wd), cfg.bounds())
    return ("ok" if rep["status"] == "ok" else "not_found"), rep


def _stabilizer(args, opts, cfg):
    pt, wd = _need(args, 2, "stabilizer POINT WORD")
    res = stabilizer_in_pic(parse_point(pt), parse_word(wd))
    return ("ok" if res else "not_found"), {"stabilizes": res}


def _selftest(args, opts, cfg):
    _need(args, 0, "selftest")
    results = selftest(cfg)
    failed = [name for name, ok in results if not ok]
    return ("ok" if not failed else "error"), {
        "passed": len(results) - len(failed), "failed": len(failed),
        "checks": {name: ok for name, ok in results}}


HANDLERS: dict[str, Callable] = {
    "cm-validate": _cm_validate, "cm-make": _cm_make, "cm-act": _cm_act, "cm-equiv": _cm_equiv,
    "ideal-build": _ideal_build, "ideal-member": _ideal_member, "ideal-isom": _ideal_isom,
    "ideal-cyclic": _ideal_cyclic, "ideal-stab-units": _ideal_stab, "kappa-expand": _kappa,
    "pic-mul": _pic_mul, "pic-normalize": _pic_normalize, "pic-word": _pic_word,
    "pic-inner": _pic_inner, "equivariance": _equivariance, "stabilizer": _stabilizer,
    "selftest": _selftest,
}


def run(command: str, args: list, config: ToolConfig | None = None, options: dict | None = None) -> Report:
    """Dispatch one command; every failure becomes an error report."""
    config = config or ToolConfig()
    options = options or {}
    echo = asdict(config)
    if command not in HANDLERS:
        return Report(command, "error", {"message": f"unknown command {command!r}"}, echo)
    try:
        status, payload = HANDLERS[command](list(args), options, config)
    except (OSError, ValueError, ArithmeticError, KeyError) as exc:
        return Report(command, "error", {"message": f"{type(exc).__name__}: {exc}"}, echo)
    return Report(command, status, payload, echo)


# -- self test -------------------------------------------------------------

def _sample_points(rng: random.Random, q, count: int, n: int) -> list[CMPoint]:
    out = []
    while len(out) < count:
        xs = rng.sample([v for v in range(-9, 10) if v], n)
        iv = [rng.randint(-4, 4) for _ in range(n)]
        jv = [rng.randint(-4, 4) for _ in range(n)]
        try:
            out.append(cm_make(n, q, xs, iv, jv))
        except ValueError:
            continue
    return out


def selftest(cfg: ToolConfig) -> list[tuple[str, bool]]:
    """Quick seeded invariant checks across all modules."""
    rng = random.Random(cfg.seed)
    q = Fraction(2)
    res = []
    x, y = TorusElement.x(q), TorusElement.y(q)
    res.append(("torus relation", torus_mul(x, y) == torus_mul(y, x) * q))
    pts = _sample_points(rng, q, 2, 1) + _sample_points(rng, q, 2, 2)
    ok = True
    for p in pts:
        for l in LETTERS:
            ok &= cm_validate(cm_act(GroupWord((l,)), p))[0]
    res.append(("cm action preserves validity", ok))
    ok = all(cm_act(GroupWord(("g1", "g2", "g1")), p) == cm_act(GroupWord(("g2", "g1", "g2")), p) for p in pts)
    res.append(("braid relation", ok))
    ok = all(points_equal_up_to_gauge(cm_act(GroupWord(("g1", "g2") * 6), p), p) is not None for p in pts)
    res.append(("(g1 g2)^6 up to gauge", ok))
    ok = True
    for p in pts:
        kd = kappa_series(p, min(cfg.series_depth, 6))
        ok &= all(kd.coefficients[s][r] == kappa_coefficient(p, s, r)
                  for s in range(kd.depth + 1) for r in range(kd.depth + 1))
        ok &= not cayley_hamilton_echo(kd)
    res.append(("kappa coefficients and Cayley-Hamilton", ok))
    ok = True
    for _ in range(5):
        a, b = rng.randint(1, 9), rng.randint(-3, 3)
        s = ad_unit(q, Fraction(rng.randint(1, 5)), a, b)
        ok &= omega_of_automorphism(s) == PicElement.identity(q)
        P = PicElement.from_matrix(q, Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(1, 9)),
                                   ((1, a), (0, 1)))
        ok &= omega_of_automorphism(pic_to_automorphism(P)) == P
    res.append(("Picard exact sequence", ok))
    res.append(("empty point cyclic", is_cyclic(omega_x(CMPoint.empty(q)), cfg.bounds()) == (1, 0, 0)))
    return res


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtorus", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="*", help="input files (JSON) or command arguments")
    ap.add_argument("--q", help="deformation parameter, e.g. 2 or 2/3")
    ap.add_argument("--config", help="JSON file with ToolConfig fields")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--depth", type=int, help="series truncation depth")
    ap.add_argument("--bounds", help="membership spans and unit bound: X,Y or X,Y,U")
    ap.add_argument("--out", help="also write the report to this file")
    return ap


def config_from_options(ns) -> ToolConfig:
    cfg = ToolConfig.from_json(load_json(ns.config)) if ns.config else ToolConfig()
    over = {}
    if ns.seed is not None:
        over["seed"] = ns.seed
    if ns.depth is not None:
        over["series_depth"] = ns.depth
    if ns.bounds:
        try:
            parts = [int(v) for v in ns.bounds.split(",")]
        except ValueError as exc:
            raise SchemaError(f"bad --bounds {ns.bounds!r}") from exc
        if len(parts) not in (2, 3):
            raise SchemaError("--bounds takes X,Y or X,Y,U")
        over["membership_x_span"], over["membership_y_span"] = parts[:2]
        if len(parts) == 3:
            over["unit_search_bound"] = parts[2]
    return replace(cfg, **over)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_options(ns)
    except (OSError, ValueError) as exc:
        report = Report(ns.command, "error", {"message": f"{type(exc).__name__}: {exc}"}, asdict(ToolConfig()))
    else:
        report = run(ns.command, ns.inputs, cfg, {"q": ns.q})
    text = report.to_json()
    print(text)
    if ns.out:
        Path(ns.out).write_text(text + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    cobcalc fgl chi --law multiplicative --order 5
    cobcalc lazard ranks --max-degree 6
    cobcalc model hypersurface --n 2 --d 2 --law universal --format json
    cobcalc snc class --input divisor.json --law multiplicative --push
    cobcalc --selftest

Exit status: 0 on success, 1 on domain errors (including malformed
input files), 2 on usage errors.  JSON output writes every number as a
decimal string.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Any

from . import __version__
from . import bmodel as B
from . import snc as S
from .errors import CobcalcError
from .fgl import FormalGroupLaw
from .laws import make_law, parse_law_name
from .lazard import build, classifying_map
from .series import TruncatedSeries


class InputError(CobcalcError):
    """Malformed user-supplied data."""


# --- output ------------------------------------------------------------


def stringify(obj: Any) -> Any:
    """Turn every non-boolean number into a decimal string."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, float)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify(v) for v in obj]
    return str(obj)


class Result:
    """A payload for JSON and a rendering for text."""

    def __init__(self, data: Any, text: str | None = None, status: int = 0):
        self.data = data
        self.text = text
        self.status = status

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(stringify(self.data), indent=2, ensure_ascii=False)
        if self.text is not None:
            return self.text
        return _text_of(self.data)


def _text_of(data: Any, indent: str = "") -> str:
    if isinstance(data, dict):
        lines = []
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.append(_text_of(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
        return "\n".join(lines)
    if isinstance(data, list):
        return "\n".join(_text_of(v, indent) if isinstance(v, (dict, list)) else f"{indent}{v}" for v in data)
    return f"{indent}{data}"


# --- inputs ------------------------------------------------------------


def _load_json(source: str) -> Any:
    try:
        if source.lstrip().startswith(("{", "[")):
            return json.loads(source)
        with open(source) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source[:40]!r}: {exc}") from None
    except OSError as exc:
        raise InputError(f"cannot read {source!r}: {exc.strerror}") from None


def _law(args) -> FormalGroupLaw:
    if getattr(args, "input", None) and args.command == "fgl":
        data = _load_json(args.input)
        try:
            series = TruncatedSeries.from_json(data.get("series", data))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"input is not a series document: {exc}") from None
        law = FormalGroupLaw(series, data.get("name", "custom") if isinstance(data, dict) else "custom")
        if args.order and args.order < law.order:
            law = law.truncate(args.order)
        return law
    return make_law(args.law, args.order, args.ring, _beta(args))


def _beta(args):
    b = getattr(args, "beta", None)
    if b is None:
        return None
    try:
        return Fraction(b)
    except ValueError:
        raise InputError(f"beta must be a number, not {b!r}") from None


def _theory(args) -> B.OrientedTheory:
    return B.OrientedTheory(_law(args))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_space(text: str, theory: B.OrientedTheory) -> B.CellSpace:
    """``P2``, ``P1xP2`` (products), ``P(O(0),O(1))/P2`` (projective bundles)."""
    text = text.strip()
    m = re.fullmatch(r"P\((.*)\)/(.+)", text)
    if m:
        base = parse_space(m.group(2), theory)
        return B.projective_bundle(B.SplitBundle(base, tuple(_split_top(m.group(1), ","))))
    factors = _split_top(text, "x")
    if len(factors) > 1:
        space = parse_space(factors[0], theory)
        for f in factors[1:]:
            space = B.product(space, parse_space(f, theory))
        return space
    m = re.fullmatch(r"P(\d+)", text)
    if not m:
        raise InputError(f"cannot parse space {text!r}")
    return B.projective_space(int(m.group(1)), theory)


def parse_class(space: B.CellSpace, text: str | None) -> B.BordismClass:
    if text is None or text == "unit":
        return space.unit()
    data = _load_json(text)
    if not isinstance(data, dict):
        raise InputError("a class is a JSON object keyed by cell ids")
    try:
        return space.class_from(data)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def describe_space(space: B.CellSpace) -> dict:
    return {
        "space": space.name,
        "dim": space.dim,
        "cells": [{"id": c.id, "dim": c.dim, "word": c.word_str()} for c in space.cells],
        "c1": {s: space.c1(s).to_json() for s in space.generators},
    }


def _space_text(space: B.CellSpace) -> str:
    lines = [f"{space.name} (dimension {space.dim})"]
    for c in space.cells:
        lines.append(f"  {c.id:<14} dim {c.dim:<3} {c.word_str()}")
    for s in space.generators:
        lines.append(f"c1({s}):")
        for row in space.c1(s).entries:
            lines.append("  [" + ", ".join(str(x) for x in row) + "]")
    return "\n".join(lines)


def _class_result(cls: B.BordismClass) -> Result:
    return Result(cls.to_json(), str(cls))


def _matrix_result(m: B.Matrix, applied: B.BordismClass | None = None) -> Result:
    data = {"matrix": m.to_json()}
    text = "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in m.entries)
    if applied is not None:
        data["applied"] = applied.to_json()
        text += f"\napplied: {applied}"
    return Result(data, text)


def _series_result(law: FormalGroupLaw, s: TruncatedSeries, label: str) -> Result:
    return Result(
        {"law": law.name, "order": s.order, label: str(s), "series": s.to_json()},
        f"{s} + O({s.order + 1})",
    )


# --- fgl --------------------------------------------------------------


def cmd_fgl(args) -> Result:
    law = _law(args)
    verb = args.verb
    if verb == "show":
        return _series_result(law, law.series, "F")
    if verb == "validate":
        report = law.validate()
        return Result(report.to_json(), str(report) + ("\nvalid" if report.ok else "\nNOT a formal group law"),
                      0 if report.ok else 1)
    if verb == "chi":
        return _series_result(law, law.chi, "chi")
    if verb == "diff":
        return _series_result(law, law.minus, "difference")
    if verb == "nseries":
        return _series_result(law, law.n_series(args.n), f"[{args.n}]")
    if verb == "multisum":
        return _series_result(law, law.multi_sum(_int_list(args.ns)), "multisum")
    if verb == "log":
        return _series_result(law, law.log, "log")
    if verb == "exp":
        return _series_result(law, law.exp, "exp")
    if verb == "check-c1l":
        ok = law.check_identity_c1L()
        return Result({"identity": "c1L", "order": law.order, "holds": ok}, f"holds: {ok}", 0 if ok else 1)
    if verb == "check-fgl":
        ok = law.check_identity_fgl(args.order)
        return Result({"identity": "fgl", "order": min(law.order, args.order or law.order), "holds": ok},
                      f"holds: {ok}", 0 if ok else 1)
    raise AssertionError(verb)


# --- lazard --------------------------------------------------------------


def cmd_lazard(args) -> Result:
    L = build(args.max_degree)
    if args.verb == "ranks":
        rows = L.rank_table()
        text = ["degree  monomials  rank  torsion"]
        for r in rows:
            tors = ",".join(map(str, r["torsion"])) or "-"
            text.append(f"{r['degree']:>6}  {r['monomials']:>9}  {r['quotient_rank']:>4}  {tors}")
        return Result({"max_degree": args.max_degree, "degrees": rows}, "\n".join(text))
    if args.verb == "normalform":
        if not args.poly:
            raise InputError("normalform needs --poly")
        try:
            p = L.polys.parse(args.poly)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        nf = L.normal_form(p)
        return Result({"input": str(p), "normal_form": str(nf), "poly": nf.to_json()}, str(nf))
    if args.verb == "classify":
        name, _ = parse_law_name(args.law)
        if name == "universal":
            raise InputError("classify needs a target law (additive or multiplicative)")
        target = make_law(args.law, args.order or args.max_degree + 1, args.ring, _beta(args))
        theta = classifying_map(L, target)
        images = theta.to_json()
        return Result({"target": target.name, "images": images},
                      "\n".join(f"{k} -> {v}" for k, v in images.items()))
    raise AssertionError(args.verb)


# --- model ---------------------------------------------------------------


def _model_space(args, theory) -> B.CellSpace:
    if getattr(args, "space", None):
        return parse_space(args.space, theory)
    if getattr(args, "n", None) is not None:
        return B.projective_space(args.n, theory)
    raise InputError("give --space or --n")


def _bundle(args, space) -> B.SplitBundle:
    if not args.bundles:
        raise InputError("give --bundles L1,L2,...")
    return B.SplitBundle(space, tuple(_split_top(args.bundles, ",")))


def cmd_model(args) -> Result:
    theory = _theory(args)
    verb = args.verb
    if verb == "pn":
        space = B.projective_space(args.n, theory)
        return Result(describe_space(space), _space_text(space))
    if verb == "product":
        ns = _int_list(args.factors)
        if len(ns) < 2:
            raise InputError("--factors needs at least two dimensions")
        space = B.projective_space(ns[0], theory)
        for n in ns[1:]:
            space = B.product(space, B.projective_space(n, theory))
        return Result(describe_space(space), _space_text(space))
    if verb == "pbundle":
        base = _model_space(args, theory)
        space = B.projective_bundle(_bundle(args, base))
        return Result(describe_space(space), _space_text(space))
    if verb == "c1":
        space = _model_space(args, theory)
        if not args.bundle:
            raise InputError("c1 needs --bundle")
        return _class_result(B.c1_apply(parse_class(space, args.cls), args.bundle))
    if verb in ("chern", "euler"):
        space = _model_space(args, theory)
        E = _bundle(args, space)
        m = B.chern_class(E, args.i) if verb == "chern" else B.euler_class(E)
        return _matrix_result(m, m(parse_class(space, args.cls)))
    if verb == "intersect":
        space = _model_space(args, theory)
        a, b = parse_class(space, args.a), parse_class(space, args.b)
        return _class_result(B.intersection_product(a, b))
    if verb == "hypersurface":
        return _class_result(B.hypersurface_class(args.n, args.d, theory))
    if verb == "genus":
        space = _model_space(args, theory)
        value = B.pushforward_to_point(parse_class(space, args.cls))
        return Result({"space": space.name, "value": str(value)}, str(value))
    if verb == "specialize":
        name, _ = parse_law_name(args.law)
        if name != "universal":
            raise InputError("specialize starts from --law universal")
        target = B.OrientedTheory(make_law(args.to, theory.order, args.ring, _beta(args)))
        theta = classifying_map(build(theory.order - 1), target.law)
        if args.d is not None:
            cls = B.hypersurface_class(args.n, args.d, theory)
        else:
            cls = parse_class(_model_space(args, theory), args.cls)
        return _class_result(B.specialize(cls, theta, target))
    raise AssertionError(verb)


# --- snc ------------------------------------------------------------------


def cmd_snc(args) -> Result:
    theory = _theory(args)
    if args.verb == "decompose":
        parts = S.support_decomposition(theory.law, _int_list(args.mults))
        data = {",".join(map(str, J)): str(g) for J, g in parts.items()}
        return Result({"parts": data}, "\n".join(f"J={{{k}}}: {v}" for k, v in data.items()))
    if args.verb == "class":
        if not args.input:
            raise InputError("snc class needs --input divisor.json")
        data = _load_json(args.input)
        try:
            E = S.SNCDivisor.from_json(data, theory)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed divisor: {exc!r}") from None
        cls = S.snc_class(E)
        out = cls.to_json()
        lines = [
            f"J={{{','.join(map(str, t.J))}}} (face dim {t.dim}): {t.operator}" for t in cls.terms
        ]
        if args.push:
            pushed = S.pushforward_to_ambient(E)
            out["pushforward"] = pushed.to_json()
            lines.append(f"push-forward: {pushed}")
        return Result(out, "\n".join(lines))
    raise AssertionError(args.verb)


# --- parser ------------------------------------------------------------


def _common(p: argparse.ArgumentParser, law_default="additive"):
    p.add_argument("--law", default=law_default, help="additive, multiplicative or universal[:ORDER]")
    p.add_argument("--order", type=int, default=None, help="truncation order")
    p.add_argument("--ring", default="Z", choices=["Z", "Q", "z", "q"], help="coefficients (Z or Q)")
    p.add_argument("--beta", default=None, help="numeric value for beta in the multiplicative law")
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--input", default=None, help="JSON input file (or inline JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cobcalc", description="Formal group laws and bordism models.")
    parser.add_argument("--version", action="version", version=f"cobcalc {__version__}")
    parser.add_argument("--selftest", action="store_true", help="run the acceptance suite")
    parser.add_argument("--format", dest="top_format", default="text", choices=["text", "json"])
    sub = parser.add_subparsers(dest="command")

    fgl = sub.add_parser("fgl", help="formal group law calculus")
    fsub = fgl.add_subparsers(dest="verb", required=True)
    for verb in ("show", "validate", "chi", "diff", "nseries", "multisum", "log", "exp", "check-c1l", "check-fgl"):
        p = fsub.add_parser(verb)
        _common(p)
        if verb == "nseries":
            p.add_argument("--n", type=int, required=True)
        if verb == "multisum":
            p.add_argument("--ns", required=True, help="comma-separated multiplicities")

    lz = sub.add_parser("lazard", help="the Lazard ring")
    lsub = lz.add_subparsers(dest="verb", required=True)
    for verb in ("ranks", "normalform", "classify"):
        p = lsub.add_parser(verb)
        _common(p, "multiplicative" if verb == "classify" else "universal")
        p.add_argument("--max-degree", type=int, default=6)
        if verb == "normalform":
            p.add_argument("--poly", required=True)

    md = sub.add_parser("model", help="cellular bordism models")
    msub = md.add_subparsers(dest="verb", required=True)
    for verb in ("pn", "product", "pbundle", "c1", "chern", "euler", "intersect", "hypersurface", "genus", "specialize"):
        p = msub.add_parser(verb)
        _common(p, "universal" if verb == "specialize" else "additive")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--space", default=None, help="P2, P1xP1 or P(O(0),O(1))/P2")
        if verb == "product":
            p.add_argument("--factors", required=True, help="comma-separated dimensions")
        if verb in ("pbundle", "chern", "euler"):
            p.add_argument("--bundles", default=None, help="comma-separated line bundles")
        if verb == "chern":
            p.add_argument("--i", type=int, required=True)
        if verb == "c1":
            p.add_argument("--bundle", default=None)
        if verb in ("c1", "chern", "euler", "genus", "specialize"):
            p.add_argument("--class", dest="cls", default=None, help="JSON class (default: the unit)")
        if verb == "intersect":
            p.add_argument("--a", required=True)
            p.add_argument("--b", required=True)
        if verb in ("hypersurface", "specialize"):
            p.add_argument("--d", type=int, default=None)
        if verb == "specialize":
            p.add_argument("--to", default="multiplicative", help="target law")

    sn = sub.add_parser("snc", help="normal crossing divisors")
    ssub = sn.add_subparsers(dest="verb", required=True)
    p = ssub.add_parser("decompose")
    _common(p, "multiplicative")
    p.add_argument("--mults", required=True)
    p = ssub.add_parser("class")
    _common(p, "multiplicative")
    p.add_argument("--push", action="store_true")
    return parser


COMMANDS = {"fgl": cmd_fgl, "lazard": cmd_lazard, "model": cmd_model, "snc": cmd_snc}


def _selftest(fmt: str) -> int:
    from .acceptance import run_all

    if fmt == "json":
        outcomes = run_all()
        print(json.dumps({"criteria": [o.to_json() for o in outcomes]}, indent=2))
    else:
        outcomes = run_all(print)
        print(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} criteria passed")
    return 0 if all(o.passed for o in outcomes) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.selftest:
        return _selftest(args.top_format)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    fmt = args.format
    try:
        if args.command == "model" and args.verb == "hypersurface" and (args.n is None or args.d is None):
            parser.error("model hypersurface needs --n and --d")
        result = COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (CobcalcError, ValueError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if fmt == "json":
            print(json.dumps(err, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    print(result.render(fmt))
    return result.status


if __name__ == "__main__":
    sys.exit(main())

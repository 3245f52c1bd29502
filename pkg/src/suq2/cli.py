"""Command-line front end: ``suq2 integral``, ``action``, ``table1``, ``verify``, ``oracle``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .dsl import ParseError, parse_form
from .hopf_tau import ncint
from .oneform import OneForm, ncint_J, ncint_closed, ncint_tau, to_x
from .qfield import QScalar
from .spectral import (
    TABLE1_COLUMNS,
    CutoffMoments,
    assemble,
    coeffs_noJ,
    coeffs_suq2_withJ,
    table1,
)


def _q_value(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SystemExit(f"error: --q expects a rational number such as 1/2, got {text!r}")


def _evaluate(x: QScalar, q: Fraction | None) -> float | None:
    if q is None:
        return None
    return float(x.eval_at(q))


def _scalar_json(x: QScalar) -> dict:
    return x.to_json() | {"text": str(x)}


def _form(text: str):
    try:
        return parse_form(text)
    except ParseError as e:
        raise SystemExit(f"error: cannot parse form {text!r}: {e}")


def _integral(A: OneForm, n: int, p: int) -> QScalar:
    if p == 1:
        return ncint_tau(A, n, p)
    return ncint_closed(A, n, p)


# -- commands ----------------------------------------------------------------


def cmd_integral(args) -> tuple[dict, int]:
    low = _form(args.form)
    q = None if args.symbolic else _q_value(args.q)
    notes = []
    if args.with_F and low.kind == "d":
        T = to_x(low.form, "d")
        result = ncint(T**args.n, args.power)
        notes.append("F-flagged form: d(x) = delta(x) F")
    else:
        result = _integral(low.form, args.n, args.power)
        if low.kind == "d":
            notes.append("d-form read as its delta-one-form; pass --with-F for the F-flagged version")
    query = {"command": "integral", "form": args.form, "n": args.n, "power": args.power, "with_F": args.with_F}
    return _report(query, result, q, notes), 0


def cmd_integral_j(args) -> tuple[dict, int]:
    A, B = _form(args.left).form, _form(args.right).form
    result = ncint_J(A, B, args.kind)
    query = {"command": "integral-j", "left": args.left, "right": args.right, "kind": args.kind}
    return _report(query, result, _q_value(args.q), []), 0


def cmd_action(args) -> tuple[dict, int]:
    low = _form(args.form)
    A = low.form
    coeffs = coeffs_noJ(A) if args.no_J else coeffs_suq2_withJ(A)
    q = _q_value(args.q)
    out = {
        "query": {"command": "action", "form": args.form, "with_J": not args.no_J},
        "result": coeffs.to_json(),
        "value_at_q": None,
        "notes": ["coefficients of Phi_3 L^3, Phi_2 L^2, Phi_1 L, Phi(0)"],
    }
    if args.moments:
        try:
            p1, p2, p3, p0 = (float(x) for x in args.moments.split(","))
        except ValueError:
            raise SystemExit("error: --moments expects four comma-separated numbers p1,p2,p3,p0")
        moments = CutoffMoments(p1, p2, p3, p0, args.lam)
        out["action_value"] = assemble(moments, coeffs, q)
    if q is not None:
        out["value_at_q"] = {k: _evaluate(getattr(coeffs, k), q) for k in ("c3", "c2", "c1", "c0")}
    return out, 0


def cmd_table1(args) -> tuple[dict, int]:
    q = _q_value(args.q)
    rows = table1(with_F=args.with_F)
    body = {}
    for name, vals in rows.items():
        body[name] = [
            None if v is None else (_evaluate(v, q) if q is not None else str(v)) for v in vals
        ]
    return {"query": {"command": "table1", "q": args.q, "with_F": args.with_F}, "columns": list(TABLE1_COLUMNS), "rows": body}, 0


def cmd_verify(args) -> tuple[dict, int]:
    from .suites import run_suite

    seed = int(os.environ.get("QSU2_SEED", args.seed))
    opts = {"q": float(_q_value(args.q) or Fraction(1, 2)), "max_2j": args.max_2j}
    if args.samples:
        opts["samples"] = args.samples
    checks = run_suite(args.suite, seed=seed, **opts)
    ok = all(c.ok for c in checks)
    out = {
        "query": {"command": "verify", "suite": args.suite, "seed": seed},
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
        "passed": ok,
    }
    return out, 0 if ok else 1


def cmd_oracle(args) -> tuple[dict, int]:
    from .oracle import oracle_integral

    low = _form(args.form)
    q = _q_value(args.q)
    try:
        fit = oracle_integral(low.form, args.n, args.power, float(q), args.max_2j)
    except ValueError as e:
        raise SystemExit(f"error: {e}")
    sym = _integral(low.form, args.n, args.power)
    num = fit.residue(args.power)
    symv = float(sym.eval_at(q))
    out = {
        "query": {"command": "oracle", "form": args.form, "n": args.n, "power": args.power, "q": args.q, "max_2j": args.max_2j},
        "result": _scalar_json(sym),
        "value_at_q": symv,
        "oracle": {"value": num, "abs_error": abs(num - symv), "window_change": list(fit.uncertainty)},
        "notes": [],
    }
    return out, 0


def _report(query: dict, result: QScalar, q, notes: list) -> dict:
    return {"query": query, "result": _scalar_json(result), "value_at_q": _evaluate(result, q), "notes": notes}


# -- output -----------------------------------------------------------------


def _markdown(out: dict) -> str:
    if "rows" in out:
        cols = ["A"] + [c.replace("|", "\\|") for c in out["columns"]]
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for name, vals in out["rows"].items():
            lines.append("| " + " | ".join([name] + ["" if v is None else str(v) for v in vals]) + " |")
        return "\n".join(lines)
    if "checks" in out:
        lines = [f"- [{'x' if c['ok'] else ' '}] {c['name']}" + (f" ({c['detail']})" if c["detail"] and not c["ok"] else "") for c in out["checks"]]
        return "\n".join(lines)
    res = out["result"]
    if "text" in res:
        text = f"{res['text']}"
    else:
        text = ", ".join(f"{k} = {v['text']}" for k, v in res.items())
    vq = out.get("value_at_q")
    if isinstance(vq, dict):
        text += "\nvalue: " + ", ".join(f"{k} = {v:.10g}" for k, v in vq.items())
    elif vq is not None:
        text += f"\nvalue: {vq}"
    if out.get("action_value") is not None:
        text += f"\naction: {out['action_value']}"
    if "oracle" in out:
        text += f"\noracle: {out['oracle']['value']} (|error| {out['oracle']['abs_error']:.3g})"
    return text


def _csv(out: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if "rows" in out:
        w.writerow(["A"] + out["columns"])
        for name, vals in out["rows"].items():
            w.writerow([name] + ["" if v is None else v for v in vals])
    elif "checks" in out:
        w.writerow(["name", "ok", "detail"])
        for c in out["checks"]:
            w.writerow([c["name"], c["ok"], c["detail"]])
    else:
        res = out["result"]
        w.writerow(["name", "text", "num", "den", "value_at_q"])
        items = [("result", res)] if "text" in res else list(res.items())
        vq = out.get("value_at_q")
        for name, r in items:
            v = vq.get(name) if isinstance(vq, dict) else vq
            w.writerow([name, r["text"], " ".join(map(str, r["num"])), " ".join(map(str, r["den"])), "" if v is None else v])
        if out.get("action_value") is not None:
            w.writerow(["action", "", "", "", out["action_value"]])
    return buf.getvalue().rstrip("\n")


def _output_flags(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--format", choices=("json", "csv", "markdown"), default=default, help="output format (default: json, markdown for table1)")
    p.add_argument("--out", default=default, help="also write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suq2", description="Exact noncommutative integrals and spectral action on SU_q(2).")
    _output_flags(p, None)
    common = argparse.ArgumentParser(add_help=False)
    _output_flags(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common])

    s = command("integral", "ncint A^n |D|^-K for a one-form A")
    s.add_argument("--form", required=True)
    s.add_argument("--power", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--n", type=int, choices=(1, 2, 3), default=1, help="power of A (default 1)")
    s.add_argument("--with-F", action="store_true", dest="with_F")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--q")
    g.add_argument("--symbolic", action="store_true")
    s.set_defaults(func=cmd_integral)

    s = command("integral-j", "J-reduced integrals A J B J^-1 |D|^-p")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--kind", choices=("i", "ii", "iii", "iv"), required=True)
    s.add_argument("--q")
    s.set_defaults(func=cmd_integral_j)

    s = command("action", "spectral action coefficients")
    s.add_argument("--form", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--with-J", action="store_true", dest="with_J")
    g.add_argument("--no-J", action="store_true", dest="no_J")
    s.add_argument("--moments", help="p1,p2,p3,p0")
    s.add_argument("--lambda", type=float, default=1.0, dest="lam")
    s.add_argument("--q")
    s.set_defaults(func=cmd_action)

    s = command("table1", "integrals of a*da, b*db, ada*, bdb*")
    s.add_argument("--q")
    s.add_argument("--with-F", action="store_true", dest="with_F")
    s.set_defaults(func=cmd_table1)

    s = command("verify", "run a verification suite")
    s.add_argument("--suite", choices=("pbw", "operators", "cocycle", "closedform", "oracle"), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int)
    s.add_argument("--q", default="1/2")
    s.add_argument("--max-2j", type=int, default=70, dest="max_2j")
    s.set_defaults(func=cmd_verify)

    s = command("oracle", "numeric residue on a truncated Hilbert space")
    s.add_argument("--form", required=True)
    s.add_argument("--power", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--n", type=int, choices=(1, 2, 3), default=1)
    s.add_argument("--q", required=True)
    s.add_argument("--max-2j", type=int, default=70, dest="max_2j")
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out, code = args.func(args)
    fmt = args.format or ("markdown" if args.command == "table1" else "json")
    if fmt == "json":
        text = json.dumps(out, indent=2)
    elif fmt == "csv":
        text = _csv(out)
    else:
        text = _markdown(out)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(out, fh, indent=2)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit status: 0 valid/success, 1 invalid (a certificate is printed),
2 unknown, 3 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import report as report_mod
from .decision import Countermodel, ValidityResult, decide, decide_formula, decide_quasi_equation
from .errors import ParseError, SignatureError
from .free import InterpolationError, build_free, interpolate, stats
from .kripke import KripkeModel, satisfies
from .perm import SA, SAD, TA, hat, prove
from .terms import (Equation, Neg, Signature, parse_formula, parse_statement, parse_term, parse_word,
                    print_formula, print_term, translate)

EXIT = {"valid": 0, "invalid": 1, "unknown": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    dim: int = 2
    sig: str = TA
    seed: int = 0
    budget: int = 1 << 20
    samples: int = 10_000
    json: bool = False

    def __post_init__(self):
        if self.dim < 2:
            raise UsageError("--dim must be at least 2")
        if self.budget <= 0 or self.samples <= 0:
            raise UsageError("budgets must be positive")

    @property
    def signature(self) -> Signature:
        return Signature(self.dim, self.sig)


def _common(p):
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sig", choices=[TA, SA, SAD], default=TA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-assignments", type=int, default=1 << 20, dest="budget")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="substalg", description="Decision procedures for transposition and substitution algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("decide", help="decide an equation or quasi-equation")
    p.add_argument("statement", nargs="?", default="-")
    _common(p)
    p = sub.add_parser("sat", help="satisfiability of a modal formula")
    p.add_argument("formula", nargs="?", default="-")
    _common(p)
    p = sub.add_parser("countermodel", help="Kripke countermodel for a non-valid formula")
    p.add_argument("formula", nargs="?", default="-")
    _common(p)
    p = sub.add_parser("interpolate", help="interpolant for a valid a <= c")
    p.add_argument("a")
    p.add_argument("c")
    p.add_argument("--shared", default=None, help="comma separated variables, e.g. x0,x1")
    _common(p)
    p = sub.add_parser("prove", help="derivation between transposition words: w1 = w2")
    p.add_argument("words", nargs="+")
    _common(p)
    p = sub.add_parser("free", help="free algebra statistics")
    p.add_argument("--gens", type=int, default=1)
    p.add_argument("--stats", action="store_true")
    _common(p)
    p = sub.add_parser("verify-paper", help="run the built-in structural checks and print a report")
    p.add_argument("--dim-max", type=int, default=4)
    _common(p)
    p = sub.add_parser("replay", help="re-check a JSON certificate printed by another command")
    p.add_argument("file", nargs="?", default="-")
    _common(p)
    return parser


def _text(arg: str) -> str:
    return sys.stdin.read().strip() if arg == "-" else arg


def _config(args) -> RunConfig:
    return RunConfig(args.dim, args.sig, args.seed, args.budget, args.samples, args.json)


# ---------------------------------------------------------------------------
# commands: each returns (exit status, JSON-able document)

def cmd_decide(args):
    cfg = _config(args)
    sig = cfg.signature
    text = _text(args.statement)
    stmt = parse_statement(text, sig)
    if isinstance(stmt, Equation):
        res = decide(stmt, sig)
    else:
        res = decide_quasi_equation(stmt, sig, cfg.budget, cfg.samples, cfg.seed)
    doc = {"command": "decide", "statement": str(stmt), "signature": sig.kind, "dim": sig.dim, **res.to_json()}
    if res.invalid:
        doc["certificate"] = {"type": "countermodel", "statement": str(stmt), "signature": sig.kind,
                              "dim": sig.dim, "countermodel": res.countermodel.to_json()}
    return EXIT[res.status], doc


def _formula_cert(f, sig, res: ValidityResult):
    k = res.detail["kripke"]
    return {"type": "kripke", "formula": print_formula(f), "signature": sig.kind, "dim": sig.dim,
            "model": k["model"], "witness": k["witness"]}


def cmd_countermodel(args):
    sig = _config(args).signature
    f = parse_formula(_text(args.formula), sig)
    res = decide_formula(f, sig)
    doc = {"command": "countermodel", "formula": print_formula(f), **res.to_json()}
    if res.invalid:
        doc["certificate"] = _formula_cert(f, sig, res)
    return EXIT[res.status], doc


def cmd_sat(args):
    sig = _config(args).signature
    f = parse_formula(_text(args.formula), sig)
    res = decide_formula(Neg(f), sig)
    doc = {"command": "sat", "formula": print_formula(f)}
    if res.invalid:
        k = res.detail["kripke"]
        doc.update(status="satisfiable", model=k["model"], witness=k["witness"])
        return 0, doc
    if res.valid:
        doc.update(status="unsatisfiable", method=res.method,
                   certificate={"type": "validity", "statement": f"{print_term(translate(Neg(f)))} = 1",
                                "signature": sig.kind, "dim": sig.dim})
        return 1, doc
    doc.update(status="unknown", detail=res.detail)
    return 2, doc


def cmd_interpolate(args):
    sig = _config(args).signature
    a = parse_term(args.a, sig)
    c = parse_term(args.c, sig)
    shared = None
    if args.shared:
        try:
            shared = [int(v.strip().lstrip("x")) for v in args.shared.split(",") if v.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --shared list: {args.shared}") from exc
    try:
        res = interpolate(a, c, sig, shared)
    except InterpolationError as exc:
        doc = {"command": "interpolate", "status": "failed", "reason": str(exc)}
        if exc.result is not None and exc.result.invalid:
            doc["certificate"] = {"type": "countermodel", "statement": str(exc.statement), "signature": sig.kind,
                                  "dim": sig.dim, "countermodel": exc.result.countermodel.to_json()}
        return 1, doc
    return 0, {"command": "interpolate", "status": "ok", **res.to_json()}


def cmd_prove(args):
    cfg = _config(args)
    text = " ".join(args.words)
    if text.count("=") != 1:
        raise UsageError("expected: prove <word1> = <word2>")
    left, right = text.split("=")
    sig = Signature(cfg.dim, SA if cfg.sig == SAD else cfg.sig)
    w1, w2 = parse_word(left.strip(), sig), parse_word(right.strip(), sig)
    h1, h2 = hat(w1), hat(w2)
    doc = {"command": "prove", "left": str(w1), "right": str(w2), "hat_left": list(h1.images),
           "hat_right": list(h2.images)}
    if h1 != h2:
        k = next(i for i in range(cfg.dim) if h1(i) != h2(i))
        doc.update(status="invalid", certificate={"type": "hat-mismatch", "left": str(w1), "right": str(w2),
                                                  "dim": cfg.dim, "point": k})
        return 1, doc
    if w1.transposition_only and w2.transposition_only:
        doc.update(status="valid", method="trace", trace=prove(w1, w2).to_json())
    else:
        doc.update(status="valid", method="hat")
    return 0, doc


def cmd_free(args):
    sig = _config(args).signature
    h = build_free(sig, args.gens)
    st = stats(h, seed=args.seed)
    return 0, {"command": "free", "signature": sig.kind, "dim": sig.dim, "gens": args.gens,
               "exhaustive": st.exhaustive, **st.to_json()}


def cmd_verify_paper(args):
    cfg = _config(args)
    if args.dim_max < 2:
        raise UsageError("--dim-max must be at least 2")
    rep = report_mod.build_report(args.dim_max, seed=cfg.seed, samples=cfg.samples)
    return (0 if rep["ok"] else 1), rep


def replay_certificate(cert: dict) -> bool:
    kind = cert.get("type")
    sig = Signature(int(cert.get("dim", 2)), cert.get("signature", TA))
    if kind == "countermodel":
        stmt = parse_statement(cert["statement"], sig)
        return Countermodel.from_json(cert["countermodel"]).replay(stmt)
    if kind == "kripke":
        f = parse_formula(cert["formula"], sig)
        model = KripkeModel.from_json(cert["model"])
        return not satisfies(model, tuple(cert["witness"]), f)
    if kind == "hat-mismatch":
        s = Signature(sig.dim, SA)
        k = cert["point"]
        return hat(parse_word(cert["left"], s))(k) != hat(parse_word(cert["right"], s))(k)
    if kind == "validity":
        return decide(parse_statement(cert["statement"], sig), sig).valid
    raise UsageError(f"unknown certificate type {kind!r}")


def cmd_replay(args):
    raw = sys.stdin.read() if args.file == "-" else open(args.file).read()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not JSON: {exc}") from exc
    cert = data.get("certificate", data)
    ok = replay_certificate(cert)
    return (0 if ok else 1), {"command": "replay", "type": cert.get("type"), "accepted": ok}


COMMANDS = {
    "decide": cmd_decide,
    "sat": cmd_sat,
    "countermodel": cmd_countermodel,
    "interpolate": cmd_interpolate,
    "prove": cmd_prove,
    "free": cmd_free,
    "verify-paper": cmd_verify_paper,
    "replay": cmd_replay,
}


def emit_report(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=False)
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict) and value:
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, list) and any(isinstance(v, dict) for v in value):
            for i, v in enumerate(value):
                walk(f"{prefix}.{i}", v)
        else:
            lines.append(f"{prefix}: {value}")

    if doc:
        walk("", doc)
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status, doc = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"parse error: {exc}\n{exc.pointer()}", file=sys.stderr)
        return 3
    except (SignatureError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(emit_report(doc, getattr(args, "json", False)))
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``tvx <subcommand> [options]``.

Exit codes: 0 ok, 1 computation or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from fractions import Fraction

from . import io as tio
from .algebra import NotClearedError, QLaurent, rat_str
from .classical import classical_commutator
from .factorization import commutator_factorization, standard_lines
from .algebra import SeriesContext
from .invariants import central_spectra, classical_gw, perturbative_spectra, refined_gw
from .quiver import QuiverError, build_bipartite, stable_poincare
from .scattering import DEFAULT_SEED, Diagram, is_consistent, perturbative_saturation
from .torus import slope_key
from .tropical import TropicalInvarianceError, WeightVector, enumerate_curves, refined_tropical_count
from .verify import SUITES, run_suite

FORMATS = ("table", "json", "csv", "svg")


class UsageError(ValueError):
    pass


class RunConfig:
    """Resolved options of one invocation."""

    def __init__(self, args: argparse.Namespace):
        self.subcommand = args.command
        self.order = getattr(args, "order", None)
        if self.order is not None and self.order < 1:
            raise UsageError("--order must be >= 1")
        self.l1 = getattr(args, "l1", None)
        self.l2 = getattr(args, "l2", None)
        self.fmt = args.format
        self.out = args.out
        self.seed = resolve_seed(args.seed)

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "order": self.order, "l1": self.l1, "l2": self.l2, "seed": self.seed}


def resolve_seed(flag) -> int:
    """--seed wins, then TVX_SEED, then the fixed default."""
    if flag is not None:
        return _int(flag)
    env = os.environ.get("TVX_SEED")
    if env:
        return _int(env)
    return DEFAULT_SEED


def _int(text) -> int:
    try:
        val = int(str(text), 0)
    except ValueError:
        raise UsageError(f"not an integer seed: {text!r}") from None
    if not 0 <= val < 1 << 64:
        raise UsageError("seed must fit in 64 bits")
    return val


def parse_parts(text: str) -> tuple:
    """'1,2' -> (1, 2)."""
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad partition: {text!r}") from None


def parse_weights(text: str) -> WeightVector:
    """'2;1,1' -> WeightVector(((2,), (1, 1)))."""
    classes = text.split(";")
    if len(classes) != 2:
        raise UsageError("--w takes two weight classes separated by ';'")
    return WeightVector(tuple(parse_parts(c) for c in classes))


def gamma_str(g) -> str:
    return f"({g[0]},{g[1]})"


def classical_str(f) -> str:
    """Wall function as '1 + t^2*x*y'."""
    parts = []
    for (e, m, a, b), c in sorted(f.items(), key=lambda kv: (kv[0][2] + kv[0][3], kv[0])):
        mono = [f.ctx.format_monomial((e, m))] if (any(e) or m) else []
        for name, p in (("x", a), ("y", b)):
            if p == 1:
                mono.append(name)
            elif p:
                mono.append(f"{name}^{p}")
        body = "*".join(mono)
        neg = c < 0
        a_ = -c if neg else c
        if not body:
            txt = rat_str(a_)
        elif a_ == 1:
            txt = body
        else:
            txt = f"{rat_str(a_)}*{body}"
        if parts:
            parts.append((" - " if neg else " + ") + txt)
        else:
            parts.append(("-" if neg else "") + txt)
    return "".join(parts) or "0"


# ---------------------------------------------------------------------------
# rendering


class Report:
    """Header, column names and string rows; rendered as table, json or csv."""

    def __init__(self, cfg: RunConfig, columns: list, rows: list, extra: dict | None = None, ok: bool = True):
        self.cfg = cfg
        self.columns = columns
        self.rows = rows
        self.extra = extra or {}
        self.ok = ok

    def render(self, fmt: str) -> str:
        if fmt == "json":
            obj = {"config": self.cfg.to_json(), "ok": self.ok,
                   "rows": [dict(zip(self.columns, r)) for r in self.rows]}
            obj.update(self.extra)
            return json.dumps(obj, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = _io.StringIO()
            wr = csv.writer(buf, lineterminator="\n")
            wr.writerow(self.columns)
            wr.writerows(self.rows)
            return buf.getvalue()
        widths = [max([len(c)] + [len(r[i]) for r in self.rows]) for i, c in enumerate(self.columns)]
        lines = [f"# seed {self.cfg.seed:#x}"]
        lines.append("  ".join(c.ljust(w) for c, w in zip(self.columns, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for r in self.rows:
            lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def spectrum_rows(spectra: dict) -> list:
    rows = []
    for g in sorted(spectra, key=slope_key, reverse=True):
        sp = spectra[g]
        for k, n, om in sp.rows():
            rows.append([gamma_str(g), str(k), str(n), rat_str(om), str(sp.poincare(k))])
    return rows


SPECTRUM_COLUMNS = ["gamma", "k", "n", "Omega", "P(k gamma)"]


# ---------------------------------------------------------------------------
# subcommands


def run_commutator(cfg: RunConfig, args) -> Report:
    if args.classical:
        diag = classical_commutator(cfg.l1, cfg.l2, cfg.order)
        rows = [[gamma_str(g), classical_str(diag.function(g))] for g in diag.directions()]
        return Report(cfg, ["gamma", "f"], rows)
    diag = commutator_factorization(cfg.l1, cfg.l2, cfg.order)
    ok = diag.is_consistent()
    return Report(cfg, SPECTRUM_COLUMNS, spectrum_rows(central_spectra(diag)), ok=ok)


def _scatter_diagram(cfg: RunConfig) -> Diagram:
    ctx = SeriesContext(["t"], [cfg.order])
    lines = standard_lines(ctx, [cfg.l1, cfg.l2], variables=["t", "t"])
    return perturbative_saturation(lines, cfg.order, cfg.seed)


def run_scatter(cfg: RunConfig, args):
    diag = _scatter_diagram(cfg)
    if cfg.fmt == "svg":
        return tio.diagram_svg(diag)
    ok = is_consistent(diag)
    spectra = perturbative_spectra(diag, 2, cfg.order)
    extra = {"walls": len(diag.walls), "consistent": ok}
    if cfg.fmt == "json":
        extra["diagram"] = diag.to_json()
    return Report(cfg, SPECTRUM_COLUMNS, spectrum_rows(spectra), extra, ok=ok)


def run_tropical(cfg: RunConfig, args):
    w = parse_weights(args.w)
    if cfg.fmt == "svg":
        curves, _ = enumerate_curves(w, seed=cfg.seed)
        if not curves:
            raise UsageError(f"no curves for {w}")
        return tio.curve_svg(curves[0])
    count = refined_tropical_count(w, seed=cfg.seed, n_configs=args.configs)
    curves, conf = enumerate_curves(w, seed=cfg.seed)
    rows = [[str(w), str(count), rat_str(count.eval_at_one()), str(len(curves))]]
    extra = {}
    if cfg.fmt == "json":
        extra["curves"] = [c.to_json() for c in curves]
    return Report(cfg, ["w", "N_trop", "q=1", "curves"], rows, extra)


def run_refined_gw(cfg: RunConfig, args) -> Report:
    P1, P2 = parse_parts(args.p1), parse_parts(args.p2)
    val = refined_gw(P1, P2, n_configs=args.configs)
    rows = [[",".join(map(str, P1)), ",".join(map(str, P2)), str(val), rat_str(classical_gw(P1, P2, args.configs))]]
    return Report(cfg, ["P1", "P2", "N_hat", "N (q=1)"], rows)


def run_quiver(cfg: RunConfig, args) -> Report:
    if args.dim is None:
        if args.p1 is None or args.p2 is None:
            raise UsageError("quiver-poincare needs --dim or --p1/--p2")
        P1, P2 = parse_parts(args.p1), parse_parts(args.p2)
        d = P1 + P2
        l1, l2 = len(P1), len(P2)
    else:
        d = parse_parts(args.dim)
        l1, l2 = cfg.l1, cfg.l2
        if l1 is None or l2 is None:
            raise UsageError("--dim needs --l1 and --l2")
        if len(d) != l1 + l2:
            raise UsageError("dimension vector length must be l1 + l2")
    p = stable_poincare(build_bipartite(l1, l2), d)
    return Report(cfg, ["quiver", "d", "P", "chi"], [[f"K({l1},{l2})", ",".join(map(str, d)), str(p),
                                                      rat_str(p.eval_at_one())]])


def run_verify(cfg: RunConfig, args) -> Report:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    params = {"seed": cfg.seed}
    for key in ("max_lines", "max_size", "order", "max_ell", "n_seeds", "n_cases"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    cases = run_suite(args.suite, **params)
    ok = all(c["ok"] for c in cases)
    rows = [[json.dumps(c["case"], sort_keys=True), "pass" if c["ok"] else "FAIL",
             json.dumps({k: v for k, v in c.items() if k not in ("case", "ok")}, sort_keys=True)] for c in cases]
    extra = {"suite": args.suite, "passed": sum(c["ok"] for c in cases), "total": len(cases)}
    if cfg.fmt == "json":
        extra["cases"] = cases
    return Report(cfg, ["case", "verdict", "detail"], rows, extra, ok=ok)


def run_export(cfg: RunConfig, args) -> str:
    if args.object == "curve":
        if args.w is None:
            raise UsageError("export curve needs --w")
        curves, _ = enumerate_curves(parse_weights(args.w), seed=cfg.seed)
        if not curves:
            raise UsageError("no curves for these weights")
        return tio.curve_svg(curves[0])
    if args.object == "empty":
        return tio.diagram_svg(Diagram(SeriesContext()))
    return tio.diagram_svg(_scatter_diagram(cfg))


COMMANDS = {
    "commutator": run_commutator,
    "scatter": run_scatter,
    "tropical-count": run_tropical,
    "refined-gw": run_refined_gw,
    "quiver-poincare": run_quiver,
    "verify": run_verify,
    "export": run_export,
}
SVG_COMMANDS = {"scatter", "tropical-count", "export"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", default=None, help="64-bit seed (default 0xC0FFEE, or $TVX_SEED)")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", default=None, help="write output to this path")

    p = argparse.ArgumentParser(prog="tvx", description="Quantum tropical vertex computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def ells(sp, default=1):
        sp.add_argument("--l1", type=int, default=default)
        sp.add_argument("--l2", type=int, default=default)

    sp = sub.add_parser("commutator", parents=[common], help="slope-ordered factorization of a commutator")
    ells(sp)
    sp.add_argument("--order", type=int, default=4)
    sp.add_argument("--classical", action="store_true", help="commutative engine, print wall functions")

    sp = sub.add_parser("scatter", parents=[common], help="perturbed diagram saturated by pair scattering")
    ells(sp)
    sp.add_argument("--order", type=int, default=2)

    sp = sub.add_parser("tropical-count", parents=[common], help="refined count of tropical curves")
    sp.add_argument("--w", required=True, help="weights, e.g. '1,2;1,1'")
    sp.add_argument("--configs", type=int, default=2, help="generic configurations to compare")

    sp = sub.add_parser("refined-gw", parents=[common], help="refined invariant from ordered partitions")
    sp.add_argument("--p1", required=True)
    sp.add_argument("--p2", required=True)
    sp.add_argument("--configs", type=int, default=2)

    sp = sub.add_parser("quiver-poincare", parents=[common], help="stable Poincare polynomial of K(l1,l2)")
    ells(sp, default=None)
    sp.add_argument("--dim", default=None, help="dimension vector, sources first")
    sp.add_argument("--p1", default=None)
    sp.add_argument("--p2", default=None)

    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("--suite", required=True)
    sp.add_argument("--max-lines", dest="max_lines", type=int, default=None)
    sp.add_argument("--max-size", dest="max_size", type=int, default=None)
    sp.add_argument("--max-ell", dest="max_ell", type=int, default=None)
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--n-seeds", dest="n_seeds", type=int, default=None)
    sp.add_argument("--n-cases", dest="n_cases", type=int, default=None)

    sp = sub.add_parser("export", parents=[common], help="write an SVG picture")
    sp.add_argument("object", choices=("diagram", "curve", "empty"))
    ells(sp)
    sp.add_argument("--order", type=int, default=2)
    sp.add_argument("--w", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "export":
            args.format = "svg"
        cfg = RunConfig(args)
        if cfg.fmt == "svg" and cfg.subcommand not in SVG_COMMANDS:
            raise UsageError(f"--format svg is not available for {cfg.subcommand}")
        result = COMMANDS[cfg.subcommand](cfg, args)
    except (UsageError, QuiverError, ValueError) as exc:
        print(f"tvx: error: {exc}", file=sys.stderr)
        return 2
    except (NotClearedError, TropicalInvarianceError, ArithmeticError, RuntimeError) as exc:
        print(f"tvx: failure: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, Report):
        text, ok = result.render(cfg.fmt), result.ok
    else:
        text, ok = result, True
    if cfg.out:
        try:
            tio.write_text(cfg.out, text)
        except OSError as exc:
            print(f"tvx: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

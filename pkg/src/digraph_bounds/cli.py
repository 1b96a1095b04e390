"""Command-line front end.

    digraph-bounds analyze g.edges
    digraph-bounds bounds g.edges --family xu --k 1 --N 2
    digraph-bounds sweep g.edges --budget 4
    digraph-bounds equality g.edges --family liu --k 0 --L 2
    digraph-bounds paper-tables g.edges --budget 4

Text output rounds to 4 decimals; exact rationals with a short decimal
expansion print as such ("2", "2.5"). JSON keeps full precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from .bounds import (
    BoundParams,
    BoundResult,
    SweepTable,
    bound_sweep,
    compute_tier,
    frobenius_bounds,
    kolotilina_best,
    kolotilina_bounds,
    liu_bounds,
    rational_root,
    weighted_bounds,
    xu_bounds,
)
from .equality import EqualityReport, equality_diagnosis
from .graph import Digraph, cyclic_structure, load_digraph, scc, transpose, trim
from .reference import CHARPOLY_MAX_N, exact_charpoly_radius, spectral_radius_oracle
from .walks import reach_pattern, walk_table

DAGGER, DDAGGER, STAR = "†", "‡", "*"


class DataError(Exception):
    """Bad input data; exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def format_value(value: float, exact: Fraction | None = None) -> str:
    """4-decimal text, or the exact decimal when it has at most 4 digits."""
    if exact is not None and (exact * 10**4).denominator == 1:
        scaled = int(exact * 10**4)
        whole, frac = divmod(abs(scaled), 10**4)
        sign = "-" if scaled < 0 else ""
        digits = f"{frac:04d}".rstrip("0")
        return f"{sign}{whole}" + (f".{digits}" if digits else "")
    return f"{value:.4f}"


def _natural(label: str):
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


def _vertex_order(g: Digraph) -> list[int]:
    return sorted(range(g.n), key=lambda i: _natural(g.labels[i]))


def _arg_label(g: Digraph, arg) -> str:
    if isinstance(arg, tuple):
        return "->".join(g.labels[v] for v in arg)
    return g.labels[arg]


def _frac(q: Fraction | None):
    return None if q is None else str(q)


def _result_record(g: Digraph, r: BoundResult) -> dict:
    p = r.params
    rec = {
        "family": p.family,
        "params": p.label(),
        "k": p.k,
        "lower": r.lower,
        "upper": r.upper,
        "arg_lower": _arg_label(g, r.arg_lower),
        "arg_upper": _arg_label(g, r.arg_upper),
        "lower_exact": _frac(r.lower_exact),
        "upper_exact": _frac(r.upper_exact),
    }
    if p.family in ("liu", "kolotilina"):
        rec["L"] = p.L
    if p.family == "xu":
        rec["M"], rec["N"] = p.M, p.N
    if p.family == "kolotilina":
        rec.update(
            alpha_lower=r.alpha_lower, alpha_upper=r.alpha_upper,
            lower_alpha_independent=r.lower_alpha_independent,
            upper_alpha_independent=r.upper_alpha_independent,
        )
    return rec


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("edge-list", "dense"), default="edge-list")
    common.add_argument("--transpose", action="store_true",
                        help="use column sums (bounds on the reversed digraph)")
    common.add_argument("--output", choices=("text", "csv", "json"), default="text")
    common.add_argument("--tol", type=float, default=None,
                        help="oracle / root-check tolerance")
    return common


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="digraph-bounds", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common_options()

    p = sub.add_parser("analyze", parents=[common], help="structure and oracle spectral radius")
    p.add_argument("file")

    p = sub.add_parser("bounds", parents=[common], help="one bound family")
    p.add_argument("file")
    p.add_argument("--family", required=True,
                   choices=("frobenius", "weighted", "liu", "xu", "kolotilina"))
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--L", type=_pos, default=1)
    p.add_argument("--M", type=_pos, default=1)
    p.add_argument("--N", type=_nonneg, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--grid-step", type=float)
    p.add_argument("--weights", help="file of positive vertex weights")

    for name, helptext in (("sweep", "all bounds up to a walk-order budget"),
                           ("paper-tables", "liu/xu/kolotilina tables with markers")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.add_argument("--budget", type=_pos, default=4)
        p.add_argument("--grid-step", type=float, default=0.01)

    p = sub.add_parser("equality", parents=[common], help="equality diagnosis")
    p.add_argument("file")
    p.add_argument("--family", required=True, choices=("liu", "xu"))
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--L", type=_pos, default=1)
    p.add_argument("--M", type=_pos, default=1)
    p.add_argument("--N", type=_nonneg, default=1)
    return parser


def _read_graph(args) -> Digraph:
    try:
        with open(args.file, encoding="utf-8") as fh:
            g = load_digraph(fh, args.format)
    except OSError as exc:
        raise DataError(f"cannot read {args.file}: {exc.strerror}") from exc
    return transpose(g) if args.transpose else g


def _read_weights(path: str, g: Digraph) -> list[Fraction]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        if all(len(ln) == 2 for ln in lines) and {ln[0] for ln in lines} == set(g.labels):
            by_label = {lab: Fraction(v) for lab, v in lines}
            return [by_label[lab] for lab in g.labels]
        return [Fraction(tok) for ln in lines for tok in ln]
    except (KeyError, ValueError) as exc:
        raise DataError(f"bad weights file {path}: {exc}") from exc


def _prepare(g: Digraph, notes: list[str], force: bool) -> Digraph:
    """Trim sinks when needed, recording a notice."""
    if not force or not g.sinks():
        return g
    trimmed, report = trim(g)
    notes.append(
        f"removed {len(report.removed_sinks)} sink(s) in {report.rounds} round(s): "
        + " ".join(lab for _, lab in report.removed_sinks)
    )
    if report.became_empty:
        notes.append("digraph trimmed to empty; spectral radius is 0")
    return trimmed


# ---- commands ------------------------------------------------------------


def _cmd_analyze(args, g: Digraph, notes: list[str]) -> dict:
    info: dict = {"n": g.n, "arcs": g.num_arcs,
                  "self_loops": sum(m for (i, j), m in g.arcs.items() if i == j)}
    info["sinks"] = [g.labels[v] for v in g.sinks()]
    info["sources"] = [g.labels[v] for v in g.sources()]
    if g.n == 0:
        info.update(strongly_connected=False, rho_oracle=0.0)
        return info
    trimmed, report = trim(g)
    info["trim_rounds"] = report.rounds
    info["trimmed_to_empty"] = report.became_empty
    dec = scc(g)
    info["components"] = len(dec.components)
    info["strongly_connected"] = dec.is_strongly_connected
    info["h"] = cyclic_structure(g).h if dec.is_strongly_connected and g.arcs else None
    tol = args.tol or 1e-10
    oracle = spectral_radius_oracle(g, tol)
    info["rho_oracle"] = oracle.rho
    info["oracle_converged"] = oracle.converged
    info["rho_charpoly"] = exact_charpoly_radius(g) if g.n <= CHARPOLY_MAX_N else None
    fro = frobenius_bounds(g)
    info["frobenius"] = [fro.lower, fro.upper]
    if not oracle.converged:
        notes.append("power iteration did not converge; rho_oracle is an estimate")
    return info


def _single_bound(args, g: Digraph, notes: list[str]) -> tuple[Digraph, BoundResult | None]:
    """Evaluate the requested family; returns the graph actually used."""
    fam = args.family
    if fam == "frobenius":
        return g, frobenius_bounds(g)
    if fam == "weighted":
        if not args.weights:
            raise _UsageError("digraph-bounds bounds: error: --weights is required for weighted")
        return g, weighted_bounds(g, _read_weights(args.weights, g))
    g = _prepare(g, notes, args.k > 0 or fam == "kolotilina")
    if g.n == 0:
        return g, None
    if fam == "liu":
        return g, liu_bounds(walk_table(g, args.k + args.L), args.k, args.L)
    if fam == "xu":
        wt = walk_table(g, args.k + max(args.M, args.N))
        return g, xu_bounds(wt, reach_pattern(g, args.M), args.k, args.M, args.N)
    wt = walk_table(g, args.k + args.L)
    pat = reach_pattern(g, args.L)
    if args.alpha is not None:
        return g, kolotilina_bounds(wt, pat, args.k, args.L, args.alpha)
    return g, kolotilina_best(wt, pat, args.k, args.L, args.grid_step or 0.01)


# ---- rendering -------------------------------------------------------------


def _cell(value: float, exact: Fraction | None, mark: str = "") -> str:
    return format_value(value, exact) + mark


def _table(header: list[str], rows: list[list[str] | None], sep_after: int) -> list[str]:
    """Fixed-width text table; ``None`` rows become tier rules."""
    body = [r for r in rows if r is not None]
    widths = [max(len(x) for x in col) for col in zip(header, *body)]

    def line(cells):
        head = cells[0].ljust(widths[0])
        left = " ".join(c.rjust(w) for c, w in zip(cells[1:sep_after], widths[1:sep_after]))
        right = " ".join(c.rjust(w) for c, w in zip(cells[sep_after:], widths[sep_after:]))
        parts = [head, left] if left else [head]
        return " | ".join(parts) + " || " + right

    out = [line(header)]
    rule = "-" * len(out[0])
    out.append(rule.replace("-", "="))
    for r in rows:
        out.append(rule if r is None else line(r))
    return out


def _with_rules(results: list[BoundResult], cells) -> list[list[str] | None]:
    rows: list[list[str] | None] = []
    tier = None
    for idx, r in enumerate(results):
        t = compute_tier(r.params.order)
        if tier is not None and t != tier:
            rows.append(None)
        tier = t
        rows.append(cells(idx, r))
    return rows


def _kolo_cell(value, exact, alpha, independent) -> str:
    if independent:
        return format_value(value, exact) + STAR
    return f"{value:.4f}@α={alpha:.2f}"


def render_tables(g: Digraph, table: SweepTable, intermediates: bool) -> list[str]:
    order = _vertex_order(g)
    lm, xm = table.liu_markers(), table.xu_markers()
    out = [f"Table 1. Liu bounds, (k,L) with k+L <= {table.budget}"]
    header = ["(k,L)"] + ([f"i={g.labels[v]}" for v in order] if intermediates else [])
    header += ["min", "max"]

    def liu_cells(idx, r):
        cells = [r.params.label()]
        if intermediates:
            vals = r.term_values()
            for v in order:
                t = r.terms[v]
                cells.append(format_value(vals[v], rational_root(t, r.degree)))
        cells.append(_cell(r.lower, r.lower_exact, DAGGER if lm[idx][0] else ""))
        cells.append(_cell(r.upper, r.upper_exact, DAGGER if lm[idx][1] else ""))
        return cells

    out += _table(header, _with_rules(table.liu, liu_cells), len(header) - 2)
    out.append("")
    out.append(f"Table 2. Xu bounds (M=1), (k,N) with k+N <= {table.budget}")

    def xu_cells(idx, r):
        return [r.params.label(),
                _cell(r.lower, r.lower_exact, DDAGGER if xm[idx][0] else ""),
                _cell(r.upper, r.upper_exact, DDAGGER if xm[idx][1] else "")]

    out += _table(["(k,N)", "lower", "upper"], _with_rules(table.xu, xu_cells), 1)
    out.append("")
    out.append("Table 3. Kolotilina bounds (L=1), best alpha on the grid")

    def kolo_cells(idx, r):
        return [r.params.label(),
                _kolo_cell(r.lower, r.lower_exact, r.alpha_lower, r.lower_alpha_independent),
                _kolo_cell(r.upper, r.upper_exact, r.alpha_upper, r.upper_alpha_independent)]

    rows = [kolo_cells(i, r) for i, r in enumerate(table.kolotilina)]
    out += _table(["(k,L)", "lower", "upper"], rows, 1)
    out.append("")
    out.append(f"{DAGGER} tightest Liu side in the top tier; "
               f"{DDAGGER} Xu side tighter than every Liu row of its tier; "
               f"{STAR} independent of alpha")
    return out


def _render_equality(g: Digraph, rep: EqualityReport) -> list[str]:
    p = rep.params
    out = [f"family {p.family} {p.label()}"]
    if not rep.applicable:
        out.append(f"equality theory inapplicable: {rep.reason}")
        out.append(f"bounds collapse: {rep.bounds_collapse}")
        return out
    b = rep.bound
    out.append(f"bounds: [{format_value(b.lower, b.lower_exact)}, {format_value(b.upper, b.upper_exact)}]")
    out.append(f"index of imprimitivity h = {rep.h}; r = {rep.r_used}")
    out.append(f"average {rep.kappa}-outdegree regular: {rep.regular}"
               + (f" (c = {rep.c})" if rep.regular else ""))
    if rep.r_used > 1:
        out.append(f"average {rep.kappa}-outdegree {rep.r_used}-quasiregular: {rep.quasiregular}")
        if rep.partition is not None:
            blocks = [[g.labels[v] for v in _vertex_order(g) if rep.partition[v] == b]
                      for b in range(rep.r_used)]
            out.append("cyclic partition (up to rotation): "
                       + " | ".join("{" + ",".join(bl) + "}" for bl in blocks))
        if rep.block_constants:
            out.append("block constants: " + ", ".join(str(c) for c in rep.block_constants))
    out.append(f"clause: {rep.clause}")
    out.append(f"equality predicted: {rep.equality_predicted}")
    if rep.root_check is not None:
        rc = rep.root_check
        out.append(f"rho^{rc.r} = {rep.rho_power} (rho = {rc.rho:.4f}); "
                   f"integer check: {rc.verdict} (nearest {rc.nearest})")
    return out


def _equality_record(g: Digraph, rep: EqualityReport) -> dict:
    rec = {
        "family": rep.params.family, "params": rep.params.label(),
        "applicable": rep.applicable, "reason": rep.reason, "kappa": rep.kappa,
        "h": rep.h, "r": rep.r_used, "regular": rep.regular, "c": _frac(rep.c),
        "quasiregular": rep.quasiregular,
        "block_constants": None if rep.block_constants is None
        else [str(c) for c in rep.block_constants],
        "partition": None if rep.partition is None
        else {g.labels[v]: b + 1 for v, b in enumerate(rep.partition)},
        "clause": rep.clause, "equality_predicted": rep.equality_predicted,
        "bounds_collapse": rep.bounds_collapse, "rho_power": _frac(rep.rho_power),
    }
    if rep.bound is not None:
        rec["lower"], rec["upper"] = rep.bound.lower, rep.bound.upper
    if rep.root_check is not None:
        rc = rep.root_check
        rec["root_check"] = {"rho": rc.rho, "r": rc.r, "nearest": rc.nearest,
                             "verdict": rc.verdict}
    return rec


def _csv(records: list[dict]) -> str:
    buf = io.StringIO()
    keys: list[str] = []
    for rec in records:
        keys += [k for k in rec if k not in keys]
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v
                         for k, v in rec.items()})
    return buf.getvalue()


def _emit(args, notes: list[str], records: list[dict], text: list[str], extra=None) -> str:
    if args.output == "json":
        payload = {"command": args.command, "notes": notes, "results": records}
        if extra:
            payload.update(extra)
        return json.dumps(payload, indent=2) + "\n"
    if args.output == "csv":
        return _csv(records)
    return "\n".join([f"note: {n}" for n in notes] + text) + "\n"


def _sweep_records(g: Digraph, table: SweepTable) -> list[dict]:
    recs = []
    for name, rows in (("liu", table.liu), ("xu", table.xu), ("kolotilina", table.kolotilina)):
        for r in rows:
            rec = _result_record(g, r)
            if name == "liu":
                rec["terms"] = {g.labels[v]: x for v, x in enumerate(r.term_values())}
            recs.append(rec)
    return recs


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Parse ``argv`` and execute; returns ``(exit status, rendered output)``."""
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return 2, str(exc) + "\n"
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    notes: list[str] = []
    try:
        g = _read_graph(args)
        if args.command == "analyze":
            info = _cmd_analyze(args, g, notes)
            text = []
            for key, val in info.items():
                if isinstance(val, float):
                    val = f"{val:.4f}"
                elif isinstance(val, list):
                    val = ", ".join(format_value(x, Fraction(x)) if isinstance(x, float) else str(x)
                                    for x in val) or "none"
                text.append(f"{key}: {val}")
            return 0, _emit(args, notes, [info], text)

        if g.n == 0:
            raise DataError("empty digraph")

        if args.command == "bounds":
            if args.family == "kolotilina" and args.alpha is not None and not 0 <= args.alpha <= 1:
                raise _UsageError("digraph-bounds bounds: error: --alpha must lie in [0, 1]")
            gg, r = _single_bound(args, g, notes)
            if r is None:
                return 0, _emit(args, notes, [{"lower": 0.0, "upper": 0.0}], ["bounds: [0, 0]"])
            rec = _result_record(gg, r)
            text = [f"family {r.params.family} {r.params.label()}".rstrip(),
                    f"lower: {format_value(r.lower, r.lower_exact)} (at {rec['arg_lower']})",
                    f"upper: {format_value(r.upper, r.upper_exact)} (at {rec['arg_upper']})"]
            if r.params.family == "kolotilina":
                text[1] += f" alpha={r.alpha_lower:.2f}" + (" *" if r.lower_alpha_independent else "")
                text[2] += f" alpha={r.alpha_upper:.2f}" + (" *" if r.upper_alpha_independent else "")
            return 0, _emit(args, notes, [rec], text)

        if args.command in ("sweep", "paper-tables"):
            gg = _prepare(g, notes, True)
            if gg.n == 0:
                return 0, _emit(args, notes, [], [])
            table = bound_sweep(gg, args.budget, args.grid_step)
            text = render_tables(gg, table, intermediates=args.command == "paper-tables")
            return 0, _emit(args, notes, _sweep_records(gg, table), text)

        if args.command == "equality":
            params = BoundParams(args.family, k=args.k, L=args.L, M=args.M, N=args.N)
            gg = _prepare(g, notes, True)
            if gg.n == 0:
                raise DataError("digraph trimmed to empty; equality theory does not apply")
            rep = equality_diagnosis(gg, params, tol=args.tol or 1e-6)
            return 0, _emit(args, notes, [_equality_record(gg, rep)], _render_equality(gg, rep))
    except _UsageError as exc:
        return 2, str(exc) + "\n"
    except (DataError, ValueError, RuntimeError) as exc:
        return 1, f"error: {exc}\n"
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Sequence[str] | None = None) -> int:
    code, output = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr
    stream.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every verb loads JSON inputs, calls library functions and prints the result
as JSON, CSV or an aligned text table.  Exit codes: 0 ok, 2 input error,
3 numeric failure (including non-Hermitian input and failed searches),
4 scale limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .calculus import MonotoneExtFunction, apply_to_operator, check_family_shift, check_ofA_eq_foA
from .daseinise import das_inner, das_outer, per_atom_table, restriction_check_inner, restriction_check_outer
from .errors import InputError, NotFound, NotHermitian, NumericError, SpecOrderError, TooManyAtoms
from .extreal import format_value, to_json
from .jsonio import context_from_json, load_json, matrix_to_json, operator_from_json
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance
from .order import linear_not_spectral_witness, spectral_join, spectral_leq, spectral_meet, vector_lattice_counterexample
from .projlat import complement
from .qobs import tabulate
from .spectral import family_from_operator

MAX_QOBS_ATOMS = 12

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_SCALE = 0, 2, 3, 4

CSV_HELP = """\
CSV columns by verb:
  spectral        k,r,rank,multiplicity
  qobs            mask,o,z,a
  das             atom,rank,outer,inner
  order           direction,leq_s,leq_linear,witness_r
  lattice         op,row,col,re,im
  calc            check,result
  counterexample  name,row,col,re,im
Values -inf / +inf are written literally; booleans as true / false.
"""


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: List[str]
    tol: Tolerance
    seed: int
    fmt: str


class _Table:
    """Rows for CSV and pretty output, plus the JSON document."""

    def __init__(self, header: Sequence[str], rows: List[List[Any]], doc: Any):
        self.header = list(header)
        self.rows = rows
        self.doc = doc


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_value(v)
    if v is None:
        return ""
    return str(v)


def _render(t: _Table, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(t.doc, indent=2) + "\n"
    cells = [[_cell(v) for v in row] for row in t.rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.header)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(t.header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(t.header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _matrix_rows(name: str, m: np.ndarray) -> List[List[Any]]:
    doc = matrix_to_json(m)
    im = doc.get("im")
    return [
        [name, i, j, doc["re"][i][j], im[i][j] if im else 0.0]
        for i in range(doc["dim"])
        for j in range(doc["dim"])
    ]


def _operator(path: str, cfg: RunConfig) -> HermitianOperator:
    return operator_from_json(load_json(path), cfg.tol)


def cmd_spectral(cfg: RunConfig) -> _Table:
    a = _operator(cfg.inputs[0], cfg)
    fam = family_from_operator(a)
    rows, jumps, prev = [], [], 0
    for k, (r, p) in enumerate(fam.jumps, start=1):
        rows.append([k, r, p.rank, p.rank - prev])
        jumps.append({"r": r, "rank": p.rank, "P": matrix_to_json(p.matrix)})
        prev = p.rank
    return _Table(["k", "r", "rank", "multiplicity"], rows, {"continuity": "right", "jumps": jumps})


def _context(path: str, cfg: RunConfig):
    return context_from_json(load_json(path), cfg.tol)


def cmd_qobs(cfg: RunConfig) -> _Table:
    a = _operator(cfg.inputs[0], cfg)
    ctx = _context(cfg.inputs[1], cfg)
    if ctx.k > MAX_QOBS_ATOMS:
        raise TooManyAtoms(f"{ctx.k} atoms; tabulation is limited to {MAX_QOBS_ATOMS}")
    values = tabulate(a, ctx.lattice(), cfg.tol)
    rows = [[mask, o, z, av] for mask, (o, z, av) in enumerate(values)]
    doc = {
        name: {"entries": [{"P_mask": mask, "value": to_json(v[col])} for mask, v in enumerate(values)]}
        for col, name in enumerate(("o", "z", "a"))
    }
    return _Table(["mask", "o", "z", "a"], rows, doc)


def cmd_das(cfg: RunConfig) -> _Table:
    a = _operator(cfg.inputs[0], cfg)
    ctx = _context(cfg.inputs[1], cfg)
    outer, inner = das_outer(a, ctx), das_inner(a, ctx)
    table = per_atom_table(a, ctx)
    rows = [[t["atom"], ctx.atoms[t["atom"]].rank, t["o"], t["a"]] for t in table]
    doc = {
        "outer": matrix_to_json(outer.matrix),
        "inner": matrix_to_json(inner.matrix),
        "atoms": [{"atom": t["atom"], "outer": to_json(t["o"]), "inner": to_json(t["a"])} for t in table],
        "checks": {
            "restriction_outer": restriction_check_outer(a, ctx, outer),
            "restriction_inner": restriction_check_inner(a, ctx, inner),
        },
    }
    return _Table(["atom", "rank", "outer", "inner"], rows, doc)


def _verdict_doc(v) -> Dict[str, Any]:
    return {"leq_s": v.leq_s, "leq_linear": v.leq_linear, "witness_r": v.witnesses[0].r if v.witnesses else None}


def cmd_order(cfg: RunConfig) -> _Table:
    a, b = _operator(cfg.inputs[0], cfg), _operator(cfg.inputs[1], cfg)
    ab, ba = spectral_leq(a, b, cfg.tol), spectral_leq(b, a, cfg.tol)
    doc = {"A<=B": _verdict_doc(ab), "B<=A": _verdict_doc(ba)}
    rows = [[k, d["leq_s"], d["leq_linear"], d["witness_r"]] for k, d in doc.items()]
    return _Table(["direction", "leq_s", "leq_linear", "witness_r"], rows, doc)


def cmd_lattice(cfg: RunConfig) -> _Table:
    ops = [_operator(p, cfg) for p in cfg.inputs]
    meet, join = spectral_meet(ops, cfg.tol), spectral_join(ops, cfg.tol)
    doc = {"meet": matrix_to_json(meet.matrix), "join": matrix_to_json(join.matrix)}
    return _Table(["op", "row", "col", "re", "im"], _matrix_rows("meet", meet.matrix) + _matrix_rows("join", join.matrix), doc)


def _calc_sample(a: HermitianOperator) -> List[Projection]:
    jumps = family_from_operator(a).projections
    coords = [Projection.coordinate(a.dim, [i]) for i in range(a.dim)]
    return jumps + [complement(p) for p in jumps] + coords


def cmd_calc(cfg: RunConfig) -> _Table:
    a = _operator(cfg.inputs[0], cfg)
    f = MonotoneExtFunction.from_json(load_json(cfg.inputs[1]))
    fa = apply_to_operator(f, a)
    shift_ok = check_family_shift(a, f)
    o_ok = check_ofA_eq_foA(a, f, _calc_sample(a))
    doc = {"f_of_A": matrix_to_json(fa.matrix), "checks": {"family_shift": shift_ok, "o_f_commute": o_ok}}
    return _Table(["check", "result"], [["family_shift", shift_ok], ["o_f_commute", o_ok]], doc)


def cmd_counterexample(cfg: RunConfig, kind: str, dim: int) -> _Table:
    if kind == "translation":
        a, b, c = vector_lattice_counterexample(dim, cfg.seed, tol=cfg.tol)
        mats = {"A": a, "B": b, "C": c}
        extra: Dict[str, Any] = {}
    else:
        a, b, n = linear_not_spectral_witness(cfg.seed, tol=cfg.tol)
        mats = {"A": a, "B": b}
        extra = {"first_failing_power": n}
    doc = {k: matrix_to_json(v.matrix) for k, v in mats.items()}
    doc.update(extra)
    doc["seed"] = cfg.seed
    rows = [row for k, v in mats.items() for row in _matrix_rows(k, v.matrix)]
    return _Table(["name", "row", "col", "re", "im"], rows, doc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-cluster", type=float, default=None, help="eigenvalue clustering tolerance")
    common.add_argument("--tol-proj", type=float, default=None, help="projection comparison tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty", dest="fmt")

    p = argparse.ArgumentParser(
        prog="specorder",
        description="Spectral order, q-observable functions and daseinisation for Hermitian matrices.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter
    sub.add_parser("spectral", parents=[common], help="jump table of the spectral family", epilog=CSV_HELP, formatter_class=fmt).add_argument("operator")
    for name, text in (("qobs", "o, z and a over a context lattice"), ("das", "outer and inner daseinisation")):
        sp = sub.add_parser(name, parents=[common], help=text, epilog=CSV_HELP, formatter_class=fmt)
        sp.add_argument("operator")
        sp.add_argument("context")
    sp = sub.add_parser("order", parents=[common], help="spectral and linear order in both directions", epilog=CSV_HELP, formatter_class=fmt)
    sp.add_argument("a")
    sp.add_argument("b")
    sub.add_parser("lattice", parents=[common], help="spectral meet and join", epilog=CSV_HELP, formatter_class=fmt).add_argument(
        "operators", nargs="+"
    )
    sp = sub.add_parser("calc", parents=[common], help="f(A) and the functional calculus checks", epilog=CSV_HELP, formatter_class=fmt)
    sp.add_argument("operator")
    sp.add_argument("function")
    sp = sub.add_parser("counterexample", parents=[common], help="seeded witness search", epilog=CSV_HELP, formatter_class=fmt)
    sp.add_argument("--kind", choices=["translation", "linear"], default="translation")
    sp.add_argument("--dim", type=int, default=2)
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    tol = DEFAULT_TOL.replace(cluster=args.tol_cluster, proj=args.tol_proj)
    inputs = [
        getattr(args, k)
        for k in ("operator", "context", "a", "b", "function")
        if getattr(args, k, None) is not None
    ]
    inputs += list(getattr(args, "operators", None) or [])
    return RunConfig(args.command, inputs, tol, args.seed, args.fmt)


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        if cfg.command == "counterexample":
            table = cmd_counterexample(cfg, args.kind, args.dim)
        else:
            table = COMMANDS[cfg.command](cfg)
    except NotHermitian as exc:
        return _fail(exc, EXIT_NUMERIC)
    except TooManyAtoms as exc:
        return _fail(exc, EXIT_SCALE)
    except (InputError, ValueError) as exc:
        return _fail(exc, EXIT_INPUT)
    except (NumericError, NotFound, SpecOrderError) as exc:
        return _fail(exc, EXIT_NUMERIC)
    sys.stdout.write(_render(table, cfg.fmt))
    return EXIT_OK


def _fail(exc: Exception, code: int) -> int:
    sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
    return code


COMMANDS = {
    "spectral": cmd_spectral,
    "qobs": cmd_qobs,
    "das": cmd_das,
    "order": cmd_order,
    "lattice": cmd_lattice,
    "calc": cmd_calc,
}


def main() -> None:
    sys.exit(run())

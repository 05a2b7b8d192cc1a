"""Command line: ``periodcoh {periodize,tduality,tower,bar,verify}``.

Exit codes: 0 success, 1 a checked identity failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .modcat import CoefficientRing, RAT
from .models.bar import bar_cohomology
from .models.poly import build_z_model, compose_D, d_dz, torus_extend
from .periodic import (
    TruncationBudgetError,
    kernel_basis,
    lim1_sequence_check,
    periodize,
    verify_periodicity,
    z_instance,
)
from .towers import Tower, mittag_leffler_classify, symbolic_limit
from .tduality import T_periodized, T_unperiodized, build_tduality_model, double_tduality


class UsageError(Exception):
    pass


class InvariantFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    ring: str = "Z"
    trunc: int = 10
    depth: int = 6
    format: str = "table"
    out: Optional[str] = None
    group: int = 2
    maxdeg: int = 4
    tower_file: Optional[str] = None

    def coefficient_ring(self) -> CoefficientRing:
        try:
            return CoefficientRing.parse(self.ring)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def check_truncation(self):
        if self.depth < 2:
            raise UsageError(f"--depth must be at least 2 (got {self.depth})")
        if self.trunc < self.depth + 2:
            raise UsageError(f"--trunc must be at least depth + 2 = {self.depth + 2} (got {self.trunc})")


def plain(x):
    """JSON-friendly copy: fractions become ints or ``"p/q"`` strings."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    return x


# -- commands ------------------------------------------------------------------

def cmd_periodize(cfg: RunConfig) -> tuple[dict, list]:
    cfg.check_truncation()
    ring = cfg.coefficient_ring()
    inst = z_instance(ring, cfg.trunc, cfg.depth)
    _, table = periodize(inst)
    report = table.to_json()
    report["trunc"] = cfg.trunc
    report["witnesses"] = {
        "J": [[0, 0], [1, 0]],
        "kernel_generators": {str(k): [list(v) for v in kernel_basis(inst, k)]
                              for k in (0, 1)} if ring.tag == RAT else {},
    }
    if not table.periodic_consistent:
        raise InvariantFailure("per-degree answers disagree with the parity table")
    rows = [["ring", "even", "odd", "even_pretty", "odd_pretty", "depth"],
            [str(ring), table.even.symbol, table.odd.symbol, table.even.pretty, table.odd.pretty, cfg.depth]]
    return report, rows


def cmd_tduality(cfg: RunConfig) -> tuple[dict, list]:
    cfg.check_truncation()
    ring = cfg.coefficient_ring()
    un = T_unperiodized(build_tduality_model(ring, cfg.trunc))
    try:
        per = T_periodized(ring, cfg.trunc, cfg.depth)
        dd = double_tduality(ring, cfg.trunc, cfg.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {
        "ring": str(ring),
        "trunc": cfg.trunc,
        "depth": cfg.depth,
        **un.to_json(),
        **per.to_json(),
        "verdict": "ISO" if per.isomorphism else "NOT_ISO",
        "double_duality": dd.to_json(),
        "double_duality_equal": dd.equal and dd.vectors_equal,
    }
    if not (per.isomorphism and report["double_duality_equal"]):
        raise InvariantFailure("periodized T-duality failed")
    rows = [["ring", "det", "verdict", "unperiodized_rank", "dimension", "double_duality_equal"],
            [str(ring), str(per.det), report["verdict"], un.rank, un.dimension, report["double_duality_equal"]]]
    return report, rows


def cmd_tower(cfg: RunConfig) -> tuple[dict, list]:
    if not cfg.tower_file:
        raise UsageError("tower needs a tower file")
    try:
        with open(cfg.tower_file) as fh:
            T = Tower.from_text(fh.read())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read tower file: {exc}") from None
    rep = symbolic_limit(T)
    report = {"ring": str(T.ring), **rep.to_json(),
              "mittag_leffler": str(mittag_leffler_classify(T, min(1, T.depth)))}
    rows = [["ring", "depth", "lim", "lim1", "classification", "finite_lim", "finite_lim1"],
            [report["ring"], rep.depth, report["lim"], report["lim1"], report["classification"],
             report["finite_lim"], report["finite_lim1"]]]
    return report, rows


def cmd_bar(cfg: RunConfig) -> tuple[dict, list]:
    ring = cfg.coefficient_ring()
    if cfg.group < 2:
        raise UsageError("--group must be at least 2")
    try:
        groups = bar_cohomology(cfg.group, ring, cfg.maxdeg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"group": cfg.group, "ring": str(ring), "maxdeg": cfg.maxdeg,
              "cohomology": [str(g) for g in groups],
              "note": "finite cyclic analog of the circle's classifying space"}
    rows = [["degree", "H"]] + [[k, str(g)] for k, g in enumerate(groups)]
    return report, rows


def cmd_verify(cfg: RunConfig) -> tuple[dict, list]:
    cfg.check_truncation()
    ring = cfg.coefficient_ring()
    inst = z_instance(ring, cfg.trunc, cfg.depth)
    proof = verify_periodicity(inst)
    routes = lim1_sequence_check(inst)
    ext = torus_extend(build_z_model(ring, cfg.trunc))
    base = build_z_model(ring, cfg.trunc)
    comp, dz = compose_D(ext), d_dz(base)
    compose_ok = all(comp.matrix(k) == dz.matrix(k) for k in dz.degrees())
    checks = {f"periodicity:{k}": v for k, v in proof.checks.items()}
    checks["lim1_sequence"] = all(r.agree for r in routes)
    checks["compose_D_equals_d_dz"] = compose_ok
    report = {"ring": str(ring), "trunc": cfg.trunc, "depth": cfg.depth,
              "checks": {k: "PASS" if v else "FAIL" for k, v in checks.items()},
              "safe_window": list(proof.safe_window),
              "all_pass": all(checks.values())}
    rows = [["check", "result"]] + [[k, report["checks"][k]] for k in checks]
    if not report["all_pass"]:
        raise InvariantFailure("verification failed", report, rows)
    return report, rows


COMMANDS = {"periodize": cmd_periodize, "tduality": cmd_tduality, "tower": cmd_tower,
            "bar": cmd_bar, "verify": cmd_verify}


# -- rendering -------------------------------------------------------------------

def render(report: dict, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(plain(report), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    header, body = rows[0], rows[1:]
    if len(header) == 2:
        width = max(len(str(r[0])) for r in rows)
        return "".join(f"{str(r[0]):<{width}}  {r[1]}\n" for r in body)
    text = "".join(f"{h}: {v}\n" for h, v in zip(header, body[0]))
    if "per_degree" in report:
        text += "\nfinite-stage audit (ker Φ^k, coker Φ^(k-1), cone H^k, symbol if safe):\n"
        for row in report["per_degree"]:
            text += (f"  {row['degree']:>4}  {row['finite_ker']:<8} {row['finite_coker_below']:<8} "
                     f"{row['cone_cohomology']:<10} {row.get('symbol') or '-'}\n")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="periodcoh", description="Periodized cohomology computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ring_default="Z"):
        sp.add_argument("--ring", default=ring_default, help='"Z", "Q", "Z/<n>" or "Q/Z"')
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.add_argument("--out", help="write the report here instead of stdout")

    def trunc(sp):
        sp.add_argument("--trunc", type=int, default=10, help="z-truncation N")
        sp.add_argument("--depth", type=int, default=6, help="tower depth N_t")

    sp = sub.add_parser("periodize", help="even/odd periodic cohomology of a point")
    common(sp)
    trunc(sp)
    sp = sub.add_parser("tduality", help="T-duality on the point model")
    common(sp, "Q")
    trunc(sp)
    sp = sub.add_parser("tower", help="lim and lim^1 of a tower read from a file")
    sp.add_argument("tower_file")
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sp.add_argument("--out")
    sp = sub.add_parser("bar", help="bar cohomology of a finite cyclic group")
    common(sp)
    sp.add_argument("--group", type=int, default=2)
    sp.add_argument("--maxdeg", type=int, default=4)
    sp = sub.add_parser("verify", help="run the periodicity, lim^1 and D checks")
    common(sp)
    trunc(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
    status = 0
    try:
        report, rows = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TruncationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantFailure as exc:
        print(f"invariant failure: {exc.args[0]}", file=sys.stderr)
        if len(exc.args) < 3:
            return 1
        report, rows = exc.args[1], exc.args[2]
        status = 1
    text = render(report, rows, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: single points, sweeps, figure datasets, and checks.

Subcommands
-----------
efficiency  closed-form energies and optimal angle for one (N, m, ratio)
sweep       closed-form grid over ranges of N, m, and k/h
figure      one of the pinned figure datasets (fig2a ... fig7)
bell        ground-state Bell values
nopt        optimal qubit count at fixed k/h
fixtures    the specialization fixture report
verify      the full verification suite (exit 1 on any failure)

Sweep-style output uses one fixed CSV schema, `n,m,ratio,e_in,e_out,eta,bell`
(bell left empty when not computed), floats printed with 17 significant
digits, metadata as `#` comment lines above the header, and a single
newline as the separator. Identical configurations always produce identical
bytes, whatever the thread count.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import analysis, closedform, protocol_oracle, verify
from .errors import QetError
from .model import DEFAULT_ORACLE_CAP, ModelParams, Partition

SWEEP_HEADER = "n,m,ratio,e_in,e_out,eta,bell"

#: Config-file keys that map to valueless flags; written as key=true/false.
_BOOLEAN_KEYS = frozenset({"bell", "scan"})


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    return "%.17g" % value


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _table(header: str, data_rows: list[list], meta: list[str]) -> str:
    lines = [f"# {m}" for m in meta]
    lines.append(header)
    for row in data_rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_doc(meta: list[str], rows: list[dict]) -> str:
    import json
    return json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"


def rows_to_csv(rows, meta: list[str]) -> str:
    data = [[r.n, r.m, r.ratio, r.e_in, r.e_out, r.eta, r.bell] for r in rows]
    return _table(SWEEP_HEADER, data, meta)


def rows_to_json(rows, meta: list[str]) -> str:
    return _json_doc(meta, [
        {"n": r.n, "m": r.m, "ratio": r.ratio, "e_in": r.e_in,
         "e_out": r.e_out, "eta": r.eta, "bell": r.bell}
        for r in rows])


def _compute_rows(points, h: float, threads: int):
    """Evaluate grid points, optionally on a pool; emission order is the
    grid order either way, which is what keeps the bytes stable."""
    if threads <= 1:
        return [analysis.sweep_row(p, h) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: analysis.sweep_row(p, h), points))


def render_sweep(n_values, m_values, ratios, threads: int = 1,
                 with_bell: bool = False, h: float = 1.0,
                 fmt: str = "csv") -> str:
    points = analysis.sweep_grid(n_values, m_values, ratios, with_bell)
    rows = _compute_rows(points, h, threads)
    meta = ["dataset: sweep", f"h: {_fmt(h)}", f"points: {len(points)}"]
    return rows_to_csv(rows, meta) if fmt == "csv" else rows_to_json(rows, meta)


def render_figure(name: str, threads: int = 1, h: float = 1.0,
                  fmt: str = "csv") -> str:
    points = analysis.figure_grid(name)
    rows = _compute_rows(points, h, threads)
    meta = [f"dataset: {name}", f"h: {_fmt(h)}",
            "ratio grids: log-spaced, 50 points per decade",
            f"points: {len(points)}"]
    return rows_to_csv(rows, meta) if fmt == "csv" else rows_to_json(rows, meta)


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    """Comma-separated integers; a:b and a:b:step expand inclusively."""
    out = []
    for part in text.split(","):
        if ":" in part:
            bits = part.split(":")
            if len(bits) == 2:
                lo, hi, step = int(bits[0]), int(bits[1]), 1
            elif len(bits) == 3:
                lo, hi, step = (int(b) for b in bits)
            else:
                raise argparse.ArgumentTypeError(f"bad range {part!r}")
            if step < 1 or hi < lo:
                raise argparse.ArgumentTypeError(f"bad range {part!r}")
            out.extend(range(lo, hi + 1, step))
        else:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _env_oracle_cap() -> int:
    raw = os.environ.get("QET_ORACLE_CAP")
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise QetError(f"QET_ORACLE_CAP must be an integer, got {raw!r}") from None


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write output here instead of standard output")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--h", type=float, default=1.0,
                   help="field coupling; energies scale linearly with it")
    p.add_argument("--threads", type=int, default=1,
                   help="worker pool size for sweep points")
    p.add_argument("--oracle-cap", type=int, default=None,
                   help="largest N the brute-force engine will accept "
                        "(default: QET_ORACLE_CAP env or 12)")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key=value file supplying defaults for these flags")


def _load_config(path: str) -> list[str]:
    """Turn a key=value file into an argv fragment (earlier = overridable)."""
    pairs = []
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise QetError(f"cannot read config file {path}: {exc}") from None
    for raw in raw_lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise QetError(f"config line {line!r} is not key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _BOOLEAN_KEYS:
            if value.lower() in ("true", "yes", "1"):
                pairs.append(f"--{key}")
            elif value.lower() not in ("false", "no", "0"):
                raise QetError(f"config key {key} wants true/false, got {value!r}")
            continue
        pairs.extend([f"--{key.replace('_', '-')}", value])
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qetsim",
        description="energy teleportation closed forms, brute-force checks, "
                    "and figure datasets")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("efficiency", help="one (N, m, ratio) point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ratio", type=float, required=True, help="k/h")
    p.add_argument("--shots", type=int, default=None,
                   help="add a finite-shot estimate (demo; exact path is default)")
    p.add_argument("--seed", type=int, default=0,
                   help="64-bit seed for --shots")
    _add_common(p)
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("sweep", help="closed-form grid over N, m, k/h ranges")
    p.add_argument("--n", type=_int_list, required=True,
                   help="e.g. 3:10 or 3,5,8")
    p.add_argument("--m", type=_int_list, required=True)
    p.add_argument("--ratio", type=_float_list, required=True)
    p.add_argument("--bell", action="store_true",
                   help="fill the bell column (needs N >= 3)")
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="emit one pinned figure dataset")
    p.add_argument("name", choices=sorted(analysis.FIGURE_BUILDERS))
    _add_common(p)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("bell", help="ground-state Bell values")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--ratio", type=_float_list, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_bell)

    p = sub.add_parser("nopt", help="optimal qubit count at fixed k/h")
    p.add_argument("--x", type=_float_list, required=True, help="k/h values")
    p.add_argument("--scan", action="store_true",
                   help="add exhaustive-scan columns as a cross-check")
    p.add_argument("--n-max", type=int, default=100_000,
                   help="scan upper bound (with --scan)")
    _add_common(p)
    p.set_defaults(func=_cmd_nopt)

    p = sub.add_parser("fixtures", help="specialization fixture report")
    _add_common(p)
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--n-max", type=int, default=10,
                   help="largest N on the oracle agreement grid")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_efficiency(args) -> int:
    params = ModelParams(args.n, args.h, args.ratio * args.h)
    part = Partition.last(args.n, args.m)
    rep = closedform.report(params, part)
    meta = [f"theta_opt: {_fmt(rep.theta_opt.theta)}",
            f"cos_2theta: {_fmt(rep.theta_opt.cos_2theta)}",
            f"sin_2theta: {_fmt(rep.theta_opt.sin_2theta)}"]
    extra = {}
    if args.shots is not None:
        est = protocol_oracle.sample_protocol(
            params, part, rep.theta_opt.theta, n_shots=args.shots,
            seed=args.seed, oracle_cap=args.oracle_cap)
        extra = {"sampled_e_in": est.e_in, "sampled_e_out": est.e_out,
                 "shots": est.n_shots, "seed": est.seed}
        meta.extend(f"{key}: {_fmt(val)}" for key, val in extra.items())
    row = analysis.SweepRow(args.n, args.m, args.ratio,
                            rep.e_in, rep.e_out_max, rep.eta, None)
    if args.format == "csv":
        text = rows_to_csv([row], meta)
    else:
        doc = {"n": args.n, "m": args.m, "ratio": args.ratio, "h": args.h,
               "e_in": rep.e_in, "e_out": rep.e_out_max, "eta": rep.eta,
               "theta_opt": rep.theta_opt.theta, **extra}
        text = _json_doc([], [doc])
    _emit(text, args.out)
    return 0


def _cmd_sweep(args) -> int:
    text = render_sweep(args.n, args.m, args.ratio, threads=args.threads,
                        with_bell=args.bell, h=args.h, fmt=args.format)
    _emit(text, args.out)
    return 0


def _cmd_figure(args) -> int:
    text = render_figure(args.name, threads=args.threads, h=args.h,
                         fmt=args.format)
    _emit(text, args.out)
    return 0


def _cmd_bell(args) -> int:
    rows = []
    for n in sorted(set(args.n)):
        for ratio in sorted(set(args.ratio)):
            rep = analysis.bell_value_ground_state(ModelParams(n, args.h,
                                                               ratio * args.h))
            rows.append([n, ratio, rep.b_value, rep.violates,
                         rep.saturation_value])
    meta = ["dataset: bell"]
    if args.format == "csv":
        text = _table("n,ratio,b_value,violates,saturation", rows, meta)
    else:
        text = _json_doc(meta, [
            {"n": r[0], "ratio": r[1], "b_value": r[2], "violates": r[3],
             "saturation": r[4]} for r in rows])
    _emit(text, args.out)
    return 0


def _cmd_nopt(args) -> int:
    header = "x,n_opt_real,n_opt_int,eta_at_opt,c_aux"
    if args.scan:
        header += ",scan_n,scan_eta"
    rows = []
    for x in sorted(set(args.x)):
        rep = analysis.n_opt(x)
        row = [rep.x, rep.n_opt_real, rep.n_opt_int, rep.eta_at_opt, rep.c_aux]
        if args.scan:
            scan_n, scan_eta = analysis.n_opt_scan(x, n_max=args.n_max)
            row.extend([scan_n, scan_eta])
        rows.append(row)
    meta = ["dataset: nopt"]
    if args.format == "csv":
        text = _table(header, rows, meta)
    else:
        keys = header.split(",")
        text = _json_doc(meta, [dict(zip(keys, r)) for r in rows])
    _emit(text, args.out)
    return 0


def _cmd_fixtures(args) -> int:
    results = analysis.specialization_fixture_check()
    header = "fixture_id,n,m,max_deviation,tolerance,expected_mismatch,agrees,note"
    rows = [[r.fixture_id, r.n_qubits, r.m_outputs, r.max_deviation,
             r.tolerance, r.expected_mismatch, r.agrees,
             r.note.replace(",", ";")] for r in results]
    meta = ["dataset: fixtures"]
    if args.format == "csv":
        text = _table(header, rows, meta)
    else:
        keys = header.split(",")
        text = _json_doc(meta, [dict(zip(keys, r)) for r in rows])
    _emit(text, args.out)
    behaved = all(r.agrees != r.expected_mismatch for r in results)
    return 0 if behaved else 1


def _cmd_verify(args) -> int:
    cap = args.oracle_cap
    results = verify.run_all(n_max=args.n_max, oracle_cap=cap)
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(f"[{tag}] {r.name}: {r.detail} ({r.seconds:.2f} s)")
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if n_fail == 0 else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            injected = _load_config(args.config)
            at = argv.index(args.command) + 1
            args = parser.parse_args(argv[:at] + injected + argv[at:])
        if getattr(args, "oracle_cap", None) is None:
            args.oracle_cap = _env_oracle_cap()
        return args.func(args)
    except QetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

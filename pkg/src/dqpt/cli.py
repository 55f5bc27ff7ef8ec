"""``dqpt sweep|critical|verify`` command-line front end.

Exit codes: 0 success, 1 bad config, 2 I/O failure, 3 empty momentum grid,
4 no critical momentum for the quench, 5 closed form disagrees with oracle.
"""

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, load
from .criticality import find_critical_momenta, verify_triad
from .models import Model, ModeGrid
from .oracle import compare_closed_forms
from .sweep import DIAGNOSTIC_COLUMNS, EmptyGridError, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_EMPTY_GRID = 3
EXIT_NO_DQPT = 4
EXIT_DEVIATION = 5

VERIFY_TOL = 1e-10
CSV_FMT = "%.16e"


class _Fail(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _read_config(path):
    try:
        return load(path)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, f"config error: {exc}") from None
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read config: {exc}") from None


def _out_dir(path):
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot create output directory: {exc}") from None
    return out


def _write_csv(path, header, columns):
    data = np.column_stack(columns) if columns else np.empty((0, len(header)))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        np.savetxt(fh, data, fmt=CSV_FMT, delimiter=",", header=",".join(header), comments="", newline="\n")


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def cmd_sweep(config_path, out_dir, threads=1):
    cfg = _read_config(config_path)
    try:
        result = run_sweep(cfg, threads=threads)
    except EmptyGridError as exc:
        raise _Fail(EXIT_EMPTY_GRID, f"empty grid: {exc}") from None
    out = _out_dir(out_dir)
    written = []
    try:
        cols = [c for c in DIAGNOSTIC_COLUMNS if c in result.columns]
        _write_csv(
            out / "samples.csv",
            ["k", "t"] + cols,
            [result.k_column, result.t_column] + [result.columns[c] for c in cols],
        )
        written.append("samples.csv")
        if "rate" in cfg.outputs:
            _write_csv(out / "rate.csv", ["t", "lambda"], list(result.rate_arrays()))
            written.append("rate.csv")
        manifest = {
            "tool_version": __version__,
            "config_echo": cfg.to_dict(),
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "skipped_modes": result.skipped_modes,
            "checksums": {name: sha256_file(out / name) for name in written},
        }
        _write_json(out / "manifest.json", manifest)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write outputs: {exc}") from None
    print(f"wrote {len(written) + 1} files to {out} ({result.n_rows} rows, {result.skipped_modes} skipped modes)")
    return EXIT_OK


def critical_points(cfg):
    spec = cfg.spec
    roots = find_critical_momenta(spec, cfg.grid)
    return [
        verify_triad(k, spec, cfg.times, tol=cfg.tol, n_max=cfg.n_max_critical_times)
        for k in roots
    ]


def cmd_critical(config_path, out_dir):
    cfg = _read_config(config_path)
    points = critical_points(cfg)
    if not points:
        print("no DQPT for this quench: the quench does not cross the equilibrium critical point")
        return EXIT_NO_DQPT
    out = _out_dir(out_dir)
    try:
        _write_json(out / "critical.json", [p.to_dict() for p in points])
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write outputs: {exc}") from None
    for p in points:
        times = ", ".join(f"{x:.6f}" for x in p.critical_times)
        print(f"k* = {p.k_star:.12f}  t* = [{times}]  triad verified: {p.verified}")
    return EXIT_OK


def standard_verification_grid(model):
    """40 momenta and 40 times on [0, 10]."""
    n = 80 if Model(model) is Model.TFI else 40
    return ModeGrid(model, n).momenta, np.linspace(0.0, 10.0, 40)


def verify_config(cfg, closed=None):
    """Worst closed-form vs oracle deviation per diagnostic."""
    momenta, times = standard_verification_grid(cfg.spec.model)
    return compare_closed_forms(cfg.spec, momenta, times, closed=closed)


def run_verify(cfg, closed=None, stream=None):
    stream = stream or sys.stdout
    devs = verify_config(cfg, closed=closed)
    for d in devs.values():
        print(f"{d.diagnostic:8s} max |closed - oracle| = {d.max_abs:.3e}", file=stream)
    worst = max(devs.values(), key=lambda d: d.max_abs)
    if worst.max_abs >= VERIFY_TOL:
        print(
            f"FAIL worst deviation {worst.max_abs:.3e} in {worst.diagnostic} at k = {worst.k!r}, t = {worst.t!r}",
            file=stream,
        )
        return EXIT_DEVIATION
    print("all diagnostics agree with the oracle", file=stream)
    return EXIT_OK


def cmd_verify(config_path):
    return run_verify(_read_config(config_path))


def build_parser():
    parser = argparse.ArgumentParser(prog="dqpt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("sweep", "diagnostics on the (k, t) grid and the rate function"),
        ("critical", "critical momenta, critical times and the triad check"),
        ("verify", "compare closed forms with the two-mode oracle"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", required=name != "verify", help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads (sweep only)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, threads=args.threads)
        if args.command == "critical":
            return cmd_critical(args.config, args.out)
        return cmd_verify(args.config)
    except _Fail as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

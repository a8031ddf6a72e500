"""Command-line front end: ``srae <command> --out PATH``.

Every command writes its data file plus ``PATH.manifest.json``.  CSV files
start with a ``#`` comment carrying the manifest hash, then a header row;
numbers use six significant digits so reruns are byte-identical.

Exit codes: 0 success, 1 internal error or failed certification, 2 order or
power outside its window, 3 invalid state file, 4 missing concurrence or
decomposition source.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .errors import (
    DimensionError,
    InvalidStateError,
    MissingConcurrenceError,
    MissingDecompositionError,
    NotHermitianError,
    NotPSDError,
    WindowError,
)

ZERO_SNAP = 1e-12
EXIT_OK, EXIT_INTERNAL, EXIT_WINDOW, EXIT_STATE, EXIT_SOURCE = 0, 1, 2, 3, 4


def _fmt(v) -> str:
    if isinstance(v, (bool, str)):
        return str(v)
    if isinstance(v, int):
        return str(v)
    v = float(v)
    # roundoff-level values would otherwise print as signed noise like -7.8e-16
    return "0" if abs(v) < ZERO_SNAP else f"{v:.6g}"


def manifest(command: str, parameters: dict, seed: int, outputs: list[str]) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "output_paths": outputs,
        "tool_version": __version__,
    }


def manifest_hash(m: dict) -> str:
    return hashlib.sha256(json.dumps(m, sort_keys=True).encode()).hexdigest()


def write_manifest(out: Path, m: dict) -> Path:
    path = out.with_name(out.name + ".manifest.json")
    path.write_text(json.dumps({**m, "sha256": manifest_hash(m)}, indent=2) + "\n")
    return path


def write_csv(path: Path, header, rows, digest: str, formats: dict | None = None) -> None:
    formats = formats or {}
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# manifest sha256={digest}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([formats.get(h, _fmt)(v) for h, v in zip(header, row)])


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n")


# -- commands -----------------------------------------------------------------


def cmd_fig1(args) -> int:
    from .repro import fig1_rows

    alphas = args.alpha or [0.83, 1.0, 1.1]
    header, rows = fig1_rows(args.steps, alphas)
    out = Path(args.out)
    m = manifest("fig1", {"steps": args.steps, "alpha": alphas}, args.seed, [str(out)])
    write_csv(out, header, rows, manifest_hash(m))
    write_manifest(out, m)
    return EXIT_OK


def cmd_fig2(args) -> int:
    from .repro import fig2_rows

    lo, hi = args.alpha_range
    steps = args.steps
    header, rows = fig2_rows(steps, args.alpha_steps, (lo, hi))
    out = Path(args.out)
    params = {"steps": steps, "alpha_steps": args.alpha_steps, "alpha_range": [lo, hi]}
    m = manifest("fig2", params, args.seed, [str(out)])
    write_csv(out, header, rows, manifest_hash(m))
    write_manifest(out, m)
    return EXIT_OK


def cmd_table1(args) -> int:
    from .repro import table1_rows

    header, rows = table1_rows()
    out = Path(args.out)
    m = manifest("table1", {}, args.seed, [str(out)])
    four = lambda v: f"{float(v):.4f}"  # noqa: E731
    write_csv(out, header, rows, manifest_hash(m), {"tau2_4dp": four, "published": four})
    write_manifest(out, m)
    return EXIT_OK


def cmd_examples(args) -> int:
    from .repro import examples_report

    out = Path(args.out)
    m = manifest("examples", {}, args.seed, [str(out)])
    write_json(out, {"manifest_sha256": manifest_hash(m), **examples_report()})
    write_manifest(out, m)
    return EXIT_OK


def cmd_lemmas(args) -> int:
    from .lemmas import certify, curve_checks

    out = Path(args.out)
    steps = args.steps
    checks = certify()
    shape, curves = curve_checks(steps)
    checks = checks + shape
    curve_paths = {eq: out.with_name(f"{out.stem}_curve_{eq.value.lower()}.csv") for eq in curves}
    m = manifest("lemmas", {"steps": steps}, args.seed, [str(out)] + [str(p) for p in curve_paths.values()])
    digest = manifest_hash(m)
    for eq, curve in curves.items():
        write_csv(curve_paths[eq], ["x", "alpha"], curve.points.tolist(), digest)
    report = {
        "manifest_sha256": digest,
        "checks": [c.to_dict() for c in checks],
        "curve_gaps": {eq.value: curve.gaps for eq, curve in curves.items()},
        "all_passed": all(c.passed for c in checks),
    }
    write_json(out, report)
    write_manifest(out, m)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("certification failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_residual(args) -> int:
    from .monogamy import residual_mu, residual_sc, residual_sef, residual_srae_pure, tau2
    from .roof import RoofConfig
    from .states import load_state

    state = load_state(args.state)
    fam = args.family
    roof = RoofConfig(seed=args.seed)
    if fam == "SC":
        rep = residual_sc(state, args.focus)
    elif fam == "SEF":
        rep = residual_sef(state, args.focus)
    elif fam == "SRAE":
        rep = residual_srae_pure(state, args.focus, args.alpha)
    elif fam == "MU":
        rep = residual_mu(state, args.focus, args.alpha, args.mu, args.k, roof=roof)
    else:
        if args.k is None:
            raise ValueError("TAU2 needs --k")
        rep = tau2(state, args.focus, args.k, args.alpha, roof=roof)
    out = Path(args.out)
    params = {"state": str(args.state), "family": fam, "focus": args.focus, "alpha": args.alpha}
    params.update({"mu": args.mu, "k": args.k})
    m = manifest("residual", params, args.seed, [str(out)])
    write_json(out, {"manifest_sha256": manifest_hash(m), **rep.to_dict()})
    write_manifest(out, m)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srae", description="Squared Renyi-alpha entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--seed", type=int, default=0, help="seed recorded in the manifest and used by roof searches")
        return p

    p = common(sub.add_parser("fig1", help="three-tangle and indicator of the GHZ/W superposition"))
    p.add_argument("--steps", type=int, default=201, help="number of p grid points")
    p.add_argument("--alpha", type=float, nargs="+", help="Renyi orders (default 0.83 1 1.1)")
    p.set_defaults(func=cmd_fig1)

    p = common(sub.add_parser("fig2", help="indicator surface of the GHZ/W mixture"))
    p.add_argument("--steps", type=int, default=64, help="number of p grid points on [0, 0.627]")
    p.add_argument("--alpha-steps", type=int, default=64)
    p.add_argument("--alpha-range", type=float, nargs=2, default=[0.83, 3.0], metavar=("LO", "HI"))
    p.set_defaults(func=cmd_fig2)

    p = common(sub.add_parser("table1", help="hierarchical indicator of |W7>"))
    p.set_defaults(func=cmd_table1)

    p = common(sub.add_parser("examples", help="worked examples with published values"))
    p.set_defaults(func=cmd_examples)

    p = common(sub.add_parser("lemmas", help="derivative sign certification and critical curves"))
    p.add_argument("--steps", type=int, default=60, help="x grid points per critical curve (>= 50)")
    p.set_defaults(func=cmd_lemmas)

    p = common(sub.add_parser("residual", help="monogamy residual of a state file"))
    p.add_argument("state", help="JSON state file")
    p.add_argument("--family", choices=["SC", "SEF", "SRAE", "MU", "TAU2"], default="SRAE")
    p.add_argument("--focus", type=int, default=0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_residual)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WindowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except (InvalidStateError, NotHermitianError, NotPSDError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATE
    except (MissingConcurrenceError, MissingDecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOURCE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``tauberiana <suite> --config FILE``."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import harness


def bundled_config(name: str) -> Path:
    """Path of a config shipped with the package (``divisor2``, ``negative_control``, ...)."""
    return Path(str(resources.files("tauberiana") / "configs" / f"{name}.json"))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tauberiana", description="Tauberian verification suites")
    p.add_argument("suite", choices=sorted(harness.SUITES), help="suite to run")
    p.add_argument("--config", required=True,
                   help="JSON config path, or bundled:NAME for a packaged config")
    p.add_argument("--out", help="output directory for the JSON report and CSV grid")
    p.add_argument("--format", choices=("csv", "json"), help="grid data format")
    p.add_argument("--threads", type=int, help="worker threads for grid evaluation")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    path = args.config
    if path.startswith("bundled:"):
        path = bundled_config(path.split(":", 1)[1])
    try:
        obj = json.loads(Path(path).read_text())
        if isinstance(obj, dict) and obj.get("suite") not in (None, args.suite):
            print(f"error: config is for suite {obj.get('suite')!r}, not {args.suite!r}", file=sys.stderr)
            return 1
    except (OSError, json.JSONDecodeError):
        pass  # run_config reports the diagnostic
    grid = {"x_min": args.x_min, "x_max": args.x_max, "points": args.points}
    code, rep = harness.run_config(path, out_dir=args.out, threads=args.threads, fmt=args.format,
                                   grid_override=grid if any(v is not None for v in grid.values()) else None)
    if code == 1:
        print(f"error [{rep.details['code']}]: {rep.details['message']}", file=sys.stderr)
        return 1
    summary = {"suite": rep.suite, "passed": rep.passed,
               "verdicts": {k: bool(v) for k, v in rep.verdicts.items()}}
    if rep.fit is not None:
        summary["fit_exponent"] = rep.fit.exponent
    print(json.dumps(summary))
    return code


if __name__ == "__main__":
    sys.exit(main())

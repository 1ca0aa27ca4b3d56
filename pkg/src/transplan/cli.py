"""Command-line front end.

Subcommands::

    transplan plan   --scene S --from X --to Y [--out PATH] [--svg PATH] [--csv PATH]
    transplan verify --scene S --path PATH
    transplan sweep  --scene S --n N --seed K [--box lo,hi] [--out PATH] [--figure PATH] [--csv PATH]
    transplan render --scene S --path PATH [--svg PATH] [--csv PATH]

Exit status is 0 on success or a pass verdict, 1 on a fail verdict (or a
sweep with failures or oracle mismatches) and 2 on usage, parse or domain
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import TransplanError
from .geometry import PiecewisePath, path_from_dict
from .harness import CampaignConfig, run_campaign
from .planners import Query
from .plotting import histogram_figure, path_figure, polyline_csv, svg_bytes
from .scenes import Scene, load_scene
from .transversality import Verdict, certify_semi_transversal

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _coords(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("expected at least one coordinate")
    return vals


def _box(text: str) -> tuple[float, float]:
    vals = _coords(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"--box wants 'lo,hi' with lo < hi, got {text!r}")
    return vals[0], vals[1]


def _dump(doc) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(doc, indent=2) + "\n"


def _write(path: str | None, text: str | bytes) -> None:
    if path is None:
        sys.stdout.write(text if isinstance(text, str) else text.decode())
        return
    p = Path(path)
    if isinstance(text, bytes):
        p.write_bytes(text)
    else:
        p.write_text(text)


def _load_path(filename: str) -> PiecewisePath:
    try:
        doc = json.loads(Path(filename).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read path file {filename}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"path file {filename} is not valid JSON: {exc}") from exc
    return path_from_dict(doc)


def _summary(verdict: Verdict) -> str:
    kinds = ", ".join(f"{e.kind.value}@t={e.t:.6g}" for e in verdict.events) or "no crossings"
    return f"verdict: {verdict.status} ({verdict.n_transversal} transversal; {kinds})"


def _emit_figures(scene: Scene, path: PiecewisePath, verdict: Verdict, svg: str | None, csv: str | None,
                  title: str) -> None:
    if svg is not None:
        if scene.dimension == 2:
            _write(svg, svg_bytes(path_figure(path, scene.surface, verdict, title)))
        else:
            # figures are planar only; fall back to the polyline next to the requested file
            csv = csv or str(Path(svg).with_suffix(".csv"))
            print(f"note: no SVG for a {scene.dimension}-D scene; polyline written to {csv}", file=sys.stderr)
    if csv is not None:
        _write(csv, polyline_csv(path))


def cmd_plan(args) -> int:
    scene = load_scene(args.scene)
    planner = scene.build_planner()
    q = Query(args.start, args.goal)
    path = planner.plan(q)
    verdict = certify_semi_transversal(path, scene.surface)
    _write(args.out, _dump(path.to_dict()))
    _emit_figures(scene, path, verdict, args.svg, args.csv, f"{planner.name}: {'/'.join(planner.locate(q))}")
    print(_summary(verdict), file=sys.stdout if args.out else sys.stderr)
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    scene = load_scene(args.scene)
    path = _load_path(args.path)
    verdict = certify_semi_transversal(path, scene.surface)
    sys.stdout.write(_dump(verdict.to_dict()))
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_render(args) -> int:
    scene = load_scene(args.scene)
    path = _load_path(args.path)
    if args.svg is None and args.csv is None:
        raise UsageError("render needs --svg and/or --csv")
    verdict = certify_semi_transversal(path, scene.surface)
    _emit_figures(scene, path, verdict, args.svg, args.csv, Path(args.path).name)
    print(_summary(verdict))
    return EXIT_PASS


def cmd_sweep(args) -> int:
    scene = load_scene(args.scene)
    planner = scene.build_planner()
    try:
        cfg = CampaignConfig.cube(args.n, args.seed, *args.box, scene.dimension,
                                  oracle_samples=None if args.no_oracle else args.oracle_samples)
    except ValueError as exc:
        raise UsageError(f"invalid sweep configuration: {exc}") from exc
    report = run_campaign(planner, scene.surface, cfg)
    _write(args.out, _dump(report.to_dict()))
    if args.figure is not None:
        _write(args.figure, svg_bytes(histogram_figure(report.crossing_histogram, planner.name)))
    if args.csv is not None:
        rows = [f"{k},{v}" for k, v in sorted(report.crossing_histogram.items())]
        _write(args.csv, "\n".join(["crossings,queries", *rows]) + "\n")
    print(f"{planner.name}: {report.n_pass}/{report.n_queries} pass, "
          f"{len(report.oracle_mismatches)} oracle mismatches", file=sys.stdout if args.out else sys.stderr)
    return EXIT_PASS if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transplan", description="Transversal motion planning tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a path for one query and certify it")
    p.add_argument("--scene", required=True)
    p.add_argument("--from", dest="start", required=True, type=_coords, metavar="X,Y[,...]")
    p.add_argument("--to", dest="goal", required=True, type=_coords, metavar="X,Y[,...]")
    p.add_argument("--out", help="path JSON destination (default: stdout)")
    p.add_argument("--svg", help="figure of the surface, path and crossings (planar scenes)")
    p.add_argument("--csv", help="sampled polyline t,x1,...,xn")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="certify a path file against a scene's surface")
    p.add_argument("--scene", required=True)
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a seeded verification campaign")
    p.add_argument("--scene", required=True)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box", type=_box, default=(-10.0, 10.0), metavar="LO,HI")
    p.add_argument("--oracle-samples", type=int, default=4096)
    p.add_argument("--no-oracle", action="store_true", help="skip the dense-sampling cross-check")
    p.add_argument("--out", help="report JSON destination (default: stdout)")
    p.add_argument("--figure", help="SVG histogram of crossing counts")
    p.add_argument("--csv", help="crossing-count histogram as CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="draw an existing path file")
    p.add_argument("--scene", required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TransplanError) as exc:
        print(f"transplan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

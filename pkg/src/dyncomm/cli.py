"""Command-line pipeline: generate, detect, metrics, profile, sweep, repair.

Every command is deterministic given its flags; seeds default to a fixed
constant, never the clock.  Exit codes: 0 success, 1 usage/config error,
2 data/validation error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .detection import (
    Cover,
    CoverMismatchError,
    GraphSizeError,
    ModularityView,
    UndefinedModularityError,
    girvan_newman,
    louvain,
    read_cover,
    write_cover,
)
from .generator import (
    ConfigError,
    GeneratorConfig,
    SWEEPABLE_PARAMETERS,
    cell_seed,
    generate,
    write_assignment,
)
from .metrics import (
    CommunityReport,
    community_reports,
    dissimilarity,
    node_reports,
    read_community_csv,
    write_community_csv,
    write_node_csv,
)
from .repair import repair, write_trace
from .temporal_graph import (
    LinkParseError,
    LinkValidationError,
    PERMISSIVE,
    STRICT_CITATION,
    TemporalGraph,
    TemporalNode,
    build_temporal_graph,
    coarsen_time,
    parse_link_file,
    write_links,
)

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

SUMMARY_HEADER = ["value", "seed", "communities", "D", "mean_NA", "mean_SC", "mean_HI", "mean_z"]

# Profile disk radius: r_min + k * log(1 + z), monotone in z.
PROFILE_R_MIN = 3.0
PROFILE_R_SCALE = 3.0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _load_graph(path: str, permissive: bool, coarsen: int) -> TemporalGraph:
    mode = PERMISSIVE if permissive else STRICT_CITATION
    tg = build_temporal_graph(parse_link_file(path, mode=mode))
    if coarsen > 1:
        tg = coarsen_time(tg, coarsen)
    return tg


def render_profile_svg(reports: list[CommunityReport], width: int = 520, height: int = 520) -> str:
    """Scatter of communities at (NA, SC) with log-scaled disk radii."""
    margin = 60.0
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin

    def sx(na: float) -> float:
        return margin + na * plot_w

    def sy(sc: float) -> float:
        return height - margin - sc * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = sx(tick)
        y = sy(tick)
        parts.append(
            f'<line x1="{x}" y1="{height - margin}" x2="{x}" y2="{height - margin + 5}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{x}" y="{height - margin + 18}" font-size="10" '
            f'text-anchor="middle">{tick:g}</text>'
        )
        parts.append(
            f'<line x1="{margin - 5}" y1="{y}" x2="{margin}" y2="{y}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{margin - 8}" y="{y + 3}" font-size="10" '
            f'text-anchor="end">{tick:g}</text>'
        )
    parts.append(
        f'<text x="{width / 2}" y="{height - 20}" font-size="12" '
        f'text-anchor="middle">NA</text>'
    )
    parts.append(
        f'<text x="18" y="{height / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 18 {height / 2})">SC</text>'
    )
    for r in reports:
        radius = PROFILE_R_MIN + PROFILE_R_SCALE * math.log1p(r.z)
        parts.append(
            f'<circle cx="{sx(r.na)}" cy="{sy(r.sc)}" r="{radius}" '
            f'fill="gray" fill-opacity="0.5" stroke="black">'
            f"<title>community {r.community}: z={r.z}</title></circle>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _planted_over_nodes(tg: TemporalGraph, assignment: dict[str, int]) -> dict[TemporalNode, int]:
    try:
        return {tn: assignment[tn.node] for tn in tg.nodes}
    except KeyError as exc:
        raise CoverMismatchError(f"planted assignment misses node {exc.args[0]}") from None


def cmd_generate(args: argparse.Namespace) -> int:
    config = GeneratorConfig.from_json_file(args.config)
    links, assignment = generate(config)
    out_links = Path(args.out)
    out_links.parent.mkdir(parents=True, exist_ok=True)
    write_links(links, out_links)
    assignment_path = Path(args.assignment) if args.assignment else Path(str(out_links) + ".assignment")
    write_assignment(assignment, assignment_path)
    print(f"wrote {len(links)} links to {out_links} (assignment: {assignment_path})")
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    tg = _load_graph(args.links, args.permissive, args.coarsen)
    view = ModularityView.from_temporal_graph(tg)
    if args.algo == "louvain":
        cover = louvain(view, seed=args.seed)
    else:
        cover = girvan_newman(view)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_cover(cover, out)
    print(f"wrote cover with {cover.n_communities} communities to {out}")
    return EXIT_OK


def _read_cover_checked(path: str) -> Cover:
    cover, had_gaps = read_cover(path)
    if had_gaps:
        print(
            f"warning: community ids in {path} had gaps; re-densified to 0..{cover.n_communities - 1}",
            file=sys.stderr,
        )
    return cover


def cmd_metrics(args: argparse.Namespace) -> int:
    tg = _load_graph(args.links, args.permissive, args.coarsen)
    cover = _read_cover_checked(args.cover)
    if set(cover.assignment) != set(tg.nodes):
        extra = set(cover.assignment) - set(tg.nodes)
        missing = set(tg.nodes) - set(cover.assignment)
        detail = next(iter(extra or missing))
        raise CoverMismatchError(
            f"cover and link data disagree on temporal node ({detail.node},{detail.t})"
        )
    communities = community_reports(cover, tg)
    nodes = node_reports(cover, tg)
    if args.community_out:
        write_community_csv(communities, args.community_out)
    if args.node_out:
        write_node_csv(nodes, args.node_out)
    if not args.community_out and not args.node_out:
        write_community_csv(communities, sys.stdout)
        sys.stdout.write("\n")
        write_node_csv(nodes, sys.stdout)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace) -> int:
    reports = read_community_csv(args.communities)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_profile_svg(reports), encoding="utf-8")
    print(f"wrote profile of {len(reports)} communities to {out}")
    return EXIT_OK


def _sweep_cell_job(payload: tuple[GeneratorConfig, str, float, int, str]) -> list[str]:
    base, parameter, value, seed, outdir = payload
    derived_seed = cell_seed(seed, parameter, value)
    config_kwargs = {parameter: value, "seed": derived_seed}
    config = GeneratorConfig(
        **{
            **{f: getattr(base, f) for f in ("n_c", "m", "t_max", "w", "d", "p", "seed")},
            **config_kwargs,
        }
    )
    links, assignment = generate(config)
    tag = f"{parameter}{value:g}_s{seed}"
    out = Path(outdir)
    write_links(links, out / f"links_{tag}.txt")
    write_assignment(assignment, out / f"assignment_{tag}.txt")
    tg = build_temporal_graph(links)
    cover = louvain(ModularityView.from_temporal_graph(tg), seed=derived_seed)
    write_cover(cover, out / f"cover_{tag}.csv")
    d = dissimilarity(cover.assignment, _planted_over_nodes(tg, assignment))
    reports = community_reports(cover, tg)
    k = len(reports)
    return [
        repr(float(value)),
        str(seed),
        str(cover.n_communities),
        repr(d),
        repr(sum(r.na for r in reports) / k),
        repr(sum(r.sc for r in reports) / k),
        repr(sum(r.hi for r in reports) / k),
        repr(sum(r.z for r in reports) / k),
    ]


def cmd_sweep(args: argparse.Namespace) -> int:
    base = GeneratorConfig.from_json_file(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    except ValueError:
        raise ConfigError("--values takes floats and --seeds integers, comma-separated") from None
    if not values:
        raise ConfigError("--values must list at least one value")
    if not seeds:
        raise ConfigError("--seeds must list at least one seed")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (base, args.param, value, seed, str(outdir))
        for value in values
        for seed in seeds
    ]
    # Validate every derived config up front so a bad cell fails fast.
    for base_cfg, parameter, value, seed, _ in jobs:
        GeneratorConfig(
            **{
                **{f: getattr(base_cfg, f) for f in ("n_c", "m", "t_max", "w", "d", "p", "seed")},
                parameter: value,
            }
        )
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell_job, jobs))
    else:
        rows = [_sweep_cell_job(job) for job in jobs]
    import csv as _csv

    with open(outdir / "summary.csv", "w", encoding="utf-8", newline="") as handle:
        writer = _csv.writer(handle, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        writer.writerows(rows)
    print(f"wrote {len(rows)} sweep cells to {outdir} (summary.csv)")
    return EXIT_OK


def cmd_repair(args: argparse.Namespace) -> int:
    tg = _load_graph(args.links, args.permissive, args.coarsen)
    cover = _read_cover_checked(args.cover)
    if set(cover.assignment) != set(tg.nodes):
        raise CoverMismatchError("cover and link data disagree on the temporal node set")
    repaired, steps = repair(cover, tg, min_overlap=args.min_overlap)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_cover(repaired, out)
    trace_path = Path(args.trace) if args.trace else Path(str(out) + ".trace.csv")
    write_trace(steps, trace_path)
    print(
        f"merged {len(steps)} community pairs; wrote cover to {out} and trace to {trace_path}"
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="dyncomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a planted-community dataset")
    p_gen.add_argument("config", help="generator config JSON")
    p_gen.add_argument("out", help="output link file")
    p_gen.add_argument("--assignment", help="planted assignment sidecar (default: <out>.assignment)")
    p_gen.set_defaults(func=cmd_generate)

    p_det = sub.add_parser("detect", help="detect temporal communities")
    p_det.add_argument("links", help="input link file")
    p_det.add_argument("out", help="output cover CSV")
    p_det.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_det.add_argument("--algo", choices=("louvain", "gn"), default="louvain")
    p_det.add_argument("--coarsen", type=_positive_int, default=1, metavar="K")
    p_det.add_argument("--permissive", action="store_true", help="allow target times newer than source")
    p_det.set_defaults(func=cmd_detect)

    p_met = sub.add_parser("metrics", help="compute community and node metrics")
    p_met.add_argument("links", help="input link file")
    p_met.add_argument("cover", help="cover CSV from detect")
    p_met.add_argument("--community-out", help="community metrics CSV (default: stdout)")
    p_met.add_argument("--node-out", help="node metrics CSV (default: stdout)")
    p_met.add_argument("--coarsen", type=_positive_int, default=1, metavar="K")
    p_met.add_argument("--permissive", action="store_true")
    p_met.set_defaults(func=cmd_metrics)

    p_pro = sub.add_parser("profile", help="render the NA/SC community profile SVG")
    p_pro.add_argument("communities", help="community metrics CSV")
    p_pro.add_argument("out", help="output SVG path")
    p_pro.set_defaults(func=cmd_profile)

    p_swp = sub.add_parser("sweep", help="run a parameter sweep with detection and metrics")
    p_swp.add_argument("config", help="base generator config JSON")
    p_swp.add_argument("outdir", help="output directory")
    p_swp.add_argument("--param", choices=SWEEPABLE_PARAMETERS, required=True)
    p_swp.add_argument("--values", required=True, help="comma-separated parameter values")
    p_swp.add_argument("--seeds", required=True, help="comma-separated seeds")
    p_swp.add_argument("--jobs", type=_positive_int, default=1)
    p_swp.set_defaults(func=cmd_sweep)

    p_rep = sub.add_parser("repair", help="merge communities by NA optimization")
    p_rep.add_argument("links", help="input link file")
    p_rep.add_argument("cover", help="cover CSV to repair")
    p_rep.add_argument("out", help="repaired cover CSV")
    p_rep.add_argument("--trace", help="merge trace CSV (default: <out>.trace.csv)")
    p_rep.add_argument("--min-overlap", type=_positive_int, default=1)
    p_rep.add_argument("--coarsen", type=_positive_int, default=1, metavar="K")
    p_rep.add_argument("--permissive", action="store_true")
    p_rep.set_defaults(func=cmd_repair)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        LinkParseError,
        LinkValidationError,
        CoverMismatchError,
        GraphSizeError,
        UndefinedModularityError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

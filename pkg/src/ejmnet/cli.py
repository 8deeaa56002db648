"""Command-line entry point: ``ejmnet {triangle,polygon,figure,verify,basis}``.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from . import __version__, golden, qmath
from .analysis import FIGURES, TRILOCAL_BOUND, figure_table, polygon_study
from .correlator import distribution, prob_all_equal
from .ejm import ejm_basis
from .network import NetworkTooLarge, RingNetwork
from .sources import Partial, Werner, parse_sources

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
REPORT_FLOOR = 1e-14
MAX_DEN = 4096


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    sources: str | None = None
    theta: float | None = None
    alpha: float | None = None
    noise: float | None = None
    n: int | None = None
    grid: str | None = None
    figure: str | None = None
    format: str = "csv"
    out: str | None = None
    tol: float = 1e-12

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, points = text.split(":")
        start, stop, points = float(start), float(stop), int(points)
    except ValueError:
        raise ConfigError(f"--grid expects START:STOP:POINTS, got {text!r}") from None
    if points < 2 or stop <= start:
        raise ConfigError("--grid needs STOP > START and at least 2 points")
    return np.linspace(start, stop, points)


def render(x) -> str:
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if abs(x) < REPORT_FLOOR:
            x = 0.0
        return format(x, ".17g")
    return str(x)


def rational(x: float, tol: float) -> str:
    f = Fraction(x).limit_denominator(MAX_DEN)
    return f"{f.numerator}/{f.denominator}" if abs(float(f) - x) <= tol else ""


def _clean(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return 0.0 if abs(x) < REPORT_FLOOR else x
    if isinstance(x, np.integer):
        return int(x)
    return x


def emit(config: RunConfig, columns: list[str], rows: list[list]) -> None:
    rows = [[_clean(v) for v in row] for row in rows]
    if config.format == "json":
        payload = {
            "config": config.to_dict(),
            "columns": columns,
            "rows": [[float(render(v)) if isinstance(v, float) else v for v in row] for row in rows],
            "provenance": {"artifact": "ejmnet", "version": __version__},
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(render(v) for v in row)
        text = buf.getvalue()
    if config.out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(config.out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ejmnet-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, config.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _network(config: RunConfig) -> RingNetwork:
    chosen = [x is not None for x in (config.alpha, config.noise)]
    if sum(chosen) > 1 or (any(chosen) and config.sources is not None):
        raise ConfigError("use only one of --sources, --alpha, --noise")
    n = config.n or 3
    if config.alpha is not None:
        specs = [Partial(config.alpha)] * n
    elif config.noise is not None:
        specs = [Werner(config.noise)] * n
    else:
        specs = list(parse_sources(config.sources or "sss"))
        if len(specs) == 1 and n > 1:
            specs = specs * n
    return RingNetwork(specs)


def cmd_triangle(config: RunConfig) -> int:
    theta = config.theta or 0.0
    net = _network(config)
    d = distribution(net, theta)
    n = net.n_parties
    columns = [f"a{i + 1}" for i in range(n)] + ["probability", "rational"]
    rows = [[*outcome, p, rational(p, config.tol)] for outcome, p in d.items()]
    emit(config, columns, rows)
    p_eq = prob_all_equal(d)
    relation = ">" if p_eq > float(TRILOCAL_BOUND) else "<="
    print(f"p(all equal) = {render(p_eq)} {relation} 61/256", file=sys.stderr)
    return EXIT_OK


def cmd_polygon(config: RunConfig) -> int:
    if config.alpha is not None or config.noise is not None:
        raise ConfigError("polygon takes --sources/--pattern only")
    pattern = config.sources or "s"
    specs = parse_sources(pattern)
    n = config.n or (len(specs) if len(specs) > 1 else 4)
    rep = polygon_study(n, pattern, config.theta or 0.0)
    closed = "" if rep.closed_form is None else float(rep.closed_form)
    columns = ["n", "theta", "p_all_equal", "p_conditional", "conditional_rational", "closed_form"]
    rows = [[n, rep.theta, rep.all_equal, rep.conditional, rational(rep.conditional, config.tol), closed]]
    emit(config, columns, rows)
    return EXIT_OK


def cmd_figure(config: RunConfig) -> int:
    name = config.figure
    if name not in FIGURES:
        raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    grid = parse_grid(config.grid) if config.grid is not None else None
    columns, rows = figure_table(name, grid, max_n=config.n or 10)
    emit(config, columns, rows)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    results = golden.run_all()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"bound: {TRILOCAL_BOUND}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_basis(config: RunConfig) -> int:
    theta = config.theta or 0.0
    basis = ejm_basis(theta)
    columns = ["b"]
    for label in ("00", "01", "10", "11"):
        columns += [f"re_{label}", f"im_{label}"]
    columns += ["bloch1_x", "bloch1_y", "bloch1_z", "entanglement_bits"]
    rows = []
    for b in range(4):
        row = [b + 1]
        for z in basis.states[b]:
            row += [float(z.real), float(z.imag)]
        row += [float(c) for c in qmath.bloch_vector(basis.marginal(b, 0))]
        row.append(qmath.entropy(basis.marginal(b, 0)))
        rows.append(row)
    emit(config, columns, rows)
    return EXIT_OK


COMMANDS = {
    "triangle": cmd_triangle,
    "polygon": cmd_polygon,
    "figure": cmd_figure,
    "verify": cmd_verify,
    "basis": cmd_basis,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ejmnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ejmnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file; explicit flags win")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--tol", type=float, help="rational-match tolerance (default 1e-12)")

    p = sub.add_parser("triangle", help="full outcome distribution of a ring network")
    p.add_argument("--sources", help="pattern like ssp, or space-separated source literals")
    p.add_argument("--theta", type=float)
    p.add_argument("--alpha", type=float, help="all sources partial:ALPHA")
    p.add_argument("--noise", type=float, help="all sources werner:V")
    p.add_argument("--n", type=int, help="ring size when a single source is repeated")
    common(p)

    p = sub.add_parser("polygon", help="all-equal and prefix-conditional probabilities")
    p.add_argument("--sources", "--pattern", dest="sources")
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    common(p)

    p = sub.add_parser("figure", help="reproduce a figure as data")
    p.add_argument("figure", metavar="NAME", help="|".join(FIGURES))
    p.add_argument("--grid", help="START:STOP:POINTS")
    p.add_argument("--n", type=int, help="largest N for the polygon table")
    common(p)

    p = sub.add_parser("verify", help="run golden-value checks")
    common(p)

    p = sub.add_parser("basis", help="dump EJM basis states for a theta")
    p.add_argument("--theta", type=float)
    common(p)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data["command"] = args.command
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None and f.name != "command":
            data[f.name] = value
    config = RunConfig.from_dict(data)
    if config.format not in ("csv", "json"):
        raise ConfigError(f"unknown format {config.format!r}")
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[config.command](config)
    except NetworkTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

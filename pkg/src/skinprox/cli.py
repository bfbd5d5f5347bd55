"""Command-line front end.

Reads a cross-section JSON file, runs sweeps/reductions/oracles and
writes a results CSV plus a JSON sidecar with the run configuration and
per-frequency condition estimates. Output is deterministic: the same
configuration produces byte-identical files regardless of thread count.

Exit codes: 0 ok, 2 parse/usage, 3 validation, 4 solver, 5 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from math import pi

import numpy as np

from . import __version__
from .geometry import (
    CrossSection,
    CrossSectionError,
    HarmonicLayout,
    geometry_hash,
    load_cross_section,
    validate,
)
from .green import assemble_green, load_green_cache, save_green_cache
from .oracles import MeshValidityError, TwoWireSpec, two_wire_hf, two_wire_wide
from .solver import (
    SolveSettings,
    SolverError,
    current_density,
    eliminate_grounded,
    pul_partial,
    reference_reduce,
    sequence_impedances,
    sweep,
)
from .specfun import RatioPoleError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_IO = 5

MODES = ("partial", "loop", "grounded-reduce", "sequence", "density-map", "oracle-two-wire")


class CliError(Exception):
    def __init__(self, exit_code: int, kind: str, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.kind = kind


@dataclass(frozen=True)
class RunConfig:
    mode: str
    input: str | None = None
    out: str | None = None
    freqs: tuple[float, ...] = ()
    f_min: float | None = None
    f_max: float | None = None
    points_per_decade: int | None = None
    order: int = 3
    orders_file: str | None = None
    ref: int | None = None
    units: str = "si"
    threads: int = 1
    cache_green: str | None = None
    drive: tuple[complex, ...] = ()
    map_rings: int = 12
    map_sectors: int = 48
    wire_radius: float = 0.01
    wire_separation: float = 0.1
    wire_sigma: float = 58e6


def _fmt(value: float) -> str:
    """Shortest representation that round-trips to the same double."""
    return repr(float(value))


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _settings(config: RunConfig) -> SolveSettings:
    return SolveSettings(
        orders=config.order,
        freqs=config.freqs,
        f_min=config.f_min,
        f_max=config.f_max,
        points_per_decade=config.points_per_decade,
    )


def _orders(config: RunConfig, cs: CrossSection) -> tuple[int, ...]:
    if config.orders_file is None:
        return (config.order,) * len(cs)
    try:
        with open(config.orders_file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, "parse", f"{config.orders_file}: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, "parse", "orders file must map conductor id to order")
    orders = []
    for c in cs:
        orders.append(int(doc.get(str(c.id), config.order)))
    return tuple(orders)


def _load_validated(config: RunConfig) -> CrossSection:
    if config.input is None:
        raise CliError(EXIT_PARSE, "usage", f"mode {config.mode} requires --input")
    cs = load_cross_section(config.input)
    violations = validate(cs)
    if violations:
        detail = "; ".join(violations)
        raise CliError(EXIT_VALIDATION, "validation", detail)
    return cs


def _green_for(config: RunConfig, cs: CrossSection, orders: tuple[int, ...]):
    layout = HarmonicLayout.from_orders(orders)
    if config.cache_green:
        cached = load_green_cache(config.cache_green, cs, layout)
        if cached is not None:
            return cached
    green = assemble_green(cs, layout)
    if config.cache_green:
        save_green_cache(config.cache_green, green, cs)
    return green


def _matrix_header(ids, units: str) -> list[str]:
    cols = ["f_hz"]
    if units == "per-km":
        cols += [f"r_{a}_{b}_ohm_per_km" for a in ids for b in ids]
        cols += [f"x_{a}_{b}_ohm_per_km" for a in ids for b in ids]
    else:
        cols += [f"r_{a}_{b}_ohm_per_m" for a in ids for b in ids]
        cols += [f"l_{a}_{b}_h_per_m" for a in ids for b in ids]
    return cols


def _matrix_rows(freq: float, impedance: np.ndarray, units: str) -> list[str]:
    omega = 2.0 * pi * freq
    res = impedance.real
    if units == "per-km":
        first = res * 1e3
        second = impedance.imag * 1e3
    else:
        first = res
        second = impedance.imag / omega
    row = [_fmt(freq)]
    row += [_fmt(v) for v in first.ravel()]
    row += [_fmt(v) for v in second.ravel()]
    return row


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    _write_text(path, "\n".join(lines) + "\n")


def _sidecar(config: RunConfig, path: str, columns, results=None, cs=None, orders=None) -> None:
    doc: dict = {
        "version": __version__,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(config).items()},
        "columns": list(columns),
    }
    doc["config"]["drive"] = [str(d) for d in config.drive]
    if cs is not None:
        doc["geometry_hash"] = geometry_hash(cs)
    if orders is not None:
        doc["orders"] = list(orders)
    if results is not None:
        doc["frequencies"] = [r.frequency for r in results]
        doc["condition"] = [r.metadata.get("condition") for r in results]
    _write_text(path + ".meta.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _run_matrix_mode(config: RunConfig) -> None:
    cs = _load_validated(config)
    orders = _orders(config, cs)
    green = _green_for(config, cs, orders)
    settings = _settings(config)
    results = sweep(cs, SolveSettings(orders=orders, freqs=settings.frequencies()),
                    green=green, threads=config.threads)

    ids = [c.id for c in cs]
    if config.mode == "loop":
        if config.ref is None:
            raise CliError(EXIT_PARSE, "usage", "mode loop requires --ref <conductor id>")
        try:
            ref_index = cs.index_of(config.ref)
        except KeyError as exc:
            raise CliError(EXIT_VALIDATION, "validation", str(exc)) from exc
        ids = [c.id for i, c in enumerate(cs) if i != ref_index]
    elif config.mode in ("grounded-reduce", "sequence"):
        grounded = cs.grounded_indices
        kept = cs.kept_indices
        if config.mode == "sequence" and len(kept) != 3:
            raise CliError(
                EXIT_VALIDATION, "validation",
                f"sequence mode needs exactly 3 kept conductors, found {len(kept)}",
            )
        ids = [cs[i].id for i in kept]

    rows = []
    if config.mode == "sequence":
        header = ["f_hz", "r_pos", "x_pos", "r_zero", "x_zero"]
        scale = 1e3 if config.units == "per-km" else 1.0
        for r in results:
            z3 = eliminate_grounded(r.impedance, cs.grounded_indices)
            z_pos, z_zero = sequence_impedances(z3)
            rows.append([
                _fmt(r.frequency),
                _fmt(z_pos.real * scale), _fmt(z_pos.imag * scale),
                _fmt(z_zero.real * scale), _fmt(z_zero.imag * scale),
            ])
    else:
        header = _matrix_header(ids, config.units)
        for r in results:
            z = r.impedance
            if config.mode == "loop":
                z = reference_reduce(z, ref_index)
            elif config.mode == "grounded-reduce":
                z = eliminate_grounded(z, cs.grounded_indices)
            rows.append(_matrix_rows(r.frequency, z, config.units))

    _write_csv(config.out, header, rows)
    _sidecar(config, config.out, header, results=results, cs=cs, orders=orders)


def _run_density_map(config: RunConfig) -> None:
    cs = _load_validated(config)
    freqs = _settings(config).frequencies()
    if len(freqs) != 1:
        raise CliError(EXIT_PARSE, "usage", "density-map needs exactly one frequency")
    if len(config.drive) != len(cs):
        raise CliError(
            EXIT_VALIDATION, "validation",
            f"--drive must supply {len(cs)} currents, got {len(config.drive)}",
        )
    orders = _orders(config, cs)
    green = _green_for(config, cs, orders)

    points = []
    for c in cs:
        for i in range(config.map_rings):
            r = (i + 0.5) / config.map_rings * c.radius
            for j in range(config.map_sectors):
                th = 2.0 * pi * j / config.map_sectors
                points.append((c.center_x + r * np.cos(th), c.center_y + r * np.sin(th)))
    points = np.array(points)
    density = current_density(cs, green, 2.0 * pi * freqs[0], np.array(config.drive), points)

    header = ["x_m", "y_m", "jz_abs", "jz_arg"]
    rows = [
        [_fmt(x), _fmt(y), _fmt(abs(d)), _fmt(np.angle(d))]
        for (x, y), d in zip(points, density)
    ]
    _write_csv(config.out, header, rows)
    _sidecar(config, config.out, header, cs=cs, orders=orders)


def _run_oracle_two_wire(config: RunConfig) -> None:
    freqs = _settings(config).frequencies()
    per_km = config.units == "per-km"
    if per_km:
        header = ["f_hz", "r_hf_ohm_per_km", "x_hf_ohm_per_km",
                  "r_wide_ohm_per_km", "x_wide_ohm_per_km"]
    else:
        header = ["f_hz", "r_hf_ohm_per_m", "l_hf_h_per_m",
                  "r_wide_ohm_per_m", "l_wide_h_per_m"]
    rows = []
    for f in freqs:
        spec = TwoWireSpec(
            radius=config.wire_radius,
            separation=config.wire_separation,
            conductivity=config.wire_sigma,
            frequency=f,
        )
        r_hf, l_hf = two_wire_hf(spec)
        z_wide = two_wire_wide(spec)
        omega = 2.0 * pi * f
        if per_km:
            rows.append([_fmt(f), _fmt(r_hf * 1e3), _fmt(omega * l_hf * 1e3),
                         _fmt(z_wide.real * 1e3), _fmt(z_wide.imag * 1e3)])
        else:
            rows.append([_fmt(f), _fmt(r_hf), _fmt(l_hf),
                         _fmt(z_wide.real), _fmt(z_wide.imag / omega)])
    _write_csv(config.out, header, rows)
    _sidecar(config, config.out, header)


def run(config: RunConfig) -> int:
    """Execute one configuration; returns the process exit code."""
    try:
        if config.out is None:
            raise CliError(EXIT_PARSE, "usage", "--out is required")
        if config.mode in ("partial", "loop", "grounded-reduce", "sequence"):
            _run_matrix_mode(config)
        elif config.mode == "density-map":
            _run_density_map(config)
        elif config.mode == "oracle-two-wire":
            _run_oracle_two_wire(config)
        else:
            raise CliError(EXIT_PARSE, "usage", f"unknown mode {config.mode!r}")
        return EXIT_OK
    except CliError as exc:
        _report_error(exc.exit_code, exc.kind, str(exc))
        return exc.exit_code
    except CrossSectionError as exc:
        _report_error(EXIT_PARSE, "parse", str(exc))
        return EXIT_PARSE
    except (SolverError, RatioPoleError, MeshValidityError) as exc:
        _report_error(EXIT_SOLVER, "solver", str(exc))
        return EXIT_SOLVER
    except (ValueError, KeyError) as exc:
        _report_error(EXIT_VALIDATION, "validation", str(exc))
        return EXIT_VALIDATION
    except OSError as exc:
        _report_error(EXIT_IO, "io", str(exc))
        return EXIT_IO


def _report_error(code: int, kind: str, message: str) -> None:
    record = {"error": {"exit_code": code, "kind": kind, "message": message}}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid complex list {text!r}") from exc


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skinprox",
        description="Series resistance and inductance of systems of round conductors "
                    "with skin and proximity effects.",
    )
    parser.add_argument("--input", help="cross-section JSON file")
    parser.add_argument("--mode", required=True, choices=MODES)
    parser.add_argument("--out", help="output CSV path (sidecar JSON written next to it)")
    parser.add_argument("--freqs", type=_parse_float_list, default=(),
                        help="explicit comma-separated frequency list [Hz]")
    parser.add_argument("--fmin", type=float, help="log grid start [Hz]")
    parser.add_argument("--fmax", type=float, help="log grid end [Hz]")
    parser.add_argument("--ppd", type=int, help="log grid points per decade")
    parser.add_argument("--order", type=int, default=3, help="global truncation order")
    parser.add_argument("--orders-file", help="JSON file mapping conductor id to order")
    parser.add_argument("--ref", type=int, help="reference conductor id (loop mode)")
    parser.add_argument("--units", choices=("si", "per-km"), default="si")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--cache-green", help="binary cache path for the interaction matrix")
    parser.add_argument("--drive", type=_parse_complex_list, default=(),
                        help="comma-separated conductor currents (density-map mode)")
    parser.add_argument("--map-rings", type=int, default=12)
    parser.add_argument("--map-sectors", type=int, default=48)
    parser.add_argument("--wire-radius", type=float, default=0.01, help="[m]")
    parser.add_argument("--wire-separation", type=float, default=0.1, help="[m]")
    parser.add_argument("--wire-sigma", type=float, default=58e6, help="[S/m]")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        input=args.input,
        out=args.out,
        freqs=args.freqs,
        f_min=args.fmin,
        f_max=args.fmax,
        points_per_decade=args.ppd,
        order=args.order,
        orders_file=args.orders_file,
        ref=args.ref,
        units=args.units,
        threads=args.threads,
        cache_green=args.cache_green,
        drive=args.drive,
        map_rings=args.map_rings,
        map_sectors=args.map_sectors,
        wire_radius=args.wire_radius,
        wire_separation=args.wire_separation,
        wire_sigma=args.wire_sigma,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: simulate, process, sweep, report, list-scenarios.
Exit codes: 0 success, 1 usage/config error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .capture_io import CaptureFormatError, read_capture, write_capture
from .channel import simulate_capture
from .config import ConfigError, Scenario, config_digest, load_scenario
from .pipeline import process_capture, process_with_subcarriers
from .report import compare_records, render_table
from .scenarios import describe_scenarios, get_scenario
from .vitals import phase_to_displacement, spectral_correlation
from .waveform import build_waveform

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        raise _UsageError(message)


def _load_scenario_arg(args) -> Scenario:
    if getattr(args, "config", None):
        scenario = load_scenario(args.config)
        if getattr(args, "seed", None) is not None:
            scenario.raw["seed"] = args.seed
        return scenario
    if getattr(args, "scenario", None):
        return get_scenario(args.scenario, seed=getattr(args, "seed", None))
    raise _UsageError("either --scenario or --config is required")


def _write_manifest(path: Path, scenario: Scenario | None, command: str, extra: dict | None = None):
    manifest = {
        "command": command,
        "jcvitals_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
    }
    if scenario is not None:
        manifest["scenario_id"] = scenario.scenario_id
        manifest["seed"] = scenario.seed
        manifest["config_sha256"] = config_digest(scenario.raw)
    if extra:
        manifest.update(extra)
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def _simulate(scenario: Scenario):
    spec = scenario.waveform_spec()
    symbol = build_waveform(spec)
    scene = scenario.build_scene()
    capture = simulate_capture(
        scene,
        symbol,
        spec,
        n_frames=scenario.n_frames,
        rng_seed=scenario.seed,
        frame_rate_hz=scenario.frame_rate_hz,
    )
    return capture, scene


def cmd_simulate(args) -> int:
    scenario = _load_scenario_arg(args)
    capture, scene = _simulate(scenario)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_capture(out, capture, averaging_factor=1, seed=scenario.seed)
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), scenario, "simulate",
                    {"output": str(out), "n_frames": capture.n_frames})
    summary = {
        "scenario_id": scenario.scenario_id,
        "seed": scenario.seed,
        "duration_s": scenario.duration_s,
        "frame_rate_hz": scenario.frame_rate_hz,
        "n_frames": capture.n_frames,
        "snr_db": scene.snr_db,
        "output": str(out),
        "targets": scenario.ground_truth(),
    }
    print(json.dumps(summary, indent=2))
    return EXIT_OK


EXPORT_KINDS = ("range-profile", "phase", "displacement", "spectra")


def _export_results(result, scenario_id, export_dir: Path, spec, kinds=None):
    kinds = set(kinds or EXPORT_KINDS)
    export_dir.mkdir(parents=True, exist_ok=True)
    if "range-profile" in kinds:
        result.profiles.to_csv(export_dir / f"{scenario_id}_range_profile.csv")
    wavelength = spec.effective_wavelength_m
    for tr in result.targets:
        stem = f"{scenario_id}_target{tr.target_id}"
        if "phase" in kinds:
            tr.track.to_csv(export_dir / f"{stem}_phase.csv")
        if "displacement" in kinds:
            displacement = phase_to_displacement(tr.track, wavelength)
            with open(export_dir / f"{stem}_displacement.csv", "w") as fh:
                fh.write("time_s,displacement_m\n")
                t = np.arange(len(displacement)) / tr.track.sample_rate_hz
                for ti, di in zip(t, displacement):
                    fh.write(f"{ti:.6f},{di:.9e}\n")
        if "spectra" in kinds:
            for band in ("br", "hr"):
                freqs, mags = getattr(tr.estimate, f"{band}_spectrum")
                with open(export_dir / f"{stem}_{band}_spectrum.csv", "w") as fh:
                    fh.write("frequency_hz,normalized_magnitude\n")
                    for fi, mi in zip(freqs, mags):
                        fh.write(f"{fi:.6f},{mi:.6e}\n")


def cmd_process(args) -> int:
    capture, meta = read_capture(args.capture)
    scenario = None
    if args.config or args.scenario:
        scenario = _load_scenario_arg(args)
        processing = scenario.processing_config()
    else:
        from .pipeline import ProcessingConfig

        processing = ProcessingConfig()
    scenario_id = scenario.scenario_id if scenario else Path(args.capture).stem

    result = process_capture(capture, config=processing)
    records = [tr.to_record(scenario_id) for tr in result.targets]
    lines = "\n".join(json.dumps(r) for r in records)
    if args.estimates_out:
        Path(args.estimates_out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.estimates_out).write_text(lines + ("\n" if lines else ""))
    if lines:
        print(lines)
    print(f"# {len(records)} target(s) detected", file=sys.stderr)

    if args.export_dir:
        export_dir = Path(args.export_dir)
        _export_results(result, scenario_id, export_dir, capture.spec, kinds=args.export)
        _write_manifest(export_dir / f"{scenario_id}_process.manifest.json", scenario,
                        "process", {"capture": str(args.capture), "capture_seed": meta.seed})
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load_scenario_arg(args)
    counts = [int(c) for c in args.counts.split(",")] if args.counts else scenario.subcarrier_counts
    spec = scenario.waveform_spec()
    for count in counts:
        if not 1 <= count <= spec.num_subcarriers:
            raise ConfigError(f"subcarrier count {count} outside [1, {spec.num_subcarriers}]")

    capture, _ = _simulate(scenario)
    results = process_with_subcarriers(capture, counts, config=scenario.processing_config())

    per_count = {}
    for count, result in results.items():
        per_count[str(count)] = {
            "occupied_bandwidth_hz": count * spec.subcarrier_spacing_hz,
            "range_resolution_m": result.profiles.range_resolution_m,
            "n_detections": len(result.detections),
            "estimates": [tr.to_record(scenario.scenario_id) for tr in result.targets],
        }

    correlations = {}
    ref_count = max(counts)
    ref = results[ref_count]
    for count in counts:
        if count == ref_count:
            continue
        cur = results[count]
        n = min(len(cur.targets), len(ref.targets))
        for band in ("br", "hr"):
            vals = [
                spectral_correlation(
                    getattr(cur.targets[i].estimate, f"{band}_spectrum"),
                    getattr(ref.targets[i].estimate, f"{band}_spectrum"),
                )
                for i in range(n)
            ]
            if vals:
                correlations[f"{band}_{count}_vs_{ref_count}"] = round(float(np.mean(vals)), 4)

    report = {
        "scenario_id": scenario.scenario_id,
        "counts": counts,
        "per_count": per_count,
        "spectral_correlations": correlations,
    }
    print(json.dumps(report, indent=2))
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{scenario.scenario_id}_sweep.json").write_text(json.dumps(report, indent=2) + "\n")
        for count, result in results.items():
            result.profiles.to_csv(out / f"{scenario.scenario_id}_profile_{count}sc.csv")
        _write_manifest(out / f"{scenario.scenario_id}_sweep.manifest.json", scenario, "sweep")
    return EXIT_OK


def _read_records(path) -> list:
    records = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
    except (OSError, json.JSONDecodeError) as exc:
        raise CaptureFormatError(f"{path}: {exc}") from exc
    return records


def cmd_report(args) -> int:
    estimates = _read_records(args.estimates)
    truths = _read_records(args.truth)
    try:
        rows = compare_records(estimates, truths, args.br_tolerance, args.hr_tolerance)
    except ValueError as exc:
        raise CaptureFormatError(str(exc)) from exc
    table = render_table(rows)
    print(table)
    if args.output:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        Path(args.output).write_text(table + "\n")
    return EXIT_OK


def cmd_list_scenarios(_args) -> int:
    for item in describe_scenarios():
        print(f"{item['scenario_id']:<28} {item['description']}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="jcvitals", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a capture file from a scenario")
    p.add_argument("--scenario", help="built-in scenario id")
    p.add_argument("--config", help="scenario config JSON path")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--output", required=True, help="capture file to write")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("process", help="run the receive pipeline on a capture")
    p.add_argument("--capture", required=True)
    p.add_argument("--scenario", help="built-in scenario id for analysis settings")
    p.add_argument("--config", help="scenario config JSON for analysis settings")
    p.add_argument("--seed", type=int, help=argparse.SUPPRESS)
    p.add_argument("--estimates-out", help="write estimate records (JSON lines) here")
    p.add_argument("--export-dir", help="export analysis products here as CSV")
    p.add_argument("--export", action="append", choices=EXPORT_KINDS,
                   help="which products to export (repeatable; default: all)")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("sweep", help="process one scene at several subcarrier counts")
    p.add_argument("--scenario", help="built-in scenario id")
    p.add_argument("--config", help="scenario config JSON path")
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--counts", help="comma-separated subcarrier counts (default from config)")
    p.add_argument("--output-dir", help="write the sweep report and profiles here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="accuracy table of estimates vs ground truth")
    p.add_argument("--estimates", required=True, help="estimate records (JSON lines)")
    p.add_argument("--truth", required=True, help="ground-truth records (JSON lines)")
    p.add_argument("--br-tolerance", type=float, default=1.0)
    p.add_argument("--hr-tolerance", type=float, default=2.0)
    p.add_argument("--output", help="also write the table to this file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("list-scenarios", help="list built-in scenarios")
    p.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CaptureFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

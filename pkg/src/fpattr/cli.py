"""Command-line surface for the fingerprint attribution toolkit.

Exit codes: 0 ok, 2 usage/parse error, 3 uncorrectable fingerprint,
4 unregistered fingerprint, 5 I/O error.  Hex is the single canonical
bitstring encoding across all commands (bit 0 = least significant bit of
the last hex digit).  --json switches human output to machine-readable
JSON on stdout.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import attacks as attacks_mod
from . import bch, channel, harness, metrics
from .bits import Bits
from .registry import DuplicateUserError, FingerprintRegistry, FormatError, Verdict

EXIT_UNCORRECTABLE = 3
EXIT_UNREGISTERED = 4
EXIT_IO = 5


def _params(ctx: click.Context) -> bch.BchParams:
    opts = ctx.obj
    return bch.build_params(opts["m"], opts["t"], opts["payload_len"])


def _load_registry(ctx: click.Context) -> FingerprintRegistry:
    opts = ctx.obj
    path = Path(opts["registry"])
    try:
        if path.exists():
            return FingerprintRegistry.load(path, opts["payload_len"])
        return FingerprintRegistry(opts["payload_len"])
    except (OSError, FormatError) as exc:
        click.echo(f"error: cannot read registry: {exc}", err=True)
        sys.exit(EXIT_IO)


def _parse_hex(text: str, width: int, what: str) -> Bits:
    try:
        return Bits.from_hex(text, width)
    except ValueError as exc:
        raise click.UsageError(f"malformed {what} hex: {exc}") from exc


def _emit(ctx: click.Context, human: str, payload: dict) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(human)


@click.group()
@click.option("--registry", default="registry.jsonl", show_default=True, help="Registry file path.")
@click.option("-m", "code_m", default=6, show_default=True, help="Field extension degree.")
@click.option("-t", "code_t", default=4, show_default=True, help="Correctable errors.")
@click.option("--payload-len", default=32, show_default=True, help="Fingerprint bits.")
@click.option("--seed", default=0, show_default=True, help="Base RNG seed.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, registry, code_m, code_t, payload_len, seed, as_json, verbose):
    """Fingerprint attribution with BCH error correction."""
    ctx.obj = {
        "registry": registry,
        "m": code_m,
        "t": code_t,
        "payload_len": payload_len,
        "seed": seed,
        "json": as_json,
        "verbose": verbose,
    }


@main.command()
@click.argument("user_id")
@click.pass_context
def register(ctx, user_id):
    """Assign a fingerprint to USER_ID and persist it."""
    registry = _load_registry(ctx)
    try:
        record = registry.assign(user_id, seed=ctx.obj["seed"] + len(registry))
    except DuplicateUserError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        registry.save(ctx.obj["registry"])
    except OSError as exc:
        click.echo(f"error: cannot write registry: {exc}", err=True)
        sys.exit(EXIT_IO)
    _emit(ctx, record.fingerprint.hex, {"user_id": user_id, "fingerprint": record.fingerprint.hex})


@main.command()
@click.argument("fingerprint_hex")
@click.pass_context
def encode(ctx, fingerprint_hex):
    """Encode a fingerprint into its codeword."""
    params = _params(ctx)
    payload = _parse_hex(fingerprint_hex, params.payload_len, "fingerprint")
    codeword = bch.encode(payload, params)
    _emit(ctx, codeword.hex, {"codeword": codeword.hex, "fingerprint": payload.hex})


@main.command()
@click.argument("codeword_hex")
@click.pass_context
def decode(ctx, codeword_hex):
    """Decode a received codeword; exit 3 when uncorrectable."""
    params = _params(ctx)
    received = _parse_hex(codeword_hex, params.n, "codeword")
    payload, outcome = bch.decode(received, params)
    info = {
        "status": outcome.describe(),
        "payload": payload.hex if payload else None,
        "corrected_positions": list(outcome.positions),
    }
    if payload is None:
        _emit(ctx, "uncorrectable", info)
        sys.exit(EXIT_UNCORRECTABLE)
    _emit(ctx, f"{payload.hex} {outcome.describe()}", info)


@main.command()
@click.argument("codeword_hex")
@click.pass_context
def attribute(ctx, codeword_hex):
    """Attribute a received codeword to a registered user."""
    params = _params(ctx)
    registry = _load_registry(ctx)
    received = _parse_hex(codeword_hex, params.n, "codeword")
    result = registry.attribute(received, params)
    info = {
        "verdict": result.verdict.value,
        "user_id": result.user_id,
        "fingerprint": result.fingerprint.hex if result.fingerprint else None,
        "status": result.outcome.describe(),
    }
    if result.verdict is Verdict.FLAGGED_UNCORRECTABLE:
        _emit(ctx, "FLAGGED:uncorrectable", info)
        sys.exit(EXIT_UNCORRECTABLE)
    if result.verdict is Verdict.FLAGGED_UNREGISTERED:
        _emit(ctx, f"FLAGGED:unregistered fingerprint={result.fingerprint.hex}", info)
        sys.exit(EXIT_UNREGISTERED)
    _emit(ctx, f"{result.user_id} {result.outcome.describe()}", info)


def _embed_config(ctx, config_path, image_shape, strength, redundancy) -> channel.EmbedConfig:
    if config_path:
        try:
            return channel.EmbedConfig.load(config_path)
        except OSError as exc:
            click.echo(f"error: cannot read embed config: {exc}", err=True)
            sys.exit(EXIT_IO)
    params = _params(ctx)
    return channel.EmbedConfig(
        width=image_shape[1],
        height=image_shape[0],
        strength=strength,
        redundancy=redundancy,
        codeword_len=params.n,
        seed=ctx.obj["seed"],
    )


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.argument("user_id")
@click.option("-o", "--output", required=True, type=click.Path(), help="Marked image (PNG).")
@click.option("--embed-config", "config_path", type=click.Path(exists=True), help="Existing embed config JSON.")
@click.option("--strength", default=channel.DEFAULT_STRENGTH, show_default=True)
@click.option("--redundancy", default=channel.DEFAULT_REDUNDANCY, show_default=True)
@click.pass_context
def embed(ctx, image_path, user_id, output, config_path, strength, redundancy):
    """Embed USER_ID's codeword into an image; writes a config sidecar."""
    params = _params(ctx)
    registry = _load_registry(ctx)
    if user_id not in registry:
        raise click.UsageError(f"user {user_id!r} is not registered")
    try:
        image = channel.load_image(image_path)
    except OSError as exc:
        click.echo(f"error: cannot read image: {exc}", err=True)
        sys.exit(EXIT_IO)
    cfg = _embed_config(ctx, config_path, image.shape, strength, redundancy)
    codeword = bch.encode(registry.get(user_id).fingerprint, params)
    marked = channel.embed(image, codeword, cfg)
    sidecar = Path(str(output) + ".json")
    try:
        channel.save_image(marked, output)
        cfg.save(sidecar)
    except OSError as exc:
        click.echo(f"error: cannot write output: {exc}", err=True)
        sys.exit(EXIT_IO)
    _emit(
        ctx,
        f"embedded {codeword.hex} -> {output} (config {sidecar})",
        {"codeword": codeword.hex, "output": str(output), "config": str(sidecar)},
    )


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--embed-config", "config_path", type=click.Path(), help="Embed config sidecar JSON (default: IMAGE.json).")
@click.pass_context
def extract(ctx, image_path, config_path):
    """Extract the embedded codeword from an image."""
    sidecar = Path(config_path) if config_path else Path(str(image_path) + ".json")
    if not sidecar.exists():
        raise click.UsageError(f"no embed config found at {sidecar}; pass --embed-config")
    try:
        cfg = channel.EmbedConfig.load(sidecar)
        image = channel.load_image(image_path)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    codeword, confidences = channel.extract(image, cfg)
    mean_conf = float(confidences.mean())
    _emit(
        ctx,
        f"{codeword.hex} confidence={mean_conf:.3f}",
        {"codeword": codeword.hex, "mean_confidence": mean_conf},
    )


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--spec", "spec_text", required=True, help='Attack spec, e.g. "brightness:1.35" or "jpeg:60".')
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def attack(ctx, image_path, spec_text, output):
    """Apply one post-processing attack to an image."""
    import numpy as np

    try:
        spec = attacks_mod.AttackSpec.parse(spec_text)
    except attacks_mod.InvalidStrengthError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        image = channel.load_image(image_path)
    except OSError as exc:
        click.echo(f"error: cannot read image: {exc}", err=True)
        sys.exit(EXIT_IO)
    rng = np.random.default_rng(ctx.obj["seed"])
    result = attacks_mod.apply(image, spec, rng)
    try:
        channel.save_image(result, output)
    except OSError as exc:
        click.echo(f"error: cannot write image: {exc}", err=True)
        sys.exit(EXIT_IO)
    _emit(ctx, f"{spec.compact()} -> {output}", {"attack": spec.compact(), "output": str(output)})


def _load_experiment(ctx, config_path, trials, seed) -> harness.ExperimentConfig:
    try:
        cfg = harness.ExperimentConfig.from_json_file(config_path)
    except OSError as exc:
        click.echo(f"error: cannot read config: {exc}", err=True)
        sys.exit(EXIT_IO)
    except (ValueError, KeyError) as exc:
        raise click.UsageError(f"bad experiment config: {exc}") from exc
    # flags override the config file, which overrides built-in defaults
    overrides = {}
    if trials is not None:
        overrides["trials"] = trials
    if seed is not None:
        overrides["seed"] = seed
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--trials", type=int, default=None, help="Override trial count.")
@click.option("--run-seed", "run_seed", type=int, default=None, help="Override experiment seed.")
@click.option("-o", "--out-dir", default="results", show_default=True, type=click.Path())
@click.pass_context
def simulate(ctx, config_path, trials, run_seed, out_dir):
    """Run a Monte-Carlo channel experiment from a JSON config."""
    cfg = _load_experiment(ctx, config_path, trials, run_seed)
    report = harness.run_channel_experiment(cfg)
    paths = harness.write_experiment_outputs(report, cfg, out_dir)
    summary = {
        "raw_fer": report.raw_fer,
        "fer_flagged": report.fer_flagged,
        "fer_reference": report.fer_reference,
        "bit_acc": report.phi_bit_acc,
        "attribution_acc": report.attribution_acc,
        "csv": str(paths["csv"]),
        "json": str(paths["json"]),
    }
    human = (
        f"trials={report.trials} raw_fer={metrics.format_cell(report.raw_fer)} "
        f"fer_flagged={metrics.format_cell(report.fer_flagged)} "
        f"fer_reference={metrics.format_cell(report.fer_reference)} "
        f"attribution_acc={metrics.format_cell(report.attribution_acc)}\n"
        f"wrote {paths['csv']} and {paths['json']}"
    )
    _emit(ctx, human, summary)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--family", required=True, help="Attack family to sweep (e.g. jpeg, brightness).")
@click.option("--grid", required=True, help="Comma-separated strengths, e.g. 40,50,60,70,80,90.")
@click.option("--trials", type=int, default=None, help="Override trial count.")
@click.option("--run-seed", "run_seed", type=int, default=None, help="Override experiment seed.")
@click.option("-o", "--out-dir", default="results", show_default=True, type=click.Path())
@click.pass_context
def sweep(ctx, config_path, family, grid, trials, run_seed, out_dir):
    """Sweep one attack family over a strength grid."""
    cfg = _load_experiment(ctx, config_path, trials, run_seed)
    try:
        strengths = [float(s) for s in grid.split(",") if s.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad grid: {exc}") from exc
    if not strengths:
        raise click.UsageError("grid is empty")
    try:
        result = harness.run_attack_sweep(cfg, family, strengths)
    except attacks_mod.InvalidStrengthError as exc:
        raise click.UsageError(str(exc)) from exc
    paths = harness.write_sweep_outputs(result, cfg, out_dir)
    rows = [
        {
            "strength": r.strength,
            "bit_acc": r.phi_bit_acc,
            "fer_flagged": r.fer_flagged,
            "fer_reference": r.fer_reference,
        }
        for r in result.reports
    ]
    human_lines = [f"{family} sweep over {strengths}:"]
    for row in rows:
        human_lines.append(
            f"  strength={metrics.format_cell(row['strength'])} "
            f"bit_acc={metrics.format_cell(row['bit_acc'])} "
            f"fer_flagged={metrics.format_cell(row['fer_flagged'])} "
            f"fer_reference={metrics.format_cell(row['fer_reference'])}"
        )
    human_lines.append(f"wrote {paths['csv']}, {paths['json']}, {paths['svg']}")
    _emit(ctx, "\n".join(human_lines), {"rows": rows, "paths": {k: str(v) for k, v in paths.items()}})


@main.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--out-dir", default=None, type=click.Path(), help="Defaults to RESULTS_DIR.")
@click.pass_context
def report(ctx, results_dir, out_dir):
    """Merge result CSVs and emit a summary table plus SVG plots."""
    out = Path(out_dir) if out_dir else Path(results_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows: list[dict[str, str]] = []
    for csv_path in sorted(Path(results_dir).glob("*.csv")):
        if csv_path.name == "merged.csv":
            continue
        rows.extend(metrics.read_csv(csv_path))
    if not rows:
        raise click.UsageError(f"no CSV results in {results_dir}")
    merged = out / "merged.csv"
    import csv as csv_lib

    with open(merged, "w", newline="") as fh:
        writer = csv_lib.DictWriter(fh, fieldnames=metrics.CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in metrics.CSV_COLUMNS})

    svg_paths = _plot_merged(rows, out)
    lines = [f"{'method':<6} {'attack':<18} {'strength':<9} {'bit_acc':<10} {'fer_flagged':<12} {'fer_reference':<13}"]
    for row in rows:
        lines.append(
            f"{row['method']:<6} {row['attack']:<18} {row['strength']:<9} "
            f"{row['bit_acc']:<10} {row['fer_flagged']:<12} {row['fer_reference']:<13}"
        )
    lines.append(f"wrote {merged}" + (f" and {len(svg_paths)} plot(s)" if svg_paths else ""))
    _emit(
        ctx,
        "\n".join(lines),
        {"rows": rows, "merged": str(merged), "plots": [str(p) for p in svg_paths]},
    )


def _plot_merged(rows: list[dict[str, str]], out: Path) -> list[Path]:
    """One accuracy/FER plot per sweepable attack family found in the rows."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    families: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        attack = row.get("attack", "")
        if ":" in attack and "+" not in attack and row.get("strength"):
            families.setdefault(attack.split(":")[0], []).append(row)
    paths = []
    for family, family_rows in sorted(families.items()):
        series: dict[str, list[tuple[float, float, float]]] = {}
        for row in family_rows:
            x = float(row["strength"])
            acc = float(row["bit_acc"]) if row["bit_acc"] else float("nan")
            ref = float(row["fer_reference"]) if row["fer_reference"] else float("nan")
            series.setdefault(row["method"], []).append((x, acc, ref))
        fig, (ax_acc, ax_fer) = plt.subplots(1, 2, figsize=(10, 4))
        for method, points in sorted(series.items()):
            points.sort()
            ax_acc.plot([p[0] for p in points], [p[1] for p in points], "o-", label=method)
            ax_fer.plot([p[0] for p in points], [p[2] for p in points], "o-", label=method)
        ax_acc.set_xlabel(f"{family} strength")
        ax_acc.set_ylabel("bit accuracy")
        ax_acc.grid(True, alpha=0.3)
        ax_acc.legend()
        ax_fer.set_xlabel(f"{family} strength")
        ax_fer.set_ylabel("reference FER")
        ax_fer.grid(True, alpha=0.3)
        ax_fer.legend()
        fig.tight_layout()
        path = out / f"report_{family}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


if __name__ == "__main__":
    main()

"""Command line front end: simulate | analyze | oracle.

``simulate`` writes a one-column CSV of a seeded model draw, ``analyze``
runs the threshold -> indicators -> extremogram/spectrum pipeline on a
CSV series, and ``oracle`` emits the closed-form ARMA(1,1) curves for
overlay.  All outputs embed the resolved configuration, so equal
configurations reproduce byte-identical files.

Exit codes: 0 success, 2 parse/configuration error, 3 degenerate data
(e.g. zero tail events).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import estimators, inference, oracles, simulate
from .core import (
    DegenerateDataError,
    EstimatorConfig,
    FrequencyGrid,
    InputError,
    Interval,
    LowerRay,
    ParameterError,
    TailSet,
    UpperRay,
    exceedance_indicators,
    fourier_grid,
    threshold_from_quantile,
)
from .trigsums import SingularFrequencyError

THREADS_ENV = "EXTSPEC_THREADS"


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_manifest(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Flag parsing helpers


def parse_noise(text: str) -> simulate.NoiseSpec:
    """``t:NU`` or ``pareto:ALPHA:P``."""
    parts = text.split(":")
    try:
        if parts[0] == "t" and len(parts) == 2:
            return simulate.StudentT(df=float(parts[1]))
        if parts[0] == "pareto" and len(parts) in (2, 3):
            share = float(parts[2]) if len(parts) == 3 else 0.5
            return simulate.ParetoBalanced(alpha=float(parts[1]), upper_share=share)
    except ValueError as exc:
        raise ParameterError(f"bad noise spec {text!r}: {exc}") from exc
    raise ParameterError(f"bad noise spec {text!r}: expected t:NU or pareto:ALPHA[:P]")


def parse_tail_set(text: str) -> TailSet:
    """``upper:A``, ``lower:A`` or ``interval:A:B``."""
    parts = text.split(":")
    try:
        if parts[0] == "upper" and len(parts) <= 2:
            return UpperRay(a=float(parts[1]) if len(parts) == 2 else 1.0)
        if parts[0] == "lower" and len(parts) <= 2:
            return LowerRay(a=float(parts[1]) if len(parts) == 2 else 1.0)
        if parts[0] == "interval" and len(parts) == 3:
            return Interval(a=float(parts[1]), b=float(parts[2]))
    except ValueError as exc:
        raise ParameterError(f"bad tail set {text!r}: {exc}") from exc
    raise ParameterError(f"bad tail set {text!r}: expected upper:A, lower:A or interval:A:B")


def parse_window(text: str) -> estimators.WeightWindow:
    """``daniell:S`` or ``custom:w1,w2,...`` (odd count, offsets -s..s)."""
    parts = text.split(":", 1)
    try:
        if parts[0] == "daniell" and len(parts) == 2:
            return estimators.daniell_window(int(parts[1]))
        if parts[0] == "custom" and len(parts) == 2:
            w = [float(v) for v in parts[1].split(",") if v != ""]
            if len(w) % 2 == 0:
                raise ParameterError("custom window needs an odd number of weights")
            return estimators.WeightWindow(weights=np.asarray(w), half_width=len(w) // 2)
    except ValueError as exc:
        raise ParameterError(f"bad window {text!r}: {exc}") from exc
    raise ParameterError(f"bad window {text!r}: expected daniell:S or custom:w1,w2,...")


def parse_grid(text: str, n: int | None) -> FrequencyGrid:
    """``fourier``, ``fourier:N``, ``linspace:A:B:K`` or ``list:l1,l2,...``."""
    parts = text.split(":")
    try:
        if parts[0] == "fourier":
            if len(parts) == 1:
                if n is None:
                    raise ParameterError("fourier grid needs a series length")
                return fourier_grid(n)
            if len(parts) == 2:
                return fourier_grid(int(parts[1]))
        if parts[0] == "linspace" and len(parts) == 4:
            a, b, k = float(parts[1]), float(parts[2]), int(parts[3])
            if k < 1:
                raise ParameterError("linspace grid needs at least one point")
            return FrequencyGrid.from_frequencies(np.linspace(a, b, k))
        if parts[0] == "list" and len(parts) == 2:
            vals = [float(v) for v in parts[1].split(",") if v != ""]
            return FrequencyGrid.from_frequencies(vals)
    except ValueError as exc:
        raise ParameterError(f"bad grid {text!r}: {exc}") from exc
    raise ParameterError(
        f"bad grid {text!r}: expected fourier[:N], linspace:A:B:K or list:l1,l2,..."
    )


def read_series_csv(path) -> np.ndarray:
    """Read a one-column CSV: ``#`` comments and one optional header row."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    values: list[float] = []
    header_allowed = True
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            cell = text.split(",")[0].strip()
            try:
                values.append(float(cell))
            except ValueError:
                if header_allowed and not values:
                    header_allowed = False
                    continue
                raise InputError(f"{path}: line {lineno}: not a number: {cell!r}") from None
            header_allowed = False
    if not values:
        raise InputError(f"{path}: no numeric rows found")
    return np.asarray(values, dtype=float)


# ---------------------------------------------------------------------------
# simulate


def _build_model(args) -> tuple[object, dict]:
    noise = parse_noise(args.noise)
    if args.model == "iid":
        return noise, {"model": "iid", "noise": noise.describe()}
    if args.model == "arma11":
        if args.phi is None or args.theta is None:
            raise ParameterError("arma11 needs --phi and --theta")
        spec = simulate.Arma11Spec(phi=args.phi, theta=args.theta, noise=noise)
        return spec, {
            "model": "arma11",
            "phi": args.phi,
            "theta": args.theta,
            "noise": noise.describe(),
        }
    if args.model == "sv":
        spec = simulate.SvSpec(
            logvol_ar=args.logvol_ar, logvol_sd=args.logvol_sd, noise=noise
        )
        return spec, {
            "model": "sv",
            "logvol_ar": args.logvol_ar,
            "logvol_sd": args.logvol_sd,
            "noise": noise.describe(),
        }
    if args.model == "maxma":
        if args.psi is not None:
            psi = tuple(float(v) for v in args.psi.split(",") if v != "")
            desc: dict = {"model": "maxma", "psi": list(psi), "noise": noise.describe()}
        elif args.phi is not None and args.theta is not None:
            tail = oracles.TailIndexSpec(
                alpha=noise.tail_index, upper_share=noise.upper_tail_share
            )
            filt = oracles.arma11_filter(args.phi, args.theta)
            psi = tuple(filt.materialize(tail, args.trunc_eps))
            desc = {
                "model": "maxma",
                "phi": args.phi,
                "theta": args.theta,
                "trunc_eps": args.trunc_eps,
                "n_coeffs": len(psi),
                "noise": noise.describe(),
            }
        else:
            raise ParameterError("maxma needs --psi or both --phi and --theta")
        spec = simulate.MaxMaSpec(psi=psi, noise=noise, truncation_eps=args.trunc_eps)
        return spec, desc
    raise ParameterError(f"unknown model {args.model!r}")


def cmd_simulate(args) -> int:
    spec, desc = _build_model(args)
    if args.model == "iid":
        x = simulate.sample_noise(spec, args.n, args.seed)
        burnin = 0
    elif args.model == "arma11":
        burnin = args.burnin if args.burnin is not None else simulate.default_burnin(spec.phi)
        x = simulate.simulate_arma11(spec, args.n, args.seed, burnin)
    elif args.model == "sv":
        burnin = (
            args.burnin if args.burnin is not None else simulate.default_burnin(spec.logvol_ar)
        )
        x = simulate.simulate_sv(spec, args.n, args.seed, burnin)
    else:
        x = simulate.simulate_max_ma(spec, args.n, args.seed)
        burnin = 0
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        fh.write(f"# extspec simulate {args.model}\n")
        fh.write(f"# spec = {json.dumps(desc, sort_keys=True)}\n")
        fh.write(f"# n = {args.n}, seed = {args.seed}, burnin = {burnin}\n")
        for v in x:
            fh.write(_fmt(v) + "\n")
    print(f"wrote {args.n} values to {out}")
    return 0


# ---------------------------------------------------------------------------
# analyze


@dataclass(frozen=True)
class AnalysisConfig:
    """Resolved analyze-pipeline configuration; round-trips through dicts."""

    input: str
    out_dir: str
    q: float = 0.98
    tail_set: str = "upper:1"
    window: str = "daniell:50"
    grid: str = "fourier"
    max_lag: int = 50
    band: str = "none"
    replicates: int = 99
    band_seed: int = 0
    level: float = 0.05
    output_format: str = "csv"

    def __post_init__(self):
        if self.band not in ("none", "surrogate", "permutation"):
            raise ParameterError("band must be none, surrogate or permutation")
        if self.output_format not in ("csv", "json"):
            raise ParameterError("format must be csv or json")
        if self.max_lag < 0:
            raise ParameterError("max lag must be nonnegative")
        # eagerly validate the parseable pieces
        parse_tail_set(self.tail_set)
        parse_window(self.window)

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "out_dir": self.out_dir,
            "q": self.q,
            "tail_set": self.tail_set,
            "window": self.window,
            "grid": self.grid,
            "max_lag": self.max_lag,
            "band": self.band,
            "replicates": self.replicates,
            "band_seed": self.band_seed,
            "level": self.level,
            "output_format": self.output_format,
        }

    def provenance_dict(self) -> dict:
        # everything that determines the numbers; where they are written
        # is not part of it
        payload = self.to_dict()
        payload.pop("out_dir")
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "AnalysisConfig":
        return cls(**{"out_dir": ".", **payload})


def _write_table(path: Path, comments: list[str], header: list[str], rows) -> None:
    with path.open("w") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_records_json(path: Path, meta: dict, header: list[str], rows) -> None:
    records = [{k: float(v) for k, v in zip(header, row)} for row in rows]
    path.write_text(json.dumps({"config": meta, "rows": records}, indent=2, sort_keys=True) + "\n")


def run_analysis(config: AnalysisConfig) -> dict:
    """Execute the pipeline and write the output files; returns the manifest."""
    x = read_series_csv(config.input)
    n = x.size
    thr = threshold_from_quantile(x, config.q)
    if thr.a_m <= 0:
        raise DegenerateDataError(
            f"quantile threshold {thr.a_m:g} is not positive; "
            "too few positive observations for scaled tail events"
        )
    tail_set = parse_tail_set(config.tail_set)
    ind = exceedance_indicators(x, tail_set, thr)
    if ind.n_events == 0:
        raise DegenerateDataError("no observations fall in the tail set")
    window = parse_window(config.window)
    max_lag = min(config.max_lag, n - 1)
    est_config = EstimatorConfig(q=config.q, s=window.half_width)
    est_config.validate_for_length(n)

    extrem = estimators.sample_extremogram(ind, max_lag)
    se = extrem.stderr()

    grid = parse_grid(config.grid, n)
    if len(grid) == 0:
        raise ParameterError("frequency grid is empty for this series length")
    raw = estimators.standardized_periodogram(ind, grid).values

    s = window.half_width
    smoothed = np.full(len(grid), np.nan)
    if grid.fourier and grid.n_ref == n:
        curve = estimators.smoothed_curve(ind, window)
        # admissible centers are a contiguous run of the Fourier grid
        offset = int(curve.grid.indices[0] - grid.indices[0])
        smoothed[offset : offset + len(curve.grid)] = curve.values
        band_grid = curve.grid
        band_values = curve.values
    else:
        curve = estimators.smoothed_at_frequencies(ind, grid.freqs, window)
        smoothed[:] = curve.values
        band_grid = curve.grid
        band_values = curve.values

    lower = np.full(len(grid), np.nan)
    upper = np.full(len(grid), np.nan)
    band_info: dict = {"method": config.band}
    if config.band != "none":
        if config.band == "surrogate":
            band = inference.surrogate_band(
                estimators.SpectralEstimate(grid=band_grid, values=band_values, kind="smoothed"),
                window,
            )
        else:
            workers = max(1, int(os.environ.get(THREADS_ENV, "1")))
            band = inference.permutation_band(
                x,
                est_config,
                tail_set,
                window,
                band_grid,
                replicates=config.replicates,
                seed=config.band_seed,
                level=config.level,
                n_workers=workers,
            )
            band_info.update(
                {"replicates": config.replicates, "seed": config.band_seed, "level": config.level}
            )
        mask = ~np.isnan(smoothed)
        lower[mask] = band.lower
        upper[mask] = band.upper

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "csv" if config.output_format == "csv" else "json"
    extrem_path = out_dir / f"extremogram.{ext}"
    spectrum_path = out_dir / f"spectrum.{ext}"

    config_line = json.dumps(config.provenance_dict(), sort_keys=True)
    extrem_rows = [(h, extrem.rho[h], se[h]) for h in range(max_lag + 1)]
    spectrum_rows = list(zip(grid.freqs, raw, smoothed, lower, upper))
    if config.output_format == "csv":
        _write_table(
            extrem_path,
            [f"extspec analyze: config = {config_line}"],
            ["h", "rho", "stderr"],
            extrem_rows,
        )
        _write_table(
            spectrum_path,
            [f"extspec analyze: config = {config_line}"],
            ["lambda", "raw", "smoothed", "lower", "upper"],
            spectrum_rows,
        )
    else:
        _write_records_json(
            extrem_path, config.provenance_dict(), ["h", "rho", "stderr"], extrem_rows
        )
        _write_records_json(
            spectrum_path,
            config.provenance_dict(),
            ["lambda", "raw", "smoothed", "lower", "upper"],
            spectrum_rows,
        )

    manifest = {
        "command": "analyze",
        "config": config.provenance_dict(),
        "n": n,
        "threshold": thr.a_m,
        "threshold_exceedances": thr.exceed_count,
        "events": ind.n_events,
        "event_rate": ind.p0_hat,
        "band": band_info,
        "outputs": {"extremogram": extrem_path.name, "spectrum": spectrum_path.name},
    }
    _write_manifest(out_dir / "manifest.json", manifest)
    return manifest


def cmd_analyze(args) -> int:
    config = AnalysisConfig(
        input=args.input,
        out_dir=args.out_dir,
        q=args.q,
        tail_set=args.tail_set,
        window=args.window,
        grid=args.grid,
        max_lag=args.max_lag,
        band=args.band,
        replicates=args.replicates,
        band_seed=args.band_seed,
        level=args.level,
        output_format=args.format,
    )
    manifest = run_analysis(config)
    print(
        f"analyzed {manifest['n']} observations, {manifest['events']} tail events; "
        f"outputs in {config.out_dir}"
    )
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    if args.model != "arma11":
        raise ParameterError("closed forms are available for the arma11 model only")
    tail = oracles.TailIndexSpec(alpha=args.alpha, upper_share=args.p)
    grid = parse_grid(args.grid, None)
    if len(grid) == 0:
        raise ParameterError("oracle grid is empty")

    oracle = oracles.arma11_spectral_oracle(args.phi, args.theta, tail)
    density = oracle.evaluate(grid.freqs)

    if args.phi + args.theta == 0.0:
        series_h = 1
        rho_closed = np.zeros(args.max_lag + 1)
        rho_closed[0] = 1.0
        residual = 0.0
    else:
        series_h = oracles.series_lag_for_accuracy(args.phi, args.alpha, 1e-12)
        rho_closed = oracles.arma11_extremogram_curve(
            args.phi, args.theta, tail, args.max_lag
        ).rho
        filt = oracles.arma11_filter(args.phi, args.theta)
        series_rho = oracles.extremogram_linear(filt, tail, series_h)
        series_oracle = oracles.spectral_from_extremogram(series_rho)
        residual = float(np.max(np.abs(density - series_oracle.evaluate(grid.freqs))))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    params_line = (
        f"arma11 oracle: phi = {args.phi:g}, theta = {args.theta:g}, "
        f"alpha = {args.alpha:g}, p = {args.p:g}"
    )
    _write_table(
        out_dir / "oracle_spectrum.csv",
        [params_line, f"provenance = {oracle.provenance}"],
        ["lambda", "density"],
        zip(grid.freqs, density),
    )
    _write_table(
        out_dir / "oracle_extremogram.csv",
        [params_line],
        ["h", "rho"],
        enumerate(rho_closed),
    )
    manifest = {
        "command": "oracle",
        "model": "arma11",
        "phi": args.phi,
        "theta": args.theta,
        "alpha": args.alpha,
        "upper_share": args.p,
        "grid": args.grid,
        "max_lag": args.max_lag,
        "provenance": oracle.provenance,
        "series_truncation": series_h,
        "max_series_residual": residual,
        "outputs": {
            "spectrum": "oracle_spectrum.csv",
            "extremogram": "oracle_extremogram.csv",
        },
    }
    _write_manifest(out_dir / "manifest.json", manifest)
    print(f"oracle curves written to {out_dir} (series residual {residual:.3e})")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extspec",
        description="Frequency-domain analysis of serial extremal dependence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="draw a seeded model sample to CSV")
    sim.add_argument("model", choices=["iid", "arma11", "sv", "maxma"])
    sim.add_argument("--noise", default="t:3", help="t:NU or pareto:ALPHA[:P]")
    sim.add_argument("--phi", type=float, default=None)
    sim.add_argument("--theta", type=float, default=None)
    sim.add_argument("--logvol-ar", type=float, default=0.0, dest="logvol_ar")
    sim.add_argument("--logvol-sd", type=float, default=0.0, dest="logvol_sd")
    sim.add_argument("--psi", default=None, help="comma-separated max-MA coefficients")
    sim.add_argument("--trunc-eps", type=float, default=1e-6, dest="trunc_eps")
    sim.add_argument("--burnin", type=int, default=None)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="extremogram and spectral estimates for a CSV series")
    ana.add_argument("--input", required=True)
    ana.add_argument("--out-dir", required=True, dest="out_dir")
    ana.add_argument("--q", type=float, default=0.98)
    ana.add_argument("--tail-set", default="upper:1", dest="tail_set")
    ana.add_argument("--window", default="daniell:50")
    ana.add_argument("--grid", default="fourier")
    ana.add_argument("--max-lag", type=int, default=50, dest="max_lag")
    ana.add_argument("--band", choices=["none", "surrogate", "permutation"], default="none")
    ana.add_argument("--replicates", type=int, default=99)
    ana.add_argument("--band-seed", type=int, default=0, dest="band_seed")
    ana.add_argument("--level", type=float, default=0.05)
    ana.add_argument("--format", choices=["csv", "json"], default="csv")
    ana.set_defaults(func=cmd_analyze)

    orc = sub.add_parser("oracle", help="closed-form curves for overlay")
    orc.add_argument("model", choices=["arma11"])
    orc.add_argument("--phi", type=float, required=True)
    orc.add_argument("--theta", type=float, required=True)
    orc.add_argument("--alpha", type=float, required=True)
    orc.add_argument("--p", type=float, default=0.5)
    orc.add_argument("--grid", default="linspace:0.01:3.13:512")
    orc.add_argument("--max-lag", type=int, default=50, dest="max_lag")
    orc.add_argument("--out-dir", required=True, dest="out_dir")
    orc.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, InputError, SingularFrequencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line pipeline: ingest -> fit -> network -> diagnose, plus a
simulator and a single-shot `run`.

Every artifact carries a provenance hash over the bytes and settings that
determine it, and no output embeds wall-clock time, so identical inputs give
byte-identical outputs. Exit codes: 0 ok/warn, 1 usage, 2 ingest, 3 fit,
4 network, 5 diagnostics, 6 simulate.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import export
from .diagnostics import CUSUM_CRITICAL_VALUES, companion_stability, ols_cusum
from .errors import (
    ConfigError,
    CvarnetError,
    DefinitenessError,
    DegenerateFitError,
    DimensionError,
    SingularDesignError,
    StationarityError,
)
from .granger import AdjacencyRole, Correction, assemble_network
from .panel import (
    Frequency,
    VariableKind,
    align_panel,
    interpolate_annual_to_quarterly,
    load_series_csv,
    panel_from_csv,
    panel_to_csv,
)
from .simulate import GeneratorSpec, simulate
from .varx import Criterion, fit_coupled, select_lag

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INGEST = 2
EXIT_FIT = 3
EXIT_NETWORK = 4
EXIT_DIAGNOSE = 5
EXIT_SIMULATE = 6


def _hash(*parts) -> str:
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, bytes):
            h.update(part)
        else:
            h.update(str(part).encode("utf-8"))
        h.update(b"\x1f")
    return h.hexdigest()


def _read_bytes(path) -> bytes:
    return Path(path).read_bytes()


def _load_config_file(path) -> dict:
    """Flat key=value config; '#' starts a comment, blank lines ignored."""
    settings = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        settings[key.strip().replace("-", "_")] = value.strip()
    return settings


def _merge_config(args: argparse.Namespace, keys) -> dict:
    """File settings first, command-line flags override."""
    merged = {}
    if getattr(args, "config", None):
        file_settings = _load_config_file(args.config)
        unknown = set(file_settings) - set(keys)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_settings)
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


# ---------------------------------------------------------------- pipeline steps


def step_ingest(cfg: dict, outdir: Path) -> Path:
    gdp_csv, cpi_csv = cfg["gdp_csv"], cfg["cpi_csv"]
    cpi_frequency = cfg.get("cpi_frequency", "annual")
    anchor = int(cfg.get("anchor", 4))
    gdp = load_series_csv(gdp_csv, VariableKind.GDP, Frequency.QUARTERLY)
    log = [f"gdp rows read: {len(gdp.periods)}"]
    if cpi_frequency == "annual":
        cpi_annual = load_series_csv(cpi_csv, VariableKind.CPI, Frequency.ANNUAL)
        log.append(f"cpi annual rows read: {len(cpi_annual.periods)}")
        cpi = interpolate_annual_to_quarterly(cpi_annual, anchor=anchor)
        log.append(f"cpi interpolated to quarterly, anchor quarter Q{anchor}")
    elif cpi_frequency == "quarterly":
        cpi = load_series_csv(cpi_csv, VariableKind.CPI, Frequency.QUARTERLY)
        log.append(f"cpi quarterly rows read: {len(cpi.periods)}")
        log.append("cpi interpolation skipped (input already quarterly)")
    else:
        raise ConfigError(f"cpi_frequency must be annual or quarterly, got {cpi_frequency!r}")
    panel = align_panel(gdp, cpi)
    trimmed = (len(gdp.periods) - panel.T) + (len(cpi.periods) - panel.T)
    log.append(
        f"aligned panel: T={panel.T} quarters ({panel.quarters[0]}..{panel.quarters[-1]}), "
        f"n={panel.n} countries"
    )
    log.append(f"quarters trimmed outside the common window: {trimmed}")
    cfg_hash = _hash(_read_bytes(gdp_csv), _read_bytes(cpi_csv), cpi_frequency, anchor)
    log.append(f"config hash: {cfg_hash}")

    outdir.mkdir(parents=True, exist_ok=True)
    panel_path = outdir / "panel.csv"
    panel_to_csv(panel, panel_path)
    (outdir / "ingest_log.txt").write_text("\n".join(log) + "\n", encoding="utf-8")
    print("\n".join(log))
    return panel_path


def step_fit(cfg: dict, panel_path: Path, outdir: Path) -> Path:
    panel = panel_from_csv(panel_path)
    p_raw, p_max_raw = cfg.get("p"), cfg.get("p_max")
    if (p_raw is None) == (p_max_raw is None):
        raise ConfigError("exactly one of p and p_max must be provided")
    criterion = cfg.get("criterion", "bic")
    if criterion not in ("aic", "bic", "both"):
        raise ConfigError(f"criterion must be aic, bic or both, got {criterion!r}")

    lag_lines = []
    if p_max_raw is not None:
        p_max = int(p_max_raw)
        wanted = [Criterion.AIC, Criterion.BIC] if criterion == "both" else [Criterion(criterion)]
        selections = {c: select_lag(panel, p_max, c) for c in wanted}
        header = ["lag"] + [f"{c.value}_gdp,{c.value}_cpi,{c.value}_total" for c in wanted]
        lag_lines.append(",".join(header))
        for p in range(1, p_max + 1):
            cells = [str(p)]
            for c in wanted:
                sg, sc = selections[c].scores[p]
                cells.append(f"{sg!r},{sc!r},{(sg + sc)!r}")
            lag_lines.append(",".join(cells))
        decider = Criterion.BIC if criterion == "both" else Criterion(criterion)
        chosen_p = selections[decider].chosen_p
        lag_lines.append(f"# chosen_p,{chosen_p},criterion,{decider.value}")
        if criterion == "both":
            other = selections[Criterion.AIC].chosen_p
            if other != chosen_p:
                lag_lines.append(f"# note: AIC prefers p={other}; BIC decision kept")
    else:
        chosen_p = int(p_raw)

    fit = fit_coupled(panel, chosen_p)
    cfg_hash = _hash(_read_bytes(panel_path), chosen_p, p_max_raw, criterion)
    outdir.mkdir(parents=True, exist_ok=True)
    model_path = outdir / "model.json"
    export.write_json(export.model_to_dict(fit, config_hash=cfg_hash), model_path)
    if lag_lines:
        (outdir / "lag_selection.csv").write_text("\n".join(lag_lines) + "\n", encoding="utf-8")
        print("\n".join(lag_lines))
    print(f"fitted coupled VARX(p={chosen_p}) on T={panel.T}, n={panel.n}")
    return model_path


def step_network(cfg: dict, model_path: Path, panel_path: Path, outdir: Path) -> Path:
    panel = panel_from_csv(panel_path)
    fit = export.model_from_dict(export.read_json(model_path), panel)
    alpha = float(cfg.get("alpha", 0.05))
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    correction = Correction(cfg.get("correction", "none"))
    formats = set((cfg.get("formats") or "dot,json,csv").split(","))
    unknown = formats - {"dot", "json", "csv"}
    if unknown:
        raise ConfigError(f"unknown export formats: {sorted(unknown)}")

    network = assemble_network(panel, fit, alpha, correction)
    cfg_hash = _hash(_read_bytes(model_path), _read_bytes(panel_path), alpha, correction.value)
    outdir.mkdir(parents=True, exist_ok=True)
    network_path = outdir / "network.json"
    if "json" in formats:
        export.write_json(export.network_to_dict(network, config_hash=cfg_hash), network_path)
    for role in AdjacencyRole:
        adj = network.adjacency(role)
        if "csv" in formats:
            export.adjacency_to_csv(adj, outdir / f"{role.value}.csv")
        if "dot" in formats:
            (outdir / f"{role.value}.dot").write_text(
                export.adjacency_to_dot(adj), encoding="utf-8"
            )
    edges = {role.value: int((network.adjacency(role).matrix != 0).sum()) for role in AdjacencyRole}
    print(f"network extracted at alpha={alpha}: edges per matrix {edges}")
    return network_path


def step_diagnose(cfg: dict, model_path: Path, panel_path: Path, outdir: Path) -> bool:
    alpha = float(cfg.get("alpha", 0.05))
    if alpha not in CUSUM_CRITICAL_VALUES:
        raise ConfigError(
            f"diagnostics alpha must be one of {sorted(CUSUM_CRITICAL_VALUES)}, got {alpha}"
        )
    panel = panel_from_csv(panel_path)
    fit = export.model_from_dict(export.read_json(model_path), panel)

    payload = {"alpha": alpha}
    overall_stable = True
    outdir.mkdir(parents=True, exist_ok=True)
    for name, line in (("gdp", fit.gdp_fit), ("cpi", fit.cpi_fit)):
        stability = companion_stability(line)
        cusum = ols_cusum(line, alpha=alpha, labels=panel.labels)
        overall_stable &= stability.stable
        payload[name] = {
            "eigen_moduli": stability.eigen_moduli.tolist(),
            "max_modulus": stability.max_modulus,
            "stable": stability.stable,
            "cusum": {
                "sup_stats": cusum.sup_stats.tolist(),
                "critical_value": cusum.critical_value,
                "rejected": cusum.rejected.tolist(),
                "any_rejected": cusum.any_rejected,
            },
        }
        export.cusum_paths_to_csv(cusum, outdir / f"cusum_{name}.csv")
    payload["stable"] = overall_stable
    payload["provenance"] = {
        "config_hash": _hash(_read_bytes(model_path), _read_bytes(panel_path), alpha)
    }
    export.write_json(payload, outdir / "diagnostics.json")
    for name in ("gdp", "cpi"):
        print(
            f"{name}: max companion modulus {payload[name]['max_modulus']:.4f} "
            f"({'stable' if payload[name]['stable'] else 'UNSTABLE'})"
        )
    if not overall_stable:
        print("WARN: coupled model failed the dynamic stability check", file=sys.stderr)
    return overall_stable


def step_simulate(cfg: dict, outdir: Path) -> Path:
    payload = export.read_json(cfg["spec_json"])
    spec = export.spec_from_dict(payload)
    if cfg.get("seed") is not None:
        spec = GeneratorSpec(
            n=spec.n, p=spec.p,
            intercept_x=spec.intercept_x, intercept_y=spec.intercept_y,
            phi=spec.phi, pi=spec.pi, psi=spec.psi, gamma=spec.gamma,
            cov_x=spec.cov_x, cov_y=spec.cov_y,
            seed=int(cfg["seed"]), burn_in=spec.burn_in, noise_free=spec.noise_free,
        )
    T = int(cfg["length"])
    panel = simulate(spec, T)
    outdir.mkdir(parents=True, exist_ok=True)
    out_path = outdir / "simulated_panel.csv"
    panel_to_csv(panel, out_path)
    print(
        f"simulated T={T}, n={spec.n}, seed={spec.seed} "
        f"(rng=philox4x64, normals=inverse-cdf)"
    )
    return out_path


# ---------------------------------------------------------------- subcommands


def cmd_ingest(args):
    cfg = _merge_config(args, ("gdp_csv", "cpi_csv", "cpi_frequency", "anchor"))
    _require(cfg, "gdp_csv", "cpi_csv")
    try:
        step_ingest(cfg, Path(args.outdir))
    except CvarnetError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    return EXIT_OK


def cmd_fit(args):
    cfg = _merge_config(args, ("p", "p_max", "criterion"))
    try:
        step_fit(cfg, Path(args.panel), Path(args.outdir))
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return EXIT_FIT
    return EXIT_OK


def cmd_network(args):
    cfg = _merge_config(args, ("alpha", "correction", "formats"))
    try:
        step_network(cfg, Path(args.model), Path(args.panel), Path(args.outdir))
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    return EXIT_OK


def cmd_diagnose(args):
    cfg = _merge_config(args, ("alpha",))
    try:
        step_diagnose(cfg, Path(args.model), Path(args.panel), Path(args.outdir))
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"diagnostics error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSE
    return EXIT_OK


def cmd_simulate(args):
    cfg = _merge_config(args, ("spec_json", "length", "seed"))
    _require(cfg, "spec_json", "length")
    try:
        step_simulate(cfg, Path(args.outdir))
    except CvarnetError as exc:
        print(f"simulate error: {exc}", file=sys.stderr)
        return EXIT_SIMULATE
    return EXIT_OK


def cmd_run(args):
    keys = (
        "gdp_csv", "cpi_csv", "cpi_frequency", "anchor",
        "p", "p_max", "criterion", "alpha", "correction", "formats",
    )
    cfg = _merge_config(args, keys)
    _require(cfg, "gdp_csv", "cpi_csv")
    outdir = Path(args.outdir)
    try:
        panel_path = step_ingest(cfg, outdir)
    except CvarnetError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    try:
        model_path = step_fit(cfg, panel_path, outdir)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return EXIT_FIT
    try:
        step_network(cfg, model_path, panel_path, outdir)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    try:
        step_diagnose(cfg, model_path, panel_path, outdir)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CvarnetError as exc:
        print(f"diagnostics error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSE
    report = {
        "config": {k: cfg.get(k) for k in keys},
        "config_hash": _hash(
            _read_bytes(cfg["gdp_csv"]), _read_bytes(cfg["cpi_csv"]),
            *[cfg.get(k) for k in keys if k not in ("gdp_csv", "cpi_csv")],
        ),
        "artifacts": sorted(p.name for p in outdir.iterdir() if p.is_file()),
    }
    export.write_json(report, outdir / "report.json")
    return EXIT_OK


def _require(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"missing required settings: {missing}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvarnet",
        description="Coupled VARX fitting and Granger-causality network extraction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file; flags override")
        p.add_argument("--outdir", default="out", help="output directory")

    p = sub.add_parser("ingest", help="load, interpolate and align the panel")
    common(p)
    p.add_argument("--gdp-csv", dest="gdp_csv")
    p.add_argument("--cpi-csv", dest="cpi_csv")
    p.add_argument("--cpi-frequency", dest="cpi_frequency", choices=["annual", "quarterly"])
    p.add_argument("--anchor", type=int, choices=[1, 2, 3, 4])
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="estimate the coupled VARX system")
    common(p)
    p.add_argument("--panel", required=True, help="aligned panel CSV from ingest")
    p.add_argument("--p", type=int)
    p.add_argument("--p-max", dest="p_max", type=int)
    p.add_argument("--criterion", choices=["aic", "bic", "both"])
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("network", help="extract the four causality matrices")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--panel", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--correction", choices=["none", "bonferroni", "bh"])
    p.add_argument("--formats", help="comma-separated subset of dot,json,csv")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("diagnose", help="stability and CUSUM diagnostics")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--panel", required=True)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("simulate", help="simulate a panel from a generator spec")
    common(p)
    p.add_argument("--spec-json", dest="spec_json")
    p.add_argument("--length", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="full pipeline: ingest, fit, network, diagnose")
    common(p)
    p.add_argument("--gdp-csv", dest="gdp_csv")
    p.add_argument("--cpi-csv", dest="cpi_csv")
    p.add_argument("--cpi-frequency", dest="cpi_frequency", choices=["annual", "quarterly"])
    p.add_argument("--anchor", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--p", type=int)
    p.add_argument("--p-max", dest="p_max", type=int)
    p.add_argument("--criterion", choices=["aic", "bic", "both"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--correction", choices=["none", "bonferroni", "bh"])
    p.add_argument("--formats")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Serialization: lossless JSON interchange, appendix-style adjacency CSV,
and Graphviz DOT digraphs.

JSON carries full binary-float precision (shortest round-trip decimals);
the 2-decimal adjacency CSV is lossy by contract and mirrors the fixed
formatting of printed tables. DOT node order is the canonical label order
and edges follow a row-major scan, so outputs are byte-stable.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .errors import SchemaError
from .granger import AdjacencyRole, CausalityNetwork, WeightedAdjacency
from .panel import Panel
from .simulate import GeneratorSpec
from .varx import CoupledFit, EquationRole, VarxFit, build_design

SCHEMA_VERSION = 1


def _fit_payload(fit: VarxFit) -> dict:
    return {
        "intercept": fit.intercept.tolist(),
        "endog_coefs": fit.endog_coefs.tolist(),
        "exog_coefs": fit.exog_coefs.tolist(),
        "resid_cov": fit.resid_cov.tolist(),
    }


def model_to_dict(fit: CoupledFit, config_hash: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "coupled_fit",
        "labels": list(fit.labels),
        "p": fit.p,
        "T": fit.T,
        "alpha": None,
        "matrices": None,
        "fit": {
            "gdp": _fit_payload(fit.gdp_fit),
            "cpi": _fit_payload(fit.cpi_fit),
        },
        "provenance": {"config_hash": config_hash},
    }


def network_to_dict(network: CausalityNetwork, config_hash: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "causality_network",
        "labels": list(network.labels),
        "p": network.p,
        "T": network.T,
        "alpha": network.alpha,
        "correction": network.correction.value,
        "matrices": {
            role.value: network.adjacency(role).matrix.tolist()
            for role in AdjacencyRole
        },
        "untestable": {
            role.value: [list(pair) for pair in network.adjacency(role).untestable]
            for role in AdjacencyRole
        },
        "provenance": {"config_hash": config_hash},
    }


def write_json(payload: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def model_from_dict(payload: dict, panel: Panel) -> CoupledFit:
    """Rebuild a coupled fit from its JSON payload against the panel it was
    estimated on. Residuals and RSS are recomputed deterministically from the
    stored coefficients, so the round trip is exact."""
    if payload.get("kind") != "coupled_fit":
        raise SchemaError(f"not a coupled_fit payload (kind={payload.get('kind')!r})")
    if list(panel.labels) != payload["labels"] or panel.T != payload["T"]:
        raise SchemaError("model payload does not match the panel (labels or T differ)")
    p = int(payload["p"])
    gdp = _rebuild_line(payload["fit"]["gdp"], panel.x, panel.y, p, EquationRole.GDP_EQUATION)
    cpi = _rebuild_line(payload["fit"]["cpi"], panel.y, panel.x, p, EquationRole.CPI_EQUATION)
    return CoupledFit(gdp_fit=gdp, cpi_fit=cpi, labels=panel.labels, T=panel.T)


def _rebuild_line(entry: dict, endog, exog, p: int, role: EquationRole) -> VarxFit:
    intercept = np.asarray(entry["intercept"], dtype=float)
    endog_coefs = np.asarray(entry["endog_coefs"], dtype=float)
    exog_coefs = np.asarray(entry["exog_coefs"], dtype=float)
    n = intercept.shape[0]
    Z, Y = build_design(endog, exog, p)
    B = np.empty((1 + 2 * n * p, n))
    B[0, :] = intercept
    for s in range(p):
        B[1 + s * n : 1 + (s + 1) * n, :] = endog_coefs[s].T
        B[1 + (p + s) * n : 1 + (p + s + 1) * n, :] = exog_coefs[s].T
    E = Y - Z @ B
    return VarxFit(
        role=role,
        p=p,
        intercept=intercept,
        endog_coefs=endog_coefs,
        exog_coefs=exog_coefs,
        residuals=E,
        resid_cov=(E.T @ E) / E.shape[0],
        rss_per_equation=np.sum(E * E, axis=0),
        regressor_count=Z.shape[1],
    )


def spec_to_dict(spec: GeneratorSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "generator_spec",
        "n": spec.n,
        "p": spec.p,
        "intercept_x": spec.intercept_x.tolist(),
        "intercept_y": spec.intercept_y.tolist(),
        "matrices": {
            "phi": spec.phi.tolist(),
            "pi": spec.pi.tolist(),
            "psi": spec.psi.tolist(),
            "gamma": spec.gamma.tolist(),
        },
        "cov_x": spec.cov_x.tolist(),
        "cov_y": spec.cov_y.tolist(),
        "seed": spec.seed,
        "burn_in": spec.burn_in,
        "noise_free": spec.noise_free,
        "rng": {"bit_generator": "philox4x64", "normal_transform": "inverse-cdf"},
    }


def spec_from_dict(payload: dict) -> GeneratorSpec:
    if payload.get("kind") != "generator_spec":
        raise SchemaError(f"not a generator_spec payload (kind={payload.get('kind')!r})")
    m = payload["matrices"]
    return GeneratorSpec(
        n=int(payload["n"]),
        p=int(payload["p"]),
        intercept_x=np.asarray(payload["intercept_x"], dtype=float),
        intercept_y=np.asarray(payload["intercept_y"], dtype=float),
        phi=np.asarray(m["phi"], dtype=float),
        pi=np.asarray(m["pi"], dtype=float),
        psi=np.asarray(m["psi"], dtype=float),
        gamma=np.asarray(m["gamma"], dtype=float),
        cov_x=np.asarray(payload["cov_x"], dtype=float),
        cov_y=np.asarray(payload["cov_y"], dtype=float),
        seed=int(payload["seed"]),
        burn_in=int(payload["burn_in"]),
        noise_free=bool(payload.get("noise_free", False)),
    )


def adjacency_to_csv(adj: WeightedAdjacency, path) -> None:
    """Fixed 2-decimal table: header row and label column of country codes."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([""] + list(adj.labels))
        for i, lab in enumerate(adj.labels):
            writer.writerow([lab] + [f"{v:.2f}" for v in adj.matrix[i]])


def adjacency_from_csv(path):
    """Parse an adjacency CSV back into (labels, matrix) at its 2-decimal
    precision."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "":
            raise SchemaError(f"{path}: not an adjacency CSV")
        labels = tuple(header[1:])
        rows = []
        for row in reader:
            if not row:
                continue
            if row[0] != labels[len(rows)]:
                raise SchemaError(f"{path}: row label {row[0]!r} out of order")
            rows.append([float(c) for c in row[1:]])
    return labels, np.array(rows, dtype=float)


def adjacency_to_dot(adj: WeightedAdjacency, graph_name: str | None = None) -> str:
    """Digraph with one node per country (canonical order) and one edge per
    nonzero entry: source column j -> target row i, blue for positive weight,
    red for negative, labelled to 2 decimals."""
    name = graph_name or adj.role.value
    lines = [f"digraph {name} {{"]
    for lab in adj.labels:
        lines.append(f"    {lab};")
    for i, target in enumerate(adj.labels):
        for j, source in enumerate(adj.labels):
            w = adj.matrix[i, j]
            if w == 0.0:
                continue
            color = "blue" if w > 0 else "red"
            lines.append(
                f'    {source} -> {target} [color={color}, label="{w:.2f}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cusum_paths_to_csv(report, path) -> None:
    """CUSUM paths as CSV: step column plus one column per country."""
    labels = report.labels or tuple(
        f"EQ{i}" for i in range(report.paths.shape[1])
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step"] + list(labels))
        for m in range(report.paths.shape[0]):
            writer.writerow([m + 1] + [repr(float(v)) for v in report.paths[m]])

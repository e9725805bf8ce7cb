"""Dataset ingestion and result serialization.

Three network file formats are supported: edge CSVs with a
"source,target" header, square input-output tables whose positive cells
become edges, and the package's own JSON schema.  Node names are
normalized to dense ids 1..K; JSON round-trips preserve the logical
content exactly.  All CSV output is plain ASCII with '.' decimal points.
"""

from __future__ import annotations

import csv
import json
import warnings
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .network import ProductionNetwork

NETWORK_JSON_SCHEMA = 1


class DuplicateEdgeWarning(UserWarning):
    """An ingested file repeated an edge; duplicates were dropped."""


def parse_edge_csv(path) -> ProductionNetwork:
    """Read a directed edge list with header ``source,target``.

    Node ids are assigned by first appearance (source before target, row
    by row).  Duplicate rows collapse to one edge with a warning;
    self-loops are rejected.
    """
    path = Path(path)
    ids: dict[str, int] = {}
    edges = []
    seen = set()
    duplicates = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header[:2]] != ["source", "target"]:
            raise FormatError(f"{path}: expected header 'source,target', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise FormatError(f"{path}:{lineno}: expected two columns, got {row!r}")
            src, dst = row[0].strip(), row[1].strip()
            if not src or not dst:
                raise FormatError(f"{path}:{lineno}: empty node name")
            if src == dst:
                raise ValidationError(f"{path}:{lineno}: self-loop on {src!r}")
            for name in (src, dst):
                if name not in ids:
                    ids[name] = len(ids) + 1
            e = (ids[src], ids[dst])
            if e in seen:
                duplicates += 1
                continue
            seen.add(e)
            edges.append(e)
    if not ids:
        raise FormatError(f"{path}: no edges found")
    if duplicates:
        warnings.warn(
            f"{path}: dropped {duplicates} duplicate edge row(s)",
            DuplicateEdgeWarning,
            stacklevel=2,
        )
    return ProductionNetwork(len(ids), edges)


def parse_io_table(path, threshold: float = 0.0) -> ProductionNetwork:
    """Read a square input-output table; cells above threshold become edges.

    Row industry j supplies column industry i, giving edge (j, i).  The
    diagonal is ignored and the result may be cyclic (flagged on the
    network).  Non-square tables raise FormatError.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise FormatError(f"{path}: expected a labeled square matrix")
    col_labels = [c.strip() for c in rows[0][1:]]
    k = len(col_labels)
    if len(rows) - 1 != k:
        raise FormatError(f"{path}: matrix is not square ({len(rows) - 1} rows, {k} columns)")
    edges = []
    for r_idx, row in enumerate(rows[1:], start=1):
        if len(row) - 1 != k:
            raise FormatError(f"{path}: row {r_idx} has {len(row) - 1} cells, expected {k}")
        for c_idx in range(1, k + 1):
            if c_idx == r_idx:
                continue
            try:
                value = float(row[c_idx])
            except ValueError as exc:
                raise FormatError(f"{path}: non-numeric cell at row {r_idx}, col {c_idx}") from exc
            if value > threshold:
                edges.append((r_idx, c_idx))
    return ProductionNetwork(k, edges)


def save_network_json(net: ProductionNetwork, path) -> None:
    """Write the versioned JSON form of a network."""
    doc = {
        "schema": NETWORK_JSON_SCHEMA,
        "k": net.node_count,
        "n": net.supplier_count,
        "edges": [[j, i] for j, i in net.edges],
        "tiers": {str(v): t for v, t in net.tiers.items()} if net.tiers is not None else None,
        "acyclic": net.acyclic,
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def load_network_json(path) -> ProductionNetwork:
    """Read a network written by save_network_json."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != NETWORK_JSON_SCHEMA:
        raise FormatError(f"{path}: unsupported or missing schema tag")
    for key in ("k", "n", "edges"):
        if key not in doc:
            raise FormatError(f"{path}: missing field {key!r}")
    tiers = doc.get("tiers")
    if tiers is not None:
        tiers = {int(v): int(t) for v, t in tiers.items()}
    return ProductionNetwork(
        int(doc["k"]),
        [(int(j), int(i)) for j, i in doc["edges"]],
        supplier_count=int(doc["n"]),
        tiers=tiers,
        acyclic=bool(doc["acyclic"]) if doc.get("acyclic") else None,
    )


def save_edge_csv(net: ProductionNetwork, path) -> None:
    """Write the edge list as a source,target CSV (ids as names).

    Interchange only: the format carries no isolated nodes, tiers, or
    supplier count, and reparsing renumbers ids by first appearance.  Use
    the JSON form when the exact network must round-trip.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target"])
        for j, i in net.edges:
            writer.writerow([j, i])


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header: list[str], rows) -> None:
    """Write rows of mixed numeric/text cells with a header row.

    Floats are rendered with repr (shortest round-trip form, '.' decimal
    point, no separators) so output bytes are stable across locales.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_resilience_csv(curve, path) -> None:
    """ResilienceCurve as CSV with columns epsilon, r_hat, stderr."""
    write_csv(
        path,
        ["epsilon", "r_hat", "stderr"],
        zip(curve.epsilon_grid.tolist(), curve.r_hat.tolist(), curve.stderr.tolist()),
    )


def write_histogram_csv(pmf: np.ndarray, trials: int, path) -> None:
    """Cascade-size histogram as CSV with columns f, count, frequency."""
    rows = [(f, int(round(p * trials)), p) for f, p in enumerate(pmf.tolist())]
    write_csv(path, ["f", "count", "frequency"], rows)


def write_beta_csv(ranking, path) -> None:
    """Vulnerability ranking as CSV with columns product, beta, rank."""
    write_csv(
        path,
        ["product", "beta", "rank"],
        [(pid, beta, rank) for rank, (pid, beta) in enumerate(ranking, start=1)],
    )


def write_intervention_csv(rows, path) -> None:
    """Intervention sweep as CSV with columns T, T_frac, objective, resilience_lb."""
    write_csv(path, ["T", "T_frac", "objective", "resilience_lb"], rows)

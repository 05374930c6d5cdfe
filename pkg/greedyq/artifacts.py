"""CSV and JSON artifacts written and read by the command line."""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .distributions import parse_distribution
from .errors import DomainError
from .greedy1d import GreedySequence, sequence_from_points
from .product_grid import ProductGrid

logger = logging.getLogger(__name__)

SCHEMA = 1


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence], *, deterministic: bool = False) -> Path:
    """Comma-separated rows, reals in shortest round-trip form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        if not deterministic:
            fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_cell(v) for v in row])
            count += 1
    logger.info("wrote %d rows to %s", count, path)
    return path


def read_points_csv(path: str | Path, d: int) -> np.ndarray:
    """One point per row with ``d`` columns; comments and a header are skipped."""
    rows = []
    with Path(path).open() as fh:
        for line in csv.reader(row for row in fh if not row.startswith("#")):
            if not line:
                continue
            try:
                values = [float(v) for v in line]
            except ValueError:
                if rows:
                    raise DomainError(f"non-numeric row {line} in {path}") from None
                continue
            if len(values) != d:
                raise DomainError(f"row {line} in {path} has {len(values)} columns, expected {d}")
            rows.append(values)
    if not rows:
        raise DomainError(f"no points in {path}")
    return np.asarray(rows)


def sequence_to_dict(seq: GreedySequence) -> dict:
    return {
        "schema": SCHEMA,
        "distribution": seq.dist.spec,
        "n": seq.n,
        "points_in_insertion_order": list(seq.points),
        "error_sq_trace": list(seq.error_sq_trace),
        "steps": [asdict(s) for s in seq.steps],
    }


def sequence_from_dict(data: dict) -> GreedySequence:
    if data.get("schema") != SCHEMA:
        raise DomainError(f"unsupported sequence schema {data.get('schema')!r}")
    seq = sequence_from_points(parse_distribution(data["distribution"]), data["points_in_insertion_order"])
    if seq.n != data["n"]:
        raise DomainError(f"sequence file declares n={data['n']} but holds {seq.n} points")
    return seq


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def save_sequence(seq: GreedySequence, path: str | Path) -> Path:
    return write_json(path, sequence_to_dict(seq))


def load_sequence(path: str | Path) -> GreedySequence:
    return sequence_from_dict(json.loads(Path(path).read_text()))


def save_grid(grid: ProductGrid, path: str | Path, *, law: str, method: str) -> Path:
    """Grid JSON referencing one sequence file per marginal, stored alongside."""
    path = Path(path)
    names = []
    for k, seq in enumerate(grid.marginals):
        name = f"{path.stem}.marginal{k}.json"
        save_sequence(seq, path.with_name(name))
        names.append(name)
    return write_json(path, {
        "schema": SCHEMA,
        "law": law,
        "d": grid.d,
        "method": method,
        "sizes": list(grid.sizes),
        "scales": list(grid.scales),
        "history": list(grid.history),
        "marginals": names,
    })


def load_grid(path: str | Path) -> ProductGrid:
    path = Path(path)
    data = json.loads(path.read_text())
    if data.get("schema") != SCHEMA:
        raise DomainError(f"unsupported grid schema {data.get('schema')!r}")
    marginals = tuple(load_sequence(path.with_name(name)) for name in data["marginals"])
    return ProductGrid(marginals=marginals, scales=tuple(data["scales"]), history=tuple(data["history"]))

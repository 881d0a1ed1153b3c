"""CSV tables and run manifests.

CSV files are UTF-8 with a header row and LF line endings; floats are
written with 17 significant digits so every binary64 value round-trips.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

__all__ = ["format_value", "write_csv", "read_csv", "sha256", "write_manifest",
           "read_manifest", "MANIFEST_NAME"]

MANIFEST_NAME = "manifest.json"


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v == 0.0:
            return "0"
        return format(v, ".17g")
    return str(v)


def write_csv(path: Path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_value(v) for v in row])
    return path


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: Path, command: str, params: dict, outputs: list[Path],
                   version: str, extra: dict | None = None) -> Path:
    """Record everything needed to regenerate ``outputs``.

    No timestamps or host data go in, so the manifest of a replayed run is
    itself identical.
    """
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "params": params,
        "version": version,
        "outputs": {Path(p).name: sha256(p) for p in outputs},
    }
    if extra:
        manifest["extra"] = extra
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_manifest(path: Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))

"""Output persistence: delimited trajectory/sweep/spectrum files and the
run manifest. Every text output starts with a '# run_id: ...' comment so
files can be traced back to the manifest that produced them.
"""
from __future__ import annotations

import json
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import PowerSpectrum, SweepResult
from .cavity import MODE_TABLE_COLUMNS, ModeSet, mode_table_rows

#: Significant digits for all floating-point CSV fields.
CSV_DIGITS = 12


def new_run_id() -> str:
    return f"{time.strftime('%Y%m%dT%H%M%S')}-{secrets.token_hex(4)}"


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.{CSV_DIGITS}g}"
    return str(value)


def write_csv(path: Path, header: list[str], rows, run_id: str) -> Path:
    lines = [f"# run_id: {run_id}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_table_csv(path: Path, header: list[str], table: np.ndarray, run_id: str) -> Path:
    return write_csv(path, header, table, run_id)


def write_sweep_csv(path: Path, sweep: SweepResult, run_id: str) -> Path:
    rows = [[p.x_over_lambda, p.mean, p.min, p.max] for p in sweep.points]
    return write_csv(path, ["x_over_lambda", "mean", "min", "max"], rows, run_id)


def write_spectrum_csv(path: Path, spectrum: PowerSpectrum, run_id: str) -> Path:
    rows = np.column_stack([spectrum.freq_Omega0, spectrum.freq_fsr_units, spectrum.power])
    return write_csv(path, ["freq_Omega0", "freq_fsr_units", "power"], rows, run_id)


def write_mode_table_csv(path: Path, mode_set: ModeSet, run_id: str) -> Path:
    return write_csv(path, MODE_TABLE_COLUMNS, mode_table_rows(mode_set), run_id)


@dataclass
class RunManifest:
    """Provenance record for one CLI run."""

    run_id: str
    command: str
    preset: str | None
    scale: str | None
    config: dict
    code_version: str
    method: str = ""
    dim: int = 0
    n_samples: int = 0
    internal_dt: float = 0.0
    max_norm_drift: float = 0.0
    threads: int = 1
    wall_clock_s: float = 0.0
    outputs: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add_output(self, path: Path, base: Path) -> None:
        self.outputs.append(str(path.relative_to(base)))

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        payload = dict(self.__dict__)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return path


def verify_outputs(manifest_path: Path) -> list[str]:
    """Check every referenced output exists; text files must carry the run id.

    Returns a list of problems (empty means the manifest is consistent).
    """
    base = manifest_path.parent
    data = json.loads(manifest_path.read_text())
    run_id = data["run_id"]
    problems = []
    for rel in data["outputs"]:
        p = base / rel
        if not p.exists():
            problems.append(f"missing output {rel}")
            continue
        if p.suffix in (".csv", ".gp", ".txt", ".ini"):
            first = p.read_text().splitlines()[0] if p.read_text() else ""
            if run_id not in first:
                problems.append(f"{rel}: first line does not carry run id {run_id}")
    return problems

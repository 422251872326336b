"""
Writers for spectra and reports, the matching CSV reader, and the emitter of
standalone matplotlib scripts that redraw the written spectra.

CSV files are UTF-8 with LF line endings, a header row and 17 significant
digits, so reading a file back reproduces the in-memory floats exactly.
"""

import io
import csv
import json
import math
import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from ..analysis.spectrum import Spectrum
from ..physics.model import Regime

logger = logging.getLogger(__name__)

CSV_HEADER = ("omega_minus_omega0_over_gamma", "T", "R", "regime")

PathLike = Union[str, Path]


@dataclass
class SpectrumTable:
    """Columns of a spectrum CSV as read back from disk."""
    grid: np.ndarray
    transmission: np.ndarray
    reflection: np.ndarray
    regimes: List[Regime]


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return "{:.17g}".format(value)


def spectrum_path(base: PathLike, n_cells: int, multiple: bool, delta_omega: Optional[float] = None) -> Path:
    """
    ``out.csv`` -> ``out_N7.csv`` when several N share one output path, and
    ``out_dw0p5_N7.csv`` when several level splittings do as well.
    """
    base = Path(base)
    if not multiple:
        return base
    tag = "" if delta_omega is None else "_dw" + f"{delta_omega:g}".replace(".", "p")
    return base.with_name(f"{base.stem}{tag}_N{n_cells}{base.suffix}")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_name(path.name + ".tmp")
    with open(temp_file, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    os.replace(temp_file, path)


def write_spectrum_csv(spectrum: Spectrum, path: PathLike) -> Path:
    """Write one row per grid point. Raises OSError when the path is not writable."""
    path = Path(path)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for detuning, point in zip(spectrum.grid, spectrum.points):
        writer.writerow([
            format_float(float(detuning)),
            format_float(point.big_t),
            format_float(point.big_r),
            point.regime.value,
        ])
    _atomic_write(path, buffer.getvalue())
    logger.info(f"Wrote {len(spectrum.points)} points to {path}")
    return path


def read_spectrum_csv(path: PathLike) -> SpectrumTable:
    """Parse a file written by :func:`write_spectrum_csv`."""
    grid, big_t, big_r, regimes = [], [], [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}: malformed row {row!r}")
            grid.append(float(row[0]))
            big_t.append(float(row[1]))
            big_r.append(float(row[2]))
            regimes.append(Regime(row[3]))
    return SpectrumTable(
        grid=np.array(grid),
        transmission=np.array(big_t),
        reflection=np.array(big_r),
        regimes=regimes,
    )


def _json_ready(value: Any) -> Any:
    """numpy scalars/arrays and NaN to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_json_ready(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Regime):
        return value.value
    return value


def spectrum_to_dict(spectrum: Spectrum) -> Dict[str, Any]:
    return {
        "params": spectrum.params.as_dict(),
        "metadata": spectrum.metadata,
        "omega_minus_omega0_over_gamma": spectrum.grid,
        "T": spectrum.transmission(),
        "R": spectrum.reflection(),
        "regime": [r.value for r in spectrum.regimes()],
    }


def write_json(data: Dict[str, Any], path: PathLike) -> Path:
    path = Path(path)
    _atomic_write(path, json.dumps(_json_ready(data), indent=2) + "\n")
    logger.info(f"Wrote {path}")
    return path


PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Redraw {title}: transmission (solid) and reflection (dashed) per panel."""

import csv

import matplotlib.pyplot as plt

PANELS = {panels!r}


def load(path):
    x, t, r = [], [], []
    with open(path, encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            x.append(float(row["omega_minus_omega0_over_gamma"]))
            t.append(float(row["T"]))
            r.append(float(row["R"]))
    return x, t, r


fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 2.4 * len(PANELS)), sharex=True, squeeze=False)
for ax, (label, path) in zip(axes[:, 0], PANELS):
    x, t, r = load(path)
    ax.plot(x, t, "b-", label="T")
    ax.plot(x, r, "r--", label="R")
    ax.set_ylim(-0.05, 1.05)
    ax.set_ylabel(label)
    ax.legend(loc="upper right")
axes[-1, 0].set_xlabel(r"$(E - \\omega_0)/\\gamma$")
fig.suptitle({title!r})
fig.tight_layout()
fig.savefig({image!r}, dpi=150)
'''


def write_plot_script(panels: Sequence[tuple], script_path: PathLike, title: str,
                      image_path: Optional[PathLike] = None) -> Path:
    """
    Emit a standalone matplotlib script; nothing is rendered here.

    Args:
        panels: (label, csv_path) pairs, one subplot each, top to bottom
        script_path: where the script goes
        title: figure title
        image_path: image the script saves (default: script path with .png)
    """
    script_path = Path(script_path)
    image = Path(image_path) if image_path else script_path.with_suffix(".png")
    text = PLOT_TEMPLATE.format(
        title=title,
        panels=[(str(label), str(p)) for label, p in panels],
        image=str(image),
    )
    _atomic_write(script_path, text)
    logger.info(f"Plot script written to {script_path}")
    return script_path


OVERLAY_TEMPLATE = '''#!/usr/bin/env python3
"""Redraw {title}: one panel per N, one transmission curve per level splitting."""

import csv

import matplotlib.pyplot as plt

PANELS = {panels!r}
STYLES = ["b-", "r--", "g-.", "k:", "m-", "c--"]


def load(path):
    x, t = [], []
    with open(path, encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            x.append(float(row["omega_minus_omega0_over_gamma"]))
            t.append(float(row["T"]))
    return x, t


fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 2.4 * len(PANELS)), sharex=True, squeeze=False)
for ax, (label, curves) in zip(axes[:, 0], PANELS):
    for i, (curve, path) in enumerate(curves):
        x, t = load(path)
        ax.plot(x, t, STYLES[i % len(STYLES)], label=curve)
    ax.set_ylim(-0.05, 1.05)
    ax.set_ylabel(label + ": T")
    ax.legend(loc="upper right", fontsize="small")
axes[-1, 0].set_xlabel(r"$(E - \\omega_0)/\\gamma$")
fig.suptitle({title!r})
fig.tight_layout()
fig.savefig({image!r}, dpi=150)
'''


def write_overlay_script(panels: Sequence[tuple], script_path: PathLike, title: str,
                         image_path: Optional[PathLike] = None) -> Path:
    """
    Emit a standalone matplotlib script overlaying several spectra per panel.

    Args:
        panels: (label, [(curve_label, csv_path), ...]) pairs, one subplot each
    """
    script_path = Path(script_path)
    image = Path(image_path) if image_path else script_path.with_suffix(".png")
    text = OVERLAY_TEMPLATE.format(
        title=title,
        panels=[(str(label), [(str(c), str(p)) for c, p in curves]) for label, curves in panels],
        image=str(image),
    )
    _atomic_write(script_path, text)
    logger.info(f"Overlay plot script written to {script_path}")
    return script_path

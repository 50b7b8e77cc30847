"""Reproducible CSV emission and flat key-value config files.

Every CSV starts with a comment header recording the package version,
a hash of the effective configuration, the seed and the wall time, so
that a result file is traceable to the run that produced it.  Bodies
are deterministic for a fixed config and seed; only the header may
differ between reruns (timestamp, wall time).
"""

from __future__ import annotations

import hashlib
import io as _io
import time
from pathlib import Path

from . import __version__
from .errors import ConfigError


def fmt_real(x: float) -> str:
    """17 significant digits: round-trips any double."""
    return format(float(x), ".17g")


def config_hash(params: dict) -> str:
    canon = ";".join(f"{k}={params[k]}" for k in sorted(params))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def load_config(path) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip()
    return out


class CsvReport:
    """Accumulates rows, then writes header block + CSV body."""

    def __init__(self, columns: list[str], params: dict, seed=None):
        self.columns = columns
        self.params = dict(params)
        self.seed = seed
        self.rows: list[list] = []
        self.footer: list[str] = []
        self._t0 = time.monotonic()

    def add(self, *row) -> None:
        if len(row) != len(self.columns):
            raise ValueError("row length does not match columns")
        self.rows.append(list(row))

    def note(self, text: str) -> None:
        self.footer.append(text)

    def render(self) -> str:
        buf = _io.StringIO()
        buf.write(f"# polyvol {__version__}\n")
        buf.write(f"# config_hash: {config_hash(self.params)}\n")
        buf.write(f"# seed: {self.seed if self.seed is not None else 'none'}\n")
        buf.write(f"# wall_time_s: {time.monotonic() - self._t0:.3f}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            cells = [fmt_real(c) if isinstance(c, float) else str(c)
                     for c in row]
            buf.write(",".join(cells) + "\n")
        for line in self.footer:
            buf.write(f"# {line}\n")
        return buf.getvalue()

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render())
        return path


def render_series_plot(path, xs, ys_by_label: dict, xlabel: str,
                       ylabel: str, title: str) -> Path:
    """Optional companion figure next to a CSV (PNG)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in ys_by_label.items():
        ax.plot(xs, ys, marker="o", ms=3, lw=1, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(ys_by_label) > 1:
        ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

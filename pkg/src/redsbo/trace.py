"""Per-query and per-epoch records produced by every strategy."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class EpochSummary:
    r: int
    planned: int
    queries: int
    active_before: int
    active_after: int | None = None
    gap: float = float("nan")
    x_star_active: bool | None = None
    max_sigma: float = float("nan")
    band_scale: float = float("nan")
    band_offset: float = float("nan")
    tau_eff: float = float("nan")
    fit_ns: int = 0


@dataclass
class Trace:
    """Query stream of one run.

    ``f_x`` is NaN when the objective's noise-free value is unknown.
    ``active_history[r-1]`` is the active mask at the start of epoch ``r``,
    with one extra trailing entry for the mask after the last shrink.
    """

    strategy: str
    t: np.ndarray
    epoch: np.ndarray
    index: np.ndarray
    X: np.ndarray
    y: np.ndarray
    f_x: np.ndarray
    wall_ns: np.ndarray
    epochs: list[EpochSummary] = field(default_factory=list)
    active_history: list[np.ndarray] = field(default_factory=list)
    checkpoints: list[tuple[int, float]] = field(default_factory=list)

    def __len__(self):
        return self.t.size

    @property
    def T(self) -> int:
        return self.t.size

    @property
    def total_wall_ns(self) -> int:
        return int(self.wall_ns.sum())

    @property
    def has_f(self) -> bool:
        return bool(self.f_x.size) and not np.any(np.isnan(self.f_x))


class TraceRecorder:
    """Append-only builder for :class:`Trace`."""

    def __init__(self, strategy: str, d: int):
        self.strategy = strategy
        self.d = d
        self._rows: list[tuple] = []
        self._X: list[np.ndarray] = []
        self.epochs: list[EpochSummary] = []
        self.active_history: list[np.ndarray] = []
        self.checkpoints: list[tuple[int, float]] = []

    def __len__(self):
        return len(self._rows)

    def add(self, t, epoch, index, x, y, f_x, wall_ns):
        self._rows.append((int(t), int(epoch), int(index), float(y), float(f_x), int(wall_ns)))
        self._X.append(np.asarray(x, dtype=np.float64).reshape(self.d))

    def spread_ns(self, first: int, total_ns: int) -> None:
        """Charge ``total_ns`` evenly to the records from position ``first`` on."""
        k = len(self._rows) - first
        if k <= 0 or total_ns <= 0:
            return
        share, rem = divmod(int(total_ns), k)
        for j in range(first, len(self._rows)):
            extra = share + (rem if j == len(self._rows) - 1 else 0)
            row = self._rows[j]
            self._rows[j] = row[:5] + (row[5] + extra,)

    def build(self) -> Trace:
        cols = list(zip(*self._rows)) if self._rows else [()] * 6
        X = np.array(self._X) if self._X else np.zeros((0, self.d))
        return Trace(
            strategy=self.strategy,
            t=np.array(cols[0], dtype=np.int64),
            epoch=np.array(cols[1], dtype=np.int64),
            index=np.array(cols[2], dtype=np.int64),
            X=X,
            y=np.array(cols[3], dtype=np.float64),
            f_x=np.array(cols[4], dtype=np.float64),
            wall_ns=np.array(cols[5], dtype=np.int64),
            epochs=self.epochs,
            active_history=self.active_history,
            checkpoints=self.checkpoints,
        )

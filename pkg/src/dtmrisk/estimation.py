"""Normal maximum-likelihood fit of return series and CSV ingestion."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .distribution import EllipticalDistribution
from .errors import DomainError
from .generators import Normal

PSD_TOLERANCE = 1e-12


class CSVFormatError(DomainError):
    """Malformed returns file; the message carries the offending line number."""


@dataclass(frozen=True)
class ReturnSeries:
    """One named column of simple returns."""

    name: str
    values: tuple
    dates: Optional[tuple] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise DomainError(f"series {self.name!r} needs at least 2 observations (got {len(vals)})")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"series {self.name!r} contains non-finite values")
        if self.dates is not None:
            object.__setattr__(self, "dates", tuple(self.dates))
            if len(self.dates) != len(vals):
                raise DomainError(f"series {self.name!r}: {len(self.dates)} dates for {len(vals)} values")


@dataclass(frozen=True)
class FittedModel:
    """Mean vector, covariance matrix (MLE, divisor n) and sample size."""

    names: tuple
    mean: np.ndarray
    cov: np.ndarray
    n: int = field(default=0)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        k = mean.shape[0]
        if cov.shape != (k, k):
            raise DomainError(f"covariance shape {cov.shape} does not match {k} means")
        if len(self.names) != k:
            raise DomainError(f"{len(self.names)} names for {k} series")
        if not np.array_equal(cov, cov.T):
            raise DomainError("covariance matrix is not symmetric")
        scale = max(1.0, float(np.max(np.abs(cov)))) if cov.size else 1.0
        if k and np.linalg.eigvalsh(cov).min() < -PSD_TOLERANCE * scale:
            raise DomainError("covariance matrix is not positive semidefinite")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.cov).copy()

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
            "n": int(self.n),
        }


def fit_normal_mle(series: Sequence[ReturnSeries]) -> FittedModel:
    """Gaussian MLE: sample means and the divisor-n covariance matrix."""
    series = list(series)
    if not series:
        raise DomainError("no series to fit")
    lengths = {len(s.values) for s in series}
    if len(lengths) != 1:
        raise DomainError(f"series lengths differ: {sorted(lengths)}")
    data = np.array([s.values for s in series], dtype=float)  # (k, n)
    n = data.shape[1]
    mean = data.mean(axis=1)
    dev = data - mean[:, None]
    cov = dev @ dev.T / n
    cov = 0.5 * (cov + cov.T)
    return FittedModel(tuple(s.name for s in series), mean, cov, n)


def marginal_distributions(model: FittedModel) -> list:
    """Normal(mu_k, Sigma_kk) for each series; a zero variance is rejected."""
    out = []
    for name, mu, var in zip(model.names, model.mean, np.diag(model.cov)):
        if not var > 0.0:
            raise DomainError(f"series {name!r} has zero variance; sigma must be positive")
        out.append(EllipticalDistribution(float(mu), math.sqrt(float(var)), Normal()))
    return out


def parse_returns_csv(text: str) -> list:
    """Parse a returns table.

    First row is the header. A first column named ``date`` is kept as labels
    and not fitted. Every other cell must be a number with ``.`` as decimal
    separator; rows with empty cells or the wrong number of fields are
    rejected with their line number.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise CSVFormatError("line 1: empty file, expected a header row")
    header = [h.strip() for h in rows[0]]
    if not header or any(h == "" for h in header):
        raise CSVFormatError("line 1: header has an empty column name")
    has_date = header[0].lower() == "date"
    names = header[1:] if has_date else header
    if not names:
        raise CSVFormatError("line 1: no return columns")
    dates, columns = [], [[] for _ in names]
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CSVFormatError(f"line {lineno}: expected {len(header)} fields, found {len(row)}")
        cells = [c.strip() for c in row]
        if any(c == "" for c in cells):
            raise CSVFormatError(f"line {lineno}: empty cell")
        if has_date:
            dates.append(cells[0])
            cells = cells[1:]
        for j, c in enumerate(cells):
            try:
                v = float(c)
            except ValueError:
                raise CSVFormatError(f"line {lineno}: {c!r} is not a number") from None
            if not math.isfinite(v):
                raise CSVFormatError(f"line {lineno}: non-finite value {c!r}")
            columns[j].append(v)
    if len(columns[0]) < 2:
        raise CSVFormatError(f"need at least 2 data rows (found {len(columns[0])})")
    return [ReturnSeries(nm, col, tuple(dates) if has_date else None) for nm, col in zip(names, columns)]


def read_returns_csv(path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_returns_csv(fh.read())


# Normal fit of three financial-sector index return series; sample size not recorded.
SEGMENT_MODEL = FittedModel(
    names=("banks", "insurance", "financial-credit-service"),
    mean=1e-3 * np.array([-1.140677, 5.896240, 2.107343]),
    cov=1e-4 * np.array([
        [19.088935, 12.503116, -3.720492],
        [12.503116, 20.268816, -3.162601],
        [-3.720492, -3.162601, 8.851913],
    ]),
    n=0,
)

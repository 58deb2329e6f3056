"""Granulometric curves, log-histograms and uniform-mixture pseudo-sampling."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateHistogram,
    DuplicateDiameter,
    EmptyInput,
    EmptySample,
    IncompleteCurve,
    MalformedRow,
    NonMonotone,
)

CURVE_HEADER = ("diameter_mm", "cumulative_percent")
HISTOGRAM_HEADER = ("edge_lo", "edge_hi", "midpoint", "mass")
DEFAULT_REF_DIAMETER_MM = 0.001


@dataclass(frozen=True)
class GranulometricCurve:
    """Sieve results sorted by increasing diameter.

    ``cumulative[i]`` is the fraction (not percent) of material finer than
    ``diameters[i]``.
    """

    diameters: np.ndarray
    cumulative: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diameters, dtype=float)
        c = np.asarray(self.cumulative, dtype=float)
        object.__setattr__(self, "diameters", d)
        object.__setattr__(self, "cumulative", c)
        if d.ndim != 1 or d.shape != c.shape:
            raise MalformedRow("diameters and cumulative values must be 1-D and of equal length")
        if d.size < 2:
            raise EmptyInput(f"a granulometric curve needs at least 2 sieves, got {d.size}")
        if not np.all(np.isfinite(d)) or not np.all(np.isfinite(c)):
            raise MalformedRow("non-finite values in curve")
        if np.any(d <= 0):
            raise MalformedRow("diameters must be positive")
        steps = np.diff(d)
        if np.any(steps == 0):
            raise DuplicateDiameter("duplicate sieve diameter")
        if np.any(steps < 0):
            raise MalformedRow("diameters must be sorted increasingly")
        if np.any(np.diff(c) < 0):
            raise NonMonotone("cumulative fraction decreases with diameter")
        if c[0] < 0 or c[-1] > 1 + 1e-9:
            raise MalformedRow("cumulative fractions must lie in [0, 1]")
        if abs(c[-1] - 1.0) > 1e-9:
            raise IncompleteCurve(f"largest sieve passes {100 * c[-1]:.4g} %, expected 100 %")

    @property
    def D(self):
        return self.diameters.size

    @classmethod
    def from_pairs(cls, pairs, percent=True):
        """Build from (diameter, cumulative) pairs in any diameter order."""
        pairs = list(pairs)
        if not pairs:
            raise EmptyInput("no rows")
        d = np.array([float(p[0]) for p in pairs])
        c = np.array([float(p[1]) for p in pairs])
        if percent:
            c = c / 100.0
        order = np.argsort(d, kind="stable")
        d, c = d[order], c[order]
        if np.any(np.diff(d) == 0):
            dup = d[:-1][np.diff(d) == 0][0]
            raise DuplicateDiameter(f"diameter {dup} appears more than once")
        return cls(d, c)


def parse_granulometric_table(text):
    """Parse the curve CSV (``diameter_mm,cumulative_percent``).

    Rows may come in any diameter order (the usual sieve report lists the
    coarsest sieve first). The header row is optional.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if rows and tuple(f.strip().lower() for f in rows[0]) == CURVE_HEADER:
        rows = rows[1:]
    if not rows:
        raise EmptyInput("curve table has no data rows")
    pairs = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise MalformedRow(f"row {lineno}: expected 2 fields, got {len(row)}")
        try:
            d, c = float(row[0]), float(row[1])
        except ValueError:
            raise MalformedRow(f"row {lineno}: non-numeric field in {row!r}") from None
        if not (math.isfinite(d) and math.isfinite(c)):
            raise MalformedRow(f"row {lineno}: non-finite value")
        if not 0.0 <= c <= 100.0:
            raise MalformedRow(f"row {lineno}: percentage {c} outside [0, 100]")
        pairs.append((d, c))
    return GranulometricCurve.from_pairs(pairs, percent=True)


def read_curve(path):
    with open(path, encoding="utf-8") as fh:
        return parse_granulometric_table(fh.read())


@dataclass(frozen=True)
class LogHistogram:
    edges: np.ndarray
    masses: np.ndarray
    log_base: float = math.e
    ref_diameter: float = DEFAULT_REF_DIAMETER_MM

    @property
    def midpoints(self):
        return (self.edges[1:] + self.edges[:-1]) / 2

    @property
    def widths(self):
        return np.diff(self.edges)

    def density(self):
        """Mass per unit log-diameter in each bin, normalized to integrate to 1."""
        return self.masses / self.masses.sum() / self.widths

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HISTOGRAM_HEADER)
        for lo, hi, m, p in zip(self.edges[:-1], self.edges[1:], self.midpoints, self.masses):
            w.writerow([repr(float(lo)), repr(float(hi)), repr(float(m)), repr(float(p))])
        return buf.getvalue()


def log_transform(diameters, log_base=math.e, ref_diameter=DEFAULT_REF_DIAMETER_MM):
    return np.log(np.asarray(diameters, dtype=float) / ref_diameter) / math.log(log_base)


def inverse_log_transform(values, log_base=math.e, ref_diameter=DEFAULT_REF_DIAMETER_MM):
    return ref_diameter * np.power(float(log_base), values)


def to_log_histogram(curve, log_base=math.e, ref_diameter=DEFAULT_REF_DIAMETER_MM):
    if not log_base > 1:
        raise ValueError(f"log base must exceed 1, got {log_base}")
    if not ref_diameter > 0:
        raise ValueError(f"reference diameter must be positive, got {ref_diameter}")
    edges = log_transform(curve.diameters, log_base, ref_diameter)
    masses = np.diff(curve.cumulative)
    return LogHistogram(edges, masses, float(log_base), float(ref_diameter))


@dataclass(frozen=True)
class DiameterSample:
    """Pseudo-random log-diameters drawn bin by bin from a log-histogram."""

    values: np.ndarray
    counts: np.ndarray
    k: int
    log_base: float = math.e
    ref_diameter: float = DEFAULT_REF_DIAMETER_MM

    @property
    def M(self):
        return int(self.values.size)

    def diameters_mm(self):
        return inverse_log_transform(self.values, self.log_base, self.ref_diameter)


def bin_counts(hist, k):
    """``N_i = [k p_i]`` with round-half-to-even."""
    return np.rint(k * hist.masses).astype(np.int64)


def sample_pseudo_diameters(hist, k, rng):
    """Draw ``round(k p_i)`` uniform log-diameters inside every bin, bin by bin."""
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not np.any(hist.masses > 0):
        raise DegenerateHistogram("every bin of the histogram has zero mass")
    counts = bin_counts(hist, k)
    parts = []
    for lo, hi, n in zip(hist.edges[:-1], hist.edges[1:], counts):
        if n:
            parts.append(lo + (hi - lo) * rng.random(n))
    values = np.concatenate(parts) if parts else np.empty(0)
    return DiameterSample(values, counts, k, hist.log_base, hist.ref_diameter)


def empirical_cdf_distance(sample, curve, log_base=None, ref_diameter=None):
    """Largest gap, over the sieve knots, between the sample's ECDF and the curve.

    The curve is renormalized to ``(c_i - c_1) / (c_D - c_1)`` so that it runs
    from 0 to 1 like any distribution function.
    """
    values = sample.values if isinstance(sample, DiameterSample) else np.asarray(sample, dtype=float)
    if values.size == 0:
        raise EmptySample("empty pseudo-sample")
    if log_base is None:
        log_base = getattr(sample, "log_base", math.e)
    if ref_diameter is None:
        ref_diameter = getattr(sample, "ref_diameter", DEFAULT_REF_DIAMETER_MM)
    knots = log_transform(curve.diameters, log_base, ref_diameter)
    c = curve.cumulative
    target = (c - c[0]) / (c[-1] - c[0])
    ecdf = np.searchsorted(np.sort(values), knots, side="right") / values.size
    return float(np.max(np.abs(ecdf - target)))

"""Sampled signals: data model, synthetic generators, CSV serialization."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_float_array, check_positive
from .errors import FormatError, InvalidArgumentError, SignalIOError

CSV_HEADER_PREFIX = "# qpfactor-signal"
CODOMAIN_KINDS = ("euclidean", "circle")


@dataclass(frozen=True)
class SampledSignal:
    """A signal sampled on a strictly increasing 1-D grid.

    domain: shape (n,), strictly increasing sample locations.
    values: shape (n, m), codomain vectors per sample.
    codomain_kind: "euclidean", or "circle" for values stored in [0, 1).
    """

    domain: np.ndarray
    values: np.ndarray
    codomain_kind: str = "euclidean"

    def __post_init__(self):
        domain = as_float_array(self.domain, "domain", ndim=1)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        values = as_float_array(values, "values", ndim=2)
        if domain.shape[0] < 1:
            raise InvalidArgumentError("signal needs at least one sample")
        if values.shape[0] != domain.shape[0]:
            raise InvalidArgumentError(
                f"domain has {domain.shape[0]} samples but values has {values.shape[0]}"
            )
        if domain.shape[0] > 1 and not np.all(np.diff(domain) > 0):
            raise InvalidArgumentError("domain must be strictly increasing")
        if self.codomain_kind not in CODOMAIN_KINDS:
            raise InvalidArgumentError(
                f"codomain_kind must be one of {CODOMAIN_KINDS}, got {self.codomain_kind!r}"
            )
        if self.codomain_kind == "circle":
            if np.any(values < 0) or np.any(values >= 1):
                raise InvalidArgumentError("circle-kind values must lie in [0, 1)")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self):
        return self.domain.shape[0]

    @property
    def codomain_dim(self):
        return self.values.shape[1]

    @property
    def span(self):
        return float(self.domain[-1] - self.domain[0])

    @property
    def step(self):
        """Grid step for uniform grids; raises for non-uniform ones."""
        if self.n_samples < 2:
            raise InvalidArgumentError("step undefined for a single sample")
        diffs = np.diff(self.domain)
        h = float(np.mean(diffs))
        if np.max(np.abs(diffs - h)) > 1e-9 * max(1.0, abs(h)):
            raise InvalidArgumentError("domain grid is not uniform")
        return h


def codomain_representation(signal):
    """Values in the metric used downstream.

    Euclidean signals pass through; circle-kind values v become
    (cos 2pi v, sin 2pi v) pairs so Euclidean distance respects the wrap.
    """
    if signal.codomain_kind == "euclidean":
        return signal.values
    ang = 2.0 * np.pi * signal.values
    rep = np.empty((signal.n_samples, 2 * signal.codomain_dim))
    rep[:, 0::2] = np.cos(ang)
    rep[:, 1::2] = np.sin(ang)
    return rep


def _uniform_grid(n, a, b):
    n = int(n)
    if n < 2:
        raise InvalidArgumentError(f"need at least 2 samples, got {n}")
    if not a < b:
        raise InvalidArgumentError(f"domain start {a!r} must be below end {b!r}")
    # half-open grid [a, b): keeps integer periods an exact number of steps
    return a + (b - a) * np.arange(n) / n


def modulated_waveform(theta):
    """Amplitude-modulated unit-period waveform: full swing on the first
    half-cycle, half swing at doubled frequency on the second."""
    theta = np.asarray(theta, dtype=np.float64) % 1.0
    return np.where(
        theta < 0.5,
        np.sin(4.0 * np.pi * theta),
        0.5 * np.sin(8.0 * np.pi * theta),
    )


def gen_modulated_periodic(n, a, b):
    """Period-2 signal whose two unit halves differ in amplitude and rate."""
    x = _uniform_grid(n, a, b)
    return SampledSignal(x, modulated_waveform(x / 2.0))


def gen_chirp_recip(n, t0, t1):
    """sin(1/t) on [t0, t1): oscillation slows as t grows."""
    check_positive(t0, "t0")
    if not t0 < t1:
        raise InvalidArgumentError(f"t0 {t0!r} must be below t1 {t1!r}")
    t = _uniform_grid(n, t0, t1)
    return SampledSignal(t, np.sin(1.0 / t))


def gen_arctan_circle(n, a, b):
    """Circle-valued arctan(x) mod 1: creeps around the circle a few times
    in total, slowing as |x| grows; preimages of a value stay finite."""
    x = _uniform_grid(n, a, b)
    return SampledSignal(x, np.arctan(x) % 1.0, codomain_kind="circle")


def gen_constant(n, a, b, value=0.0):
    """Constant signal, the degenerate single-phase case."""
    x = _uniform_grid(n, a, b)
    vals = np.tile(np.atleast_1d(np.asarray(value, dtype=np.float64)), (len(x), 1))
    return SampledSignal(x, vals)


def save_signal(signal, path):
    """Write a signal as CSV with a self-describing header.

    Rows are `x,v1,...,vm` at 17 significant digits, which round-trips
    float64 exactly.
    """
    m = signal.codomain_dim
    rows = np.column_stack([signal.domain, signal.values])
    try:
        with open(path, "w") as fh:
            fh.write(f"{CSV_HEADER_PREFIX} m={m} kind={signal.codomain_kind}\n")
            for row in rows:
                fh.write(",".join("%.17g" % v for v in row) + "\n")
    except OSError as exc:
        raise SignalIOError(f"cannot write signal to {path}: {exc}") from exc


def _parse_header(line):
    parts = line[len(CSV_HEADER_PREFIX):].split()
    fields = {}
    for part in parts:
        if "=" not in part:
            raise FormatError(f"malformed header field {part!r}")
        key, _, val = part.partition("=")
        fields[key] = val
    try:
        m = int(fields["m"])
        kind = fields["kind"]
    except (KeyError, ValueError) as exc:
        raise FormatError(f"signal header missing m/kind: {line!r}") from exc
    if m < 1 or kind not in CODOMAIN_KINDS:
        raise FormatError(f"invalid signal header: {line!r}")
    return m, kind


def load_signal(path):
    """Read a signal CSV written by save_signal."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SignalIOError(f"cannot read signal from {path}: {exc}") from exc
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty signal file")
    if not lines[0].startswith(CSV_HEADER_PREFIX):
        raise FormatError(f"{path}: missing '{CSV_HEADER_PREFIX}' header")
    m, kind = _parse_header(lines[0])
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != m + 1:
            raise FormatError(
                f"{path}:{lineno}: expected {m + 1} columns, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric field") from exc
    if not rows:
        raise FormatError(f"{path}: no data rows")
    data = np.asarray(rows)
    try:
        return SampledSignal(data[:, 0], data[:, 1:], codomain_kind=kind)
    except InvalidArgumentError as exc:
        raise FormatError(f"{path}: {exc}") from exc

"""Delay and derivative embeddings, landmark selection, offset heuristics."""

from dataclasses import dataclass

import numpy as np

from ._validation import as_float_array, check_index
from .errors import EmptyEmbeddingError, InvalidArgumentError
from .signal import codomain_representation

REL_GRID_TOL = 1e-9


@dataclass(frozen=True)
class OffsetSet:
    """Positive, strictly increasing delay offsets in domain units."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(float(v) for v in self.offsets)
        if len(offs) < 1:
            raise InvalidArgumentError("need at least one offset")
        if any(v <= 0 for v in offs):
            raise InvalidArgumentError(f"offsets must be positive, got {offs}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise InvalidArgumentError(f"offsets must be strictly increasing, got {offs}")
        object.__setattr__(self, "offsets", offs)

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)


@dataclass(frozen=True)
class PointCloud:
    """Points in R^d with provenance back to the originating samples."""

    points: np.ndarray
    source_index: np.ndarray

    def __post_init__(self):
        points = as_float_array(self.points, "points", ndim=2)
        source = np.asarray(self.source_index, dtype=np.intp)
        if source.ndim != 1 or source.shape[0] != points.shape[0]:
            raise InvalidArgumentError("source_index must align with points")
        if source.shape[0] > 1 and not np.all(np.diff(source) > 0):
            raise InvalidArgumentError("source_index must be strictly increasing")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "source_index", source)

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def takens_dimension(n):
    """Delay count sufficient for a generic immersion of an n-dim domain."""
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"domain dimension must be >= 1, got {n}")
    return 2 * n


def offset_steps(signal, offsets):
    """Each offset as an exact integer number of grid steps."""
    h = signal.step
    steps = []
    for v in offsets:
        k = int(round(v / h))
        if k < 1 or abs(v - k * h) > REL_GRID_TOL * max(1.0, abs(v)):
            raise InvalidArgumentError(
                f"offset {v!r} is not an integer multiple of the grid step {h!r}"
            )
        steps.append(k)
    return steps


def delay_embed(signal, offsets):
    """Delay-coordinate cloud: point i = (u(x_i), u(x_i+v_1), ..., u(x_i+v_k)).

    Circle-kind values are expanded to (cos, sin) pairs first, so distances
    in the cloud respect the circular metric of the codomain.
    """
    if not isinstance(offsets, OffsetSet):
        offsets = OffsetSet(tuple(offsets))
    rep = codomain_representation(signal)
    steps = offset_steps(signal, offsets)
    n = signal.n_samples
    n_base = n - steps[-1]
    if n_base < 1:
        raise EmptyEmbeddingError(
            f"largest offset {offsets.offsets[-1]!r} leaves no valid base sample"
        )
    cols = [rep[:n_base]]
    cols.extend(rep[k:k + n_base] for k in steps)
    return PointCloud(np.hstack(cols), np.arange(n_base))


def derivative_embed(signal, order):
    """Point i = (u_i, and central-difference derivatives up to `order`).

    Each derivative is an iterated symmetric difference, trimming one sample
    from each end per order; samples without a full stencil are dropped.
    """
    order = int(order)
    if order < 1:
        raise InvalidArgumentError(f"derivative order must be >= 1, got {order}")
    n = signal.n_samples
    if n < 2 * order + 1:
        raise InvalidArgumentError(
            f"need at least {2 * order + 1} samples for order {order}, got {n}"
        )
    h = signal.step
    rep = codomain_representation(signal)
    levels = [rep]
    for _ in range(order):
        prev = levels[-1]
        levels.append((prev[2:] - prev[:-2]) / (2.0 * h))
    cols = []
    for k, arr in enumerate(levels):
        trim = order - k
        cols.append(arr[trim:arr.shape[0] - trim] if trim else arr)
    return PointCloud(np.hstack(cols), np.arange(order, n - order))


def maxmin_landmarks(cloud, n_landmarks, seed_index=0):
    """Greedy farthest-point landmark indices, deterministic.

    Starts at seed_index; each next landmark maximizes the distance to the
    chosen set, ties going to the smallest index. Stops early once every
    remaining point is a near-duplicate of a chosen landmark, so the result
    may hold fewer than n_landmarks indices.
    """
    points = cloud.points if isinstance(cloud, PointCloud) else as_float_array(cloud, "cloud", ndim=2)
    n = points.shape[0]
    L = int(n_landmarks)
    if not 1 <= L <= n:
        raise InvalidArgumentError(f"landmark count must be in [1, {n}], got {n_landmarks}")
    seed = check_index(seed_index, "seed_index", n)
    chosen = [seed]
    dist = np.linalg.norm(points - points[seed], axis=1)
    # covering radius below which a new landmark is geometrically redundant
    dup_tol = 1e-9 * max(1.0, float(np.max(dist)))
    for _ in range(L - 1):
        nxt = int(np.argmax(dist))
        if dist[nxt] <= dup_tol:
            break
        chosen.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
    return np.asarray(chosen, dtype=np.intp)


def dominant_fft_period(signal):
    """Period of the strongest non-constant Fourier component.

    Power is summed over codomain coordinates (after mean removal), using the
    circle-aware representation for circle-kind signals.
    """
    rep = codomain_representation(signal)
    rep = rep - rep.mean(axis=0)
    power = np.sum(np.abs(np.fft.rfft(rep, axis=0)) ** 2, axis=1)
    if power.shape[0] < 2:
        raise InvalidArgumentError("too few samples for a spectral period")
    j = 1 + int(np.argmax(power[1:]))
    total = signal.n_samples * signal.step
    return total / j


def auto_offsets(signal):
    """Pick delay offsets {h, s*h, (s+1)*h} with s*h ~ dominant period / 4.

    For a sinusoidal component of period P the four delay rows then sit at
    phase lags {0, eps, 1/4, 1/4 + eps} of P, whose second moments cancel
    pairwise, so the embedded loop is nearly round and the downstream phase
    is not sheared. The window (s+1)*h is capped so at most a quarter of the
    samples is lost to the embedding. A spectrum peaking at the fundamental
    bin signals a trend rather than repetition; the window then shrinks to
    the minimal {h, 2h, 3h}.
    """
    h = signal.step
    n = signal.n_samples
    if n < 5:
        raise InvalidArgumentError(f"need at least 5 samples to embed, got {n}")
    period = dominant_fft_period(signal)
    total = n * h
    if period > 0.75 * total:  # dominant bin j <= 1: nothing repeats
        return OffsetSet((h, 2.0 * h, 3.0 * h))
    s = int(round(period / 4.0 / h))
    cap = max(2, (n - 1) // 4 - 1)
    s = min(max(2, s), cap)
    return OffsetSet((h, h * s, h * (s + 1)))

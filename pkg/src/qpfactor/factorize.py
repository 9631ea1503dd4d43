"""Quasiperiodic factorization u ~ U(phase): classification, phase building,
binned U models, residuals, and period/injectivity diagnostics."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import as_float_array, check_positive
from .circular import (
    PhaseAssignment,
    PhaseGauge,
    assign_phase,
    circular_distance,
    harmonic_smooth,
    lift_to_integers,
    winding,
)
from .embedding import OffsetSet, auto_offsets, delay_embed, maxmin_landmarks
from .errors import InvalidArgumentError, NotPeriodicError
from .persistence import compute_persistence, ranked_h1, rips_filtration
from .signal import SampledSignal, codomain_representation

PHASE_CLASSES = ("Point", "Interval", "Circle", "Unknown")
INTERVAL_NOTE = (
    "phase space is an interval of the real line, not a circle; "
    "the phase is a rescaled domain coordinate and does not wrap"
)


@dataclass(frozen=True)
class UModel:
    """Binned model of U on [0, 1): B bins, mean codomain value per bin,
    evaluated by circular linear interpolation between bin centers."""

    bins: np.ndarray  # (B, d)

    def __post_init__(self):
        bins = as_float_array(self.bins, "bins", ndim=2)
        if bins.shape[0] < 1:
            raise InvalidArgumentError("u_model needs at least one bin")
        object.__setattr__(self, "bins", bins)

    @property
    def n_bins(self):
        return self.bins.shape[0]

    def evaluate(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64)) % 1.0
        B = self.n_bins
        pos = theta * B - 0.5
        base = np.floor(pos)
        frac = (pos - base)[:, None]
        b0 = base.astype(int) % B
        b1 = (b0 + 1) % B
        return (1.0 - frac) * self.bins[b0] + frac * self.bins[b1]


def build_U(theta, values, n_bins):
    """Mean codomain value per circular phase bin.

    Empty bins are filled by circular linear interpolation between their
    nearest occupied neighbors.
    """
    theta = as_float_array(theta, "theta", ndim=1)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] != theta.shape[0]:
        raise InvalidArgumentError("theta and values must have equal length")
    B = int(n_bins)
    if B < 1:
        raise InvalidArgumentError(f"n_bins must be >= 1, got {n_bins}")
    if theta.shape[0] == 0:
        raise InvalidArgumentError("cannot bin an empty sample set")
    idx = np.minimum((theta % 1.0 * B).astype(int), B - 1)
    sums = np.zeros((B, values.shape[1]))
    np.add.at(sums, idx, values)
    counts = np.bincount(idx, minlength=B).astype(float)
    occupied = counts > 0
    bins = np.zeros_like(sums)
    bins[occupied] = sums[occupied] / counts[occupied, None]
    if not np.any(occupied):
        raise InvalidArgumentError("all bins empty")
    if not np.all(occupied):
        occ = np.nonzero(occupied)[0]
        for b in np.nonzero(~occupied)[0]:
            pos = np.searchsorted(occ, b)
            left = occ[pos - 1] if pos > 0 else occ[-1]
            right = occ[pos % len(occ)]
            dl = (b - left) % B
            dr = (right - b) % B
            if dl + dr == 0:
                bins[b] = bins[left]
            else:
                bins[b] = (bins[left] * dr + bins[right] * dl) / (dl + dr)
    return UModel(bins)


def residual(values, u_model, theta):
    """Pointwise misfit e_i = ||u_i - U(theta_i)||_2 as (rms, sup)."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    err = np.linalg.norm(values - u_model.evaluate(theta), axis=1)
    if err.size == 0:
        return 0.0, 0.0
    return float(np.sqrt(np.mean(err**2))), float(np.max(err))


def estimate_period(span, w):
    """T = span / |winding| for a phase that makes more than half a turn."""
    span = check_positive(span, "span")
    if abs(w) <= 0.5:
        raise NotPeriodicError(
            f"winding {w!r} stays within half a turn; no period is defined"
        )
    return span / abs(w)


@dataclass(frozen=True)
class InjectivityReport:
    passed: bool
    witnesses: tuple  # (i, j) sample index pairs, capped
    n_witnesses: int
    period: float
    tol_phase: float
    tol_domain: float


def injectivity_windows(theta, x, period, tol_phase=None, tol_domain=None,
                        max_witnesses=50):
    """Check phase injectivity on every sliding window [x_i, x_i + T).

    Flags pairs of samples inside a common window that sit apart in the
    domain (beyond tol_domain) yet carry circularly equal phases (within
    tol_phase). A universal phase of a T-periodic signal passes. Domain gaps
    within a relative epsilon of T count as the window boundary, where the
    phase of a T-periodic signal must repeat, rather than as collisions.
    """
    theta = as_float_array(theta, "theta", ndim=1)
    x = as_float_array(x, "x", ndim=1)
    if theta.shape[0] != x.shape[0]:
        raise InvalidArgumentError("theta and x must have equal length")
    period = check_positive(period, "period")
    if x.shape[0] < 2:
        raise InvalidArgumentError("need at least two samples")
    span = float(x[-1] - x[0])
    if period > span:
        raise InvalidArgumentError(
            f"period {period!r} exceeds the domain span {span!r}"
        )
    if tol_phase is None:
        tol_phase = 1.0 / 256.0
    if tol_domain is None:
        tol_domain = 3.0 * float(np.median(np.diff(x)))
    tol_phase = check_positive(tol_phase, "tol_phase")
    tol_domain = check_positive(tol_domain, "tol_domain")

    witnesses = []
    n_witnesses = 0
    n = x.shape[0]
    # absorbs float jitter in grids where nominally-equal gaps differ by ulps
    boundary_tol = 1e-9 * (period + float(np.max(np.abs(x))))
    for i in range(n - 1):
        hi = int(np.searchsorted(x, x[i] + period - boundary_tol, side="left"))
        if hi <= i + 1:
            continue
        js = np.arange(i + 1, hi)
        far = (x[js] - x[i]) > tol_domain
        close = circular_distance(theta[js], theta[i]) < tol_phase
        bad = js[far & close]
        n_witnesses += int(bad.shape[0])
        for j in bad[: max(0, max_witnesses - len(witnesses))]:
            witnesses.append((int(i), int(j)))
    return InjectivityReport(
        passed=n_witnesses == 0,
        witnesses=tuple(witnesses),
        n_witnesses=n_witnesses,
        period=period,
        tol_phase=tol_phase,
        tol_domain=tol_domain,
    )


def value_spread(rep):
    """Max pairwise distance between codomain points (exact when feasible)."""
    n = rep.shape[0]
    if n < 2:
        return 0.0
    if n <= 3000:
        return float(np.max(pdist(rep)))
    # bracket via the bounding box: spread <= diag <= sqrt(d) * spread
    return float(np.linalg.norm(rep.max(axis=0) - rep.min(axis=0)))


def classify(signal, barcode, persistence_ratio=3.0, const_tol_scale=1e-9):
    """Phase-space class: Point, Circle, Interval, or Unknown.

    Point: codomain values are constant up to const_tol_scale. Circle: the
    dominant H1 bar persists beyond `persistence_ratio` (infinite death
    counts). Interval: no such bar but the cloud is connected at the working
    scale. Unknown otherwise.
    """
    rep = codomain_representation(signal)
    magnitude = float(np.max(np.linalg.norm(rep, axis=1))) if rep.size else 0.0
    if value_spread(rep) < const_tol_scale * (1.0 + magnitude):
        return "Point"
    if barcode is None:
        return "Unknown"
    ranked = ranked_h1(barcode)
    if ranked and ranked[0].ratio >= persistence_ratio:
        return "Circle"
    if barcode.n_components == 1:
        return "Interval"
    return "Unknown"


@dataclass(frozen=True)
class Factorization:
    """A computed factorization u ~ U(phase) plus its diagnostics."""

    phase_class: str
    theta: np.ndarray
    sample_index: np.ndarray
    domain: np.ndarray
    codomain_kind: str
    u_model: UModel | None
    residual_rms: float
    residual_sup: float
    winding: float
    period_estimate: float | None
    phase: PhaseAssignment | None
    notes: tuple
    diagnostics: dict
    config: dict

    def to_dict(self):
        gauge = None
        if self.phase is not None:
            gauge = {
                "anchor_vertex": self.phase.gauge.anchor_vertex,
                "sign": self.phase.gauge.sign,
            }
        return {
            "phase_class": self.phase_class,
            "winding": self.winding,
            "period_estimate": self.period_estimate,
            "residual_rms": self.residual_rms,
            "residual_sup": self.residual_sup,
            "n_samples_retained": int(self.sample_index.shape[0]),
            "domain_start": float(self.domain[0]),
            "domain_end": float(self.domain[-1]),
            "codomain_kind": self.codomain_kind,
            "gauge": gauge,
            "notes": list(self.notes),
            "diagnostics": self.diagnostics,
            "bins": None if self.u_model is None else self.u_model.bins.tolist(),
            "config_echo": self.config,
        }


def _bar_summary(bar):
    if bar is None:
        return None
    return {
        "birth": bar.birth,
        "death": None if math.isinf(bar.death) else bar.death,
        "infinite": math.isinf(bar.death),
        "ratio": None if math.isinf(bar.ratio) else bar.ratio,
        "scale": bar.scale,
    }


def _smooth_components(z, n_vertices):
    """Least-squares potentials per connected component of the edge graph."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    edges = sorted(z)
    if edges:
        rows = [e[0] for e in edges] + [e[1] for e in edges]
        cols = [e[1] for e in edges] + [e[0] for e in edges]
        graph = coo_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(n_vertices, n_vertices)
        )
        n_comp, labels = connected_components(graph, directed=False)
    else:
        n_comp, labels = n_vertices, np.arange(n_vertices)
    f = np.zeros(n_vertices)
    iterations = 0
    normal_residual = 0.0
    for comp in range(n_comp):
        members = np.nonzero(labels == comp)[0]
        if members.shape[0] < 2:
            continue
        local = {int(v): i for i, v in enumerate(members)}
        z_local = {
            (local[a], local[b]): val
            for (a, b), val in z.items()
            if a in local and b in local
        }
        res = harmonic_smooth(z_local, members.shape[0])
        f[members] = res.f
        iterations += res.iterations
        normal_residual = max(normal_residual, res.normal_residual)
    return f, n_comp, iterations, normal_residual


def _resolve_offsets(signal, offsets):
    if offsets is None:
        return auto_offsets(signal)
    if isinstance(offsets, OffsetSet):
        return offsets
    return OffsetSet(tuple(offsets))


def factorize_signal(
    signal,
    offsets=None,
    n_landmarks=200,
    rmax=None,
    prime=47,
    n_bins=64,
    persistence_ratio=3.0,
    const_tol_scale=1e-9,
    cocycle_index=0,
):
    """End-to-end factorization of a sampled signal.

    Embeds the signal (delay coordinates), selects landmarks, runs Rips
    persistence, classifies the phase space, and for circular classes lifts
    and smooths the dominant cocycle into a per-sample phase. Returns a
    Factorization with the binned U model and residuals.
    """
    if not isinstance(signal, SampledSignal):
        raise InvalidArgumentError("factorize_signal expects a SampledSignal")
    rep = codomain_representation(signal)
    n = signal.n_samples
    config = {
        "n_landmarks": int(n_landmarks),
        "prime": int(prime),
        "n_bins": int(n_bins),
        "persistence_ratio": float(persistence_ratio),
        "const_tol_scale": float(const_tol_scale),
        "cocycle_index": int(cocycle_index),
    }

    magnitude = float(np.max(np.linalg.norm(rep, axis=1)))
    epsilon = const_tol_scale * (1.0 + magnitude)
    if value_spread(rep) < epsilon:
        theta = np.zeros(n)
        u_model = build_U(theta, rep, 1)
        rms, sup = residual(rep, u_model, theta)
        config.update({"offsets": None, "rmax": None})
        return Factorization(
            phase_class="Point",
            theta=theta,
            sample_index=np.arange(n),
            domain=signal.domain,
            codomain_kind=signal.codomain_kind,
            u_model=u_model,
            residual_rms=rms,
            residual_sup=sup,
            winding=0.0,
            period_estimate=None,
            phase=None,
            notes=("codomain values are constant; single-point phase space",),
            diagnostics={"value_spread": value_spread(rep), "epsilon": epsilon},
            config=config,
        )

    offsets = _resolve_offsets(signal, offsets)
    config["offsets"] = list(offsets.offsets)
    cloud = delay_embed(signal, offsets)
    landmarks = maxmin_landmarks(cloud, min(int(n_landmarks), cloud.n_points))
    L = int(landmarks.shape[0])  # may be fewer after duplicate trimming
    lm_points = cloud.points[landmarks]
    D = squareform(pdist(lm_points)) if L > 1 else np.zeros((1, 1))
    if rmax is None:
        rmax = 0.5 * float(np.max(D)) if L > 1 else 0.0
    rmax = float(rmax)
    config["rmax"] = rmax
    filtration = rips_filtration(D, rmax, maxdim=2)
    barcode = compute_persistence(filtration, prime)
    ranked = ranked_h1(barcode)
    dominant = ranked[0] if ranked else None
    phase_class = classify(
        signal, barcode,
        persistence_ratio=persistence_ratio,
        const_tol_scale=const_tol_scale,
    )
    diagnostics = {
        "n_embedded": cloud.n_points,
        "n_landmarks": L,
        "embedding_dim": cloud.dim,
        "rmax": rmax,
        "n_components_at_rmax": barcode.n_components,
        "n_h1_bars": len(ranked),
        "dominant_bar": _bar_summary(dominant),
    }

    if phase_class == "Circle":
        if not 0 <= int(cocycle_index) < len(ranked):
            raise InvalidArgumentError(
                f"cocycle_index {cocycle_index} out of range; "
                f"{len(ranked)} H1 bars available"
            )
        bar = ranked[int(cocycle_index)]
        scale = bar.scale
        triangles = [vs for vs, _ in filtration.triangles(scale)]
        lifted = lift_to_integers(bar.representative, barcode.prime, triangles)
        z = {vs: float(lifted.get(vs, 0)) for vs, _ in filtration.edges(scale)}
        f, n_comp, iterations, normal_residual = _smooth_components(z, L)
        phase = assign_phase(f, cloud.points, lm_points, scale, anchor_vertex=0)
        w = winding(phase.theta) if phase.theta.shape[0] >= 2 else 0.0
        if w < 0:
            phase = phase.flipped()
            w = -w
        theta = phase.theta
        retained = cloud.source_index
        x_retained = signal.domain[retained]
        u_model = build_U(theta, rep[retained], n_bins)
        rms, sup = residual(rep[retained], u_model, theta)
        notes = []
        period = None
        if abs(w) > 0.5:
            period = estimate_period(float(x_retained[-1] - x_retained[0]), w)
        else:
            notes.append("winding stays within half a turn; no period estimated")
        diagnostics.update({
            "scale": scale,
            "n_components_at_scale": n_comp,
            "solver_iterations": iterations,
            "normal_residual": normal_residual,
        })
        return Factorization(
            phase_class="Circle",
            theta=theta,
            sample_index=retained,
            domain=x_retained,
            codomain_kind=signal.codomain_kind,
            u_model=u_model,
            residual_rms=rms,
            residual_sup=sup,
            winding=w,
            period_estimate=period,
            phase=phase,
            notes=tuple(notes),
            diagnostics=diagnostics,
            config=config,
        )

    if phase_class == "Interval":
        span = signal.span
        tail = float(signal.domain[-1] - signal.domain[-2]) if n > 1 else 1.0
        theta = (signal.domain - signal.domain[0]) / (span + tail)
        u_model = build_U(theta, rep, n_bins)
        rms, sup = residual(rep, u_model, theta)
        w = winding(theta) if n >= 2 else 0.0
        return Factorization(
            phase_class="Interval",
            theta=theta,
            sample_index=np.arange(n),
            domain=signal.domain,
            codomain_kind=signal.codomain_kind,
            u_model=u_model,
            residual_rms=rms,
            residual_sup=sup,
            winding=w,
            period_estimate=None,
            phase=None,
            notes=(INTERVAL_NOTE,),
            diagnostics=diagnostics,
            config=config,
        )

    theta = np.zeros(n)
    mean = rep.mean(axis=0)
    err = np.linalg.norm(rep - mean, axis=1)
    return Factorization(
        phase_class="Unknown",
        theta=theta,
        sample_index=np.arange(n),
        domain=signal.domain,
        codomain_kind=signal.codomain_kind,
        u_model=None,
        residual_rms=float(np.sqrt(np.mean(err**2))),
        residual_sup=float(np.max(err)),
        winding=0.0,
        period_estimate=None,
        phase=None,
        notes=(
            "no dominant 1-dimensional class and the embedded cloud is "
            "disconnected at the working scale; residuals are measured "
            "against the global mean",
        ),
        diagnostics=diagnostics,
        config=config,
    )


def as_sampled_signal(X):
    """Accept a SampledSignal, an (x, values) pair, or an array whose first
    column is the domain."""
    if isinstance(X, SampledSignal):
        return X
    if isinstance(X, tuple) and len(X) == 2:
        return SampledSignal(X[0], X[1])
    arr = as_float_array(X, "X", ndim=2)
    if arr.shape[1] < 2:
        raise InvalidArgumentError(
            "array input needs a domain column plus at least one value column"
        )
    return SampledSignal(arr[:, 0], arr[:, 1:])


class QuasiperiodicFactorizer(BaseEstimator):
    """Estimator wrapper around factorize_signal.

    fit(X) runs the pipeline on a SampledSignal (or an array whose first
    column is the domain); transform() returns the per-sample phases of the
    fitted signal and predict(theta) evaluates the fitted U model.
    """

    def __init__(self, offsets=None, n_landmarks=200, rmax=None, prime=47,
                 n_bins=64, persistence_ratio=3.0, const_tol_scale=1e-9,
                 cocycle_index=0):
        self.offsets = offsets
        self.n_landmarks = n_landmarks
        self.rmax = rmax
        self.prime = prime
        self.n_bins = n_bins
        self.persistence_ratio = persistence_ratio
        self.const_tol_scale = const_tol_scale
        self.cocycle_index = cocycle_index

    def fit(self, X, y=None):
        signal = as_sampled_signal(X)
        self.factorization_ = factorize_signal(
            signal,
            offsets=self.offsets,
            n_landmarks=self.n_landmarks,
            rmax=self.rmax,
            prime=self.prime,
            n_bins=self.n_bins,
            persistence_ratio=self.persistence_ratio,
            const_tol_scale=self.const_tol_scale,
            cocycle_index=self.cocycle_index,
        )
        self.signal_ = signal
        self.phase_class_ = self.factorization_.phase_class
        self.theta_ = self.factorization_.theta
        self.winding_ = self.factorization_.winding
        self.period_ = self.factorization_.period_estimate
        self.u_model_ = self.factorization_.u_model
        return self

    def _check_fitted(self):
        if not hasattr(self, "factorization_"):
            raise InvalidArgumentError("estimator is not fitted; call fit first")

    def transform(self, X=None):
        self._check_fitted()
        return self.theta_[:, None]

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform()

    def predict(self, theta):
        """Evaluate the fitted U model at circle coordinates theta."""
        self._check_fitted()
        if self.u_model_ is None:
            raise InvalidArgumentError(
                f"phase class {self.phase_class_!r} has no U model"
            )
        return self.u_model_.evaluate(np.asarray(theta, dtype=np.float64))


class DelayEmbedding(BaseEstimator, TransformerMixin):
    """Transformer exposing the delay-coordinate embedding."""

    def __init__(self, offsets=None):
        self.offsets = offsets

    def fit(self, X, y=None):
        signal = as_sampled_signal(X)
        self.offsets_ = _resolve_offsets(signal, self.offsets)
        self.signal_ = signal
        return self

    def transform(self, X=None):
        if not hasattr(self, "offsets_"):
            raise InvalidArgumentError("transformer is not fitted; call fit first")
        signal = self.signal_ if X is None else as_sampled_signal(X)
        cloud = delay_embed(signal, self.offsets_)
        self.source_index_ = cloud.source_index
        return cloud.points

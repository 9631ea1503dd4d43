"""Circle-valued coordinates from 1-cocycles: lifting, smoothing, assignment."""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg

from ._validation import as_float_array, check_index
from .errors import CoverageError, InvalidArgumentError, LiftFailureError

CG_RTOL = 1e-10
NORMAL_RESIDUAL_TOL = 1e-8


def wrap_unit(x):
    """Wrap to the half-open interval (-1/2, 1/2]."""
    x = np.asarray(x, dtype=np.float64)
    out = x - np.ceil(x - 0.5)
    return float(out) if out.ndim == 0 else out


def circular_distance(a, b):
    """Distance on R/Z: |wrap(a - b)| in [0, 1/2]."""
    return np.abs(wrap_unit(np.asarray(a, dtype=np.float64) - b))


def center_residue(v, p):
    """Representative of v mod p in (-p/2, p/2) (p odd; p=2 keeps {0, 1})."""
    v = int(v) % p
    return v - p if v > p // 2 else v


def lift_to_integers(cocycle, p, triangles):
    """Centered integer lift of a mod-p cocycle, verified on `triangles`.

    triangles is an iterable of sorted vertex triples present at the working
    scale. If the lift stops being a cocycle over the integers, the prime was
    too small for this class and lift-failure is raised.
    """
    lifted = {}
    for (a, b), v in cocycle.items():
        val = center_residue(v, p)
        if val:
            lifted[(a, b)] = val
    for (x, y, z) in triangles:
        total = (
            lifted.get((y, z), 0)
            - lifted.get((x, z), 0)
            + lifted.get((x, y), 0)
        )
        if total != 0:
            raise LiftFailureError(
                f"integer lift violates the cocycle condition on triangle "
                f"({x}, {y}, {z}); the coefficient prime {p} is too small "
                f"or the bar is unstable"
            )
    return lifted


@dataclass(frozen=True)
class SmoothResult:
    f: np.ndarray            # vertex potentials, anchor at 0
    w: dict                  # edge residual (f_b - f_a) - z_ab per edge (a, b)
    iterations: int
    normal_residual: float   # max-norm of the normal-equation gradient


def harmonic_smooth(z, n_vertices):
    """Least-squares potential f for an integer edge cochain z.

    Minimizes sum over edges (a, b) of (z_ab - (f_b - f_a))^2 via conjugate
    gradient on the graph Laplacian normal equations, anchored so the
    lowest-index vertex gets f = 0. Requires the edge graph to connect all
    n_vertices.
    """
    n = int(n_vertices)
    if n < 1:
        raise InvalidArgumentError("need at least one vertex")
    edges = sorted(z)
    for (a, b) in edges:
        check_index(a, "edge endpoint", n)
        check_index(b, "edge endpoint", n)
        if a >= b:
            raise InvalidArgumentError(f"edge ({a}, {b}) must have a < b")
    if n == 1:
        return SmoothResult(np.zeros(1), {}, 0, 0.0)

    rows = np.array([e[0] for e in edges] + [e[1] for e in edges])
    cols = np.array([e[1] for e in edges] + [e[0] for e in edges])
    graph = coo_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(n, n))
    n_comp, _ = connected_components(graph, directed=False)
    if n_comp != 1:
        raise InvalidArgumentError(
            f"edge graph has {n_comp} components; smooth each component separately"
        )

    zvals = np.array([float(z[e]) for e in edges])
    deg = np.zeros(n)
    lap_rows, lap_cols, lap_vals = [], [], []
    rhs = np.zeros(n)
    for (a, b), val in zip(edges, zvals):
        deg[a] += 1.0
        deg[b] += 1.0
        lap_rows.extend((a, b))
        lap_cols.extend((b, a))
        lap_vals.extend((-1.0, -1.0))
        rhs[a] -= val
        rhs[b] += val
    lap_rows.extend(range(n))
    lap_cols.extend(range(n))
    lap_vals.extend(deg)
    lap = coo_matrix((lap_vals, (lap_rows, lap_cols)), shape=(n, n)).tocsr()

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    f, _ = cg(lap, rhs, rtol=CG_RTOL, atol=0.0, maxiter=10 * n, callback=count)
    residual = float(np.max(np.abs(lap @ f - rhs)))
    if residual > NORMAL_RESIDUAL_TOL:
        # rank-deficient by the constant kernel only; a dense solve is an
        # exact fallback at the vertex counts this library works with
        f, *_ = np.linalg.lstsq(lap.toarray(), rhs, rcond=None)
        residual = float(np.max(np.abs(lap @ f - rhs)))
    f = f - f[0]
    w = {e: float(f[e[1]] - f[e[0]] - zv) for e, zv in zip(edges, zvals)}
    return SmoothResult(f, w, iterations, residual)


@dataclass(frozen=True)
class PhaseGauge:
    anchor_vertex: int
    sign: int = 1


@dataclass(frozen=True)
class PhaseAssignment:
    """Per-sample circle coordinates in [0, 1) at a filtration scale."""

    theta: np.ndarray
    scale: float
    gauge: PhaseGauge

    def __post_init__(self):
        theta = as_float_array(self.theta, "theta", ndim=1)
        if theta.size and (np.any(theta < 0) or np.any(theta >= 1)):
            raise InvalidArgumentError("theta values must lie in [0, 1)")
        object.__setattr__(self, "theta", theta)

    def flipped(self):
        """Opposite orientation: theta -> (-theta) mod 1."""
        theta = (-self.theta) % 1.0
        theta[theta >= 1.0] = 0.0  # (-eps) % 1 can round up to 1.0
        return PhaseAssignment(
            theta,
            self.scale,
            PhaseGauge(self.gauge.anchor_vertex, -self.gauge.sign),
        )


def nearest_landmark(points, landmark_points):
    """Index (into the landmark list) of the closest landmark per point,
    first index winning ties, plus the distances."""
    points = as_float_array(points, "points", ndim=2)
    landmark_points = as_float_array(landmark_points, "landmark_points", ndim=2)
    d2 = (
        np.sum(points * points, axis=1)[:, None]
        - 2.0 * points @ landmark_points.T
        + np.sum(landmark_points * landmark_points, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    idx = np.argmin(d2, axis=1)
    dist = np.sqrt(d2[np.arange(points.shape[0]), idx])
    return idx, dist


def assign_phase(f, points, landmark_points, scale, anchor_vertex=0):
    """theta_i = f(nearest landmark of point i) mod 1.

    Points farther than `scale` from every landmark are not covered by the
    complex the cocycle lives on, which is a coverage error.
    """
    f = as_float_array(f, "f", ndim=1)
    idx, dist = nearest_landmark(points, landmark_points)
    if dist.size and float(np.max(dist)) > scale:
        worst = int(np.argmax(dist))
        raise CoverageError(
            f"point {worst} is {dist[worst]:.6g} from the nearest landmark, "
            f"beyond the working scale {scale:.6g}"
        )
    theta = f[idx] % 1.0
    theta[theta >= 1.0] = 0.0  # guard the 0.9999... % 1.0 == 1.0 float edge
    return PhaseAssignment(theta, float(scale), PhaseGauge(int(anchor_vertex), 1))


def winding(theta):
    """Total signed turns of a circle-valued sequence: sum of wrapped steps."""
    theta = as_float_array(theta, "theta", ndim=1)
    if theta.shape[0] < 2:
        raise InvalidArgumentError("winding needs at least two samples")
    return float(np.sum(wrap_unit(np.diff(theta))))


def save_phase_csv(x, theta, path):
    with open(path, "w") as fh:
        fh.write("x,theta\n")
        for xi, ti in zip(x, theta):
            fh.write("%.17g,%.17g\n" % (xi, ti))


def load_phase_csv(path):
    from .errors import FormatError, SignalIOError

    try:
        with open(path) as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as exc:
        raise SignalIOError(f"cannot read phases from {path}: {exc}") from exc
    if not lines or lines[0].strip() != "x,theta":
        raise FormatError(f"{path}: missing 'x,theta' header")
    xs, thetas = [], []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 2:
            raise FormatError(f"{path}:{lineno}: expected 2 columns")
        try:
            xs.append(float(parts[0]))
            thetas.append(float(parts[1]))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric field") from exc
    if not xs:
        raise FormatError(f"{path}: no data rows")
    return np.asarray(xs), np.asarray(thetas)

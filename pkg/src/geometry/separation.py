import numpy as np
from scipy.optimize import linprog

from src.data.models import SeparatingFunctional, State, TestFamily, WeightedCloud
from src.geometry.states import barycenter, distance, select_concentrated

EXPOSURE_TOL = 1e-9


class NotExposedError(ValueError):
    """The target is (numerically) in the convex hull of the cloud, so nothing separates them."""


class DegenerateBoundError(ValueError):
    def __init__(self, message: str, value: float):
        super().__init__(message)
        self.value = value


def stack(values) -> np.ndarray:
    """Interleaved (Re, Im) coordinates of a vector of state values."""
    values = np.asarray(values, dtype=complex)
    return np.column_stack([values.real, values.imag]).ravel()


def _stacked_distances(origin: np.ndarray, points: np.ndarray, family: TestFamily) -> np.ndarray:
    delta = (points - origin).reshape(*points.shape[:-1], family.size, 2)
    return np.linalg.norm(delta, axis=-1) @ family.weights


def dual_norm(coefficients: np.ndarray, family: TestFamily) -> float:
    """Operator norm of L with respect to the weighted metric; the constant entry is skipped."""
    pairs = np.asarray(coefficients, dtype=float).reshape(family.size, 2)
    scaled = np.linalg.norm(pairs, axis=1) / family.weights
    return float(scaled[1:].max(initial=0.0))


def find_separating_functional(cloud: WeightedCloud, target: State) -> SeparatingFunctional:
    """Maximum-margin functional with L(target) = a = 0 < c < min L(point_i).

    The margin is maximised over the box |w_j| <= 2^-n / sqrt(2), which keeps
    the dual norm at most 1, so a margin below EXPOSURE_TOL means the target is
    within that distance of the hull. A second pass picks the smallest-l1 functional
    achieving the margin, and the result is rescaled to unit sup-norm.
    """
    family = cloud.family
    if family.family_id != target.family.family_id:
        raise ValueError("target and cloud must share a test family")

    origin = stack(target.values)
    diffs = np.array([stack(p.values) for p in cloud.points]) - origin
    m, k = diffs.shape

    box = np.repeat(family.weights, 2) / np.sqrt(2.0)
    box[:2] = 0.0
    w_bounds = [(-b, b) for b in box]

    # maximise t subject to diffs . w >= t
    result = linprog(
        c=np.r_[np.zeros(k), -1.0],
        A_ub=np.c_[-diffs, np.ones(m)],
        b_ub=np.zeros(m),
        bounds=w_bounds + [(None, None)],
        method="highs",
    )
    if result.status != 0:
        raise NotExposedError(f"margin LP failed: {result.message}")
    t_star = -result.fun
    if t_star <= EXPOSURE_TOL:
        raise NotExposedError(f"target is within {max(t_star, 0.0):.3e} of the cloud's convex hull")
    w = result.x[:k]

    # smallest l1 functional keeping the margin, variables (w, u) with |w| <= u
    sparse = linprog(
        c=np.r_[np.zeros(k), np.ones(k)],
        A_ub=np.block([[-diffs, np.zeros((m, k))], [np.eye(k), -np.eye(k)], [-np.eye(k), -np.eye(k)]]),
        b_ub=np.r_[-t_star * (1 - 1e-6) * np.ones(m), np.zeros(2 * k)],
        bounds=w_bounds + [(0, None)] * k,
        method="highs",
    )
    if sparse.status == 0:
        w = sparse.x[:k]

    margin = float((diffs @ w).min())
    if margin <= EXPOSURE_TOL:
        raise NotExposedError(f"target is within {max(margin, 0.0):.3e} of the cloud's convex hull")

    w = w / np.abs(w).max()
    # constant entry carries the shift that puts the target at level 0; tau(1) = 1 for every state
    w[0] = -float(w @ origin) / origin[0]
    a = float(w @ origin)
    levels = np.array([stack(p.values) for p in cloud.points]) @ w
    margin = float(levels.min() - a)
    return SeparatingFunctional(coefficients=tuple(float(x) for x in w), norm=dual_norm(w, family), a=a, c=a + margin / 2)


def slab_radius(L: SeparatingFunctional, cloud: WeightedCloud, target: State, c: float) -> float:
    """Largest distance from target to a vertex of {x in hull(target, points) : L(x) <= c}."""
    family = cloud.family
    w = np.asarray(L.coefficients)
    origin = stack(target.values)
    generators = np.vstack([origin, [stack(p.values) for p in cloud.points]])
    levels = generators @ w

    low = levels <= c
    lower, upper = generators[low], generators[~low]
    radius = float(_stacked_distances(origin, lower, family).max(initial=0.0))
    if len(lower) and len(upper):
        # points where segments from below-level to above-level generators cross L = c
        s = (c - levels[low][:, None]) / (levels[~low][None, :] - levels[low][:, None])
        crossings = lower[:, None, :] + s[..., None] * (upper[None, :, :] - lower[:, None, :])
        radius = max(radius, float(_stacked_distances(origin, crossings, family).max()))
    return radius


def fit_threshold(L: SeparatingFunctional, cloud: WeightedCloud, target: State, eps: float, iterations: int = 60) -> SeparatingFunctional:
    """Copy of L whose c is the largest level keeping the slab {L <= c} inside the eps-ball around target."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    top = max(L.evaluate(p) for p in cloud.points)
    if slab_radius(L, cloud, target, top) <= eps:
        return L.model_copy(update={"c": top})

    lo, hi = L.a, top
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if slab_radius(L, cloud, target, mid) <= eps:
            lo = mid
        else:
            hi = mid
    return L.model_copy(update={"c": lo})


def lemma_bound(L: SeparatingFunctional, eps: float, delta: float) -> float:
    """((1 - delta) c - a) / ||L||; distances to the barycenter below this force weight >= delta within eps."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if L.norm <= 0:
        raise ValueError("separating functional has zero norm")
    value = ((1 - delta) * L.c - L.a) / L.norm
    if value <= 0:
        raise DegenerateBoundError(f"bound is nonpositive ({value:.6g}): c = {L.c} is too small relative to a = {L.a}", value)
    return value


def concentration_schedule(clouds: list[tuple[int, WeightedCloud]], target: State, r_max: int = 50) -> list[dict]:
    """For each (N, cloud), the largest r <= r_max whose bound at eps = 1/r, delta = 1 - 1/r covers the barycenter.

    The concentrated weight at that eps is then at least 1 - 1/r.
    """
    schedule = []
    for N, cloud in clouds:
        L = find_separating_functional(cloud, target)
        gap = distance(target, barycenter(cloud))
        best_r, best_bound = 0, 0.0
        for r in range(2, r_max + 1):
            try:
                bound = lemma_bound(fit_threshold(L, cloud, target, 1.0 / r), 1.0 / r, 1.0 - 1.0 / r)
            except DegenerateBoundError:
                continue
            if gap <= bound:
                best_r, best_bound = r, bound
        weight = select_concentrated(cloud, target, 1.0 / best_r)[1] if best_r else 0.0
        schedule.append({"N": N, "r": best_r, "barycenter_distance": gap, "bound": best_bound, "weight": weight})
    return schedule

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.data.models import CheckResult, FourierObservable, RunConfig, State, TestFamily, WeightedCloud
from src.geometry.separation import DegenerateBoundError, concentration_schedule, find_separating_functional, fit_threshold, lemma_bound
from src.geometry.states import barycenter, distance, make_cloud, make_test_family, select_concentrated
from src.utils.config import max_workers
from src.utils.progress import progress

CHECK_NAME = "convex"
SCHEDULE_LEVELS = (10, 20, 50, 100, 200)
# smallest far distance is FAR_SCALE / 8, beyond the widest schedule radius 1/2
FAR_SCALE = 5

_TRIAL_MONOMIALS = [FourierObservable.monomial(a, b) for a, b in ((1, 0), (0, 1), (1, 1), (-1, 1))]


def trial_family(dimension: int) -> TestFamily:
    """Constant plus `dimension` monomials, so states live in C^dimension after the constant entry."""
    return make_test_family([FourierObservable.constant(1.0), *_TRIAL_MONOMIALS[:dimension]], family_id=f"trial-{dimension}")


def random_exposed_cloud(rng: np.random.Generator) -> tuple[WeightedCloud, State, np.ndarray]:
    """Cloud of at most 50 points strictly on the positive side of the first coordinate, with target at the origin.

    Returns the cloud (uniform weights), the target and a boolean mask of the points near the target.
    """
    dimension = int(rng.integers(1, 5))
    family = trial_family(dimension)
    n_points = int(rng.integers(2, 51))
    one_dimensional = rng.random() < 0.3

    near = np.zeros(n_points, dtype=bool)
    near[: int(rng.integers(1, n_points))] = True
    lead = np.where(near, rng.uniform(0.001, 0.02, n_points), rng.uniform(0.2, 1.0, n_points))

    values = np.zeros((n_points, dimension + 1), dtype=complex)
    values[:, 0] = 1.0
    values[:, 1] = lead
    if not one_dimensional:
        spread = rng.uniform(-0.2, 0.2, (n_points, dimension)) + 1j * rng.uniform(-0.2, 0.2, (n_points, dimension))
        spread[:, 0] = 1j * spread[:, 0].imag
        values[:, 1:] += spread * lead[:, None]

    states = [State(family=family, values=row) for row in values]
    target = State(family=family, values=[1.0] + [0.0] * dimension)
    return make_cloud(states, np.ones(n_points)), target, near


def lemma_trial(seed: np.random.SeedSequence, trial: int) -> dict:
    """One randomized instance of the concentration bound; a counterexample has premise true and weight < delta."""
    rng = np.random.default_rng(seed)
    cloud, target, near = random_exposed_cloud(rng)
    eps = float(rng.uniform(0.002, 0.05))
    delta = float(rng.uniform(0.5, 0.95))

    record = {"trial": trial, "kind": "lemma", "premise": False, "weight": None, "delta": delta, "bound": None}
    try:
        bound = lemma_bound(fit_threshold(find_separating_functional(cloud, target), cloud, target, eps), eps, delta)
    except DegenerateBoundError:
        return record

    near_mass = 1.0 if rng.random() < 0.3 else float(rng.uniform(0.9, 1.0))
    alphas = np.zeros(len(cloud.points))
    alphas[near] = near_mass * rng.dirichlet(np.ones(near.sum()))
    if (~near).any():
        alphas[~near] = (1 - near_mass) * rng.dirichlet(np.ones((~near).sum()))
    reweighted = make_cloud(cloud.points, alphas)

    premise = distance(target, barycenter(reweighted)) <= bound
    _, weight = select_concentrated(reweighted, target, eps)
    record.update({"premise": premise, "weight": weight, "bound": bound})
    return record


def synthetic_sequence(levels=SCHEDULE_LEVELS) -> tuple[list[tuple[int, WeightedCloud]], State]:
    """Clouds whose barycenters approach the vertex (1, 0, 0) at rate 1/N.

    Far points sit at FAR_SCALE times three fixed directions, outside every schedule
    radius, with total weight 1/(FAR_SCALE N); near points are the same directions
    shrunk by 1/N and carry the remaining weight.
    """
    family = make_test_family([FourierObservable.constant(1.0), *_TRIAL_MONOMIALS[:2]], family_id="schedule-2")
    target = State(family=family, values=[1, 0, 0])
    directions = np.array([[0, 1, 0], [0, 0, 1], [0, 1j, 0]], dtype=complex)

    clouds = []
    for N in levels:
        far_weight = 1 / (FAR_SCALE * N)
        far = [State(family=family, values=target.as_array() + FAR_SCALE * d) for d in directions]
        near = [State(family=family, values=target.as_array() + d / N) for d in directions]
        weights = [far_weight / 3] * 3 + [(1 - far_weight) / 3] * 3
        clouds.append((N, make_cloud(far + near, weights)))
    return clouds, target


def run_convex(config: RunConfig) -> CheckResult:
    """Randomized concentration-bound trials followed by the 1/r schedule on a converging sequence."""
    progress.update_status(CHECK_NAME, f"{config.trials} trials", "Running separation trials")
    seeds = np.random.SeedSequence(config.seed).spawn(config.trials)
    with ThreadPoolExecutor(max_workers=max_workers()) as executor:
        records = list(executor.map(lemma_trial, seeds, range(config.trials)))

    progress.update_status(CHECK_NAME, "schedule", "Running concentration schedule")
    clouds, target = synthetic_sequence()
    for entry in concentration_schedule(clouds, target, r_max=config.r_max):
        r = entry["r"]
        records.append({"trial": entry["N"], "kind": "schedule", "premise": r > 0, "weight": entry["weight"], "delta": 1 - 1 / r if r else None, "bound": entry["bound"]})
    progress.update_status(CHECK_NAME, None, "Done")

    lemma = [record for record in records if record["kind"] == "lemma"]
    counterexamples = [record["trial"] for record in lemma if record["premise"] and record["weight"] < record["delta"] - 1e-12]
    schedule = [record for record in records if record["kind"] == "schedule"]
    terminal = schedule[-1]["weight"]

    findings = [f"premise held in {sum(record['premise'] for record in lemma)} of {len(lemma)} trials", f"terminal concentrated weight {terminal:.6g} at N = {schedule[-1]['trial']}"]
    if counterexamples:
        findings.append(f"concentration bound failed in trials {counterexamples[:10]}")
    return CheckResult(name=CHECK_NAME, records=records, passed=not counterexamples and terminal >= 0.99, findings=findings)

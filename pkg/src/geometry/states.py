import hashlib
import json
import math
from itertools import islice
from typing import Iterator, Sequence

import numpy as np

from src.data.models import FourierObservable, QuantizationContext, State, TestFamily, WeightedCloud
from src.torus.observables import classical_average, to_json
from src.torus.quantization import block_expectation, subspace_block


class FamilyMismatchError(ValueError):
    pass


def _shell_exponents() -> Iterator[tuple[int, int]]:
    yield (0, 0)
    shell = 1
    while True:
        for a in range(-shell, shell + 1):
            for b in range(-shell, shell + 1):
                if max(abs(a), abs(b)) == shell:
                    yield (a, b)
        shell += 1


def default_test_family(n_max: int = 25) -> TestFamily:
    """1 followed by the monomials X^aY^b ordered by max(|a|,|b|), lexicographic within a shell."""
    if n_max < 1:
        raise ValueError(f"test family size must be positive, got {n_max}")
    observables = tuple(FourierObservable.monomial(a, b) for a, b in islice(_shell_exponents(), n_max))
    return TestFamily(family_id=f"shell-lex-{n_max}", observables=observables)


def make_test_family(observables: Sequence[FourierObservable], family_id: str | None = None) -> TestFamily:
    if family_id is None:
        digest = hashlib.sha1(json.dumps([to_json(f) for f in observables], sort_keys=True).encode()).hexdigest()
        family_id = f"custom-{digest[:12]}"
    return TestFamily(family_id=family_id, observables=tuple(observables))


def evaluate_subspace_state(ctx: QuantizationContext, basis, family: TestFamily) -> State:
    block = subspace_block(ctx, basis)
    return State(family=family, values=[block_expectation(ctx, block, f) for f in family.observables])


def classical_state(family: TestFamily) -> State:
    return State(family=family, values=[classical_average(f) for f in family.observables])


def _check_same_family(s1: State, s2: State):
    if s1.family.family_id != s2.family.family_id or s1.family.size != s2.family.size:
        raise FamilyMismatchError(f"states belong to different test families: {s1.family.family_id} and {s2.family.family_id}")


def distance(s1: State, s2: State) -> float:
    """Truncated weighted metric sum over n of 2^-n |s1(f_n) - s2(f_n)|."""
    _check_same_family(s1, s2)
    return float(np.dot(s1.family.weights, np.abs(s1.as_array() - s2.as_array())))


def distances_to(target: State, states: Sequence[State]) -> np.ndarray:
    for state in states:
        _check_same_family(target, state)
    values = np.array([s.values for s in states], dtype=complex)
    return np.abs(values - target.as_array()) @ target.family.weights


def truncation_bound(family: TestFamily) -> float:
    """Bound on the metric tail dropped by truncating at the family size (state values are bounded by 1)."""
    return 2.0 * 0.5**family.size


def make_cloud(states: Sequence[State], weights: Sequence[float]) -> WeightedCloud:
    """Cloud with the weights rescaled to sum to 1."""
    alphas = np.asarray(weights, dtype=float)
    total = math.fsum(alphas)
    if total <= 0:
        raise ValueError("cloud weights must have a positive sum")
    return WeightedCloud(points=tuple(states), weights=tuple(float(w) for w in alphas / total))


def barycenter(cloud: WeightedCloud) -> State:
    values = np.asarray(cloud.weights) @ cloud.value_matrix()
    return State(family=cloud.family, values=values)


def select_concentrated(cloud: WeightedCloud, target: State, eps: float) -> tuple[frozenset[int], float]:
    """Indices of points within eps of target, and their total weight."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = distances_to(target, cloud.points)
    indices = frozenset(int(i) for i in np.flatnonzero(d <= eps))
    return indices, math.fsum(cloud.weights[i] for i in sorted(indices))


def split_cloud(cloud: WeightedCloud, indices: frozenset[int]) -> tuple[float, State | None, State | None]:
    """(alpha, B1, B2) with B = alpha B1 + (1 - alpha) B2, B1 the barycenter over indices."""
    inside = sorted(indices)
    outside = [i for i in range(len(cloud.points)) if i not in indices]
    alpha = math.fsum(cloud.weights[i] for i in inside)

    def partial(selection: list[int]) -> State | None:
        if not selection or math.fsum(cloud.weights[i] for i in selection) == 0:
            return None
        return barycenter(make_cloud([cloud.points[i] for i in selection], [cloud.weights[i] for i in selection]))

    return alpha, partial(inside), partial(outside)

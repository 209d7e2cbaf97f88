import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.data.models import FourierObservable, State
from src.geometry.states import (
    FamilyMismatchError,
    barycenter,
    classical_state,
    default_test_family,
    distance,
    evaluate_subspace_state,
    make_cloud,
    make_test_family,
    select_concentrated,
    split_cloud,
    truncation_bound,
)
from src.torus.observables import ONE, X
from src.torus.quantization import make_context
from strategies import states

PAIR = make_test_family([ONE, X], family_id="pair")


def point(*values) -> State:
    return State(family=PAIR, values=[1, *values])


def test_default_test_family_order():
    assert default_test_family(1).observables == (ONE,)
    family = default_test_family(4)
    assert family.observables[1:] == tuple(FourierObservable.monomial(-1, b) for b in (-1, 0, 1))
    assert family.family_id == "shell-lex-4"
    assert default_test_family(25).observables[-1] == FourierObservable.monomial(2, 2)


def test_custom_family_ids_are_content_hashes():
    first = make_test_family([ONE, X])
    assert first.family_id.startswith("custom-")
    assert make_test_family([ONE, X]).family_id == first.family_id
    assert make_test_family([ONE, FourierObservable.monomial(0, 1)]).family_id != first.family_id


def test_subspace_state_values():
    ctx = make_context(4)
    family = make_test_family([ONE, X])
    assert evaluate_subspace_state(ctx, np.eye(4), family).values == pytest.approx((1, 0))
    assert evaluate_subspace_state(ctx, [np.eye(4)[:, 0]], family).values[1] == pytest.approx(ctx.A**2)


def test_classical_state():
    family = make_test_family([ONE, X, ONE.scale(2) + FourierObservable.monomial(1, 1)])
    assert classical_state(family).values == (1, 0, 2)


def test_distance():
    family = make_test_family([ONE, X, FourierObservable.monomial(0, 1)])
    s = State(family=family, values=[1, 0.3, 0.2j])
    assert distance(s, s) == 0
    assert distance(s, State(family=family, values=[1, 0.3, 1 + 0.2j])) == pytest.approx(0.125)


def test_distance_rejects_mixed_families():
    other = make_test_family([ONE, FourierObservable.monomial(0, 1)], family_id="other")
    with pytest.raises(FamilyMismatchError):
        distance(point(0), State(family=other, values=[1, 0]))


def test_barycenter():
    assert barycenter(make_cloud([point(0.4)], [1])).values == pytest.approx((1, 0.4))
    assert barycenter(make_cloud([point(0.4), point(0.4)], [1, 3])).values == pytest.approx((1, 0.4))
    assert barycenter(make_cloud([point(0), point(1)], [0.25, 0.75])).values[1] == pytest.approx(0.75)


def test_select_concentrated():
    target = point(0)
    indices, weight = select_concentrated(make_cloud([target, target], [1, 1]), target, 0.01)
    assert indices == frozenset({0, 1}) and weight == pytest.approx(1)

    indices, weight = select_concentrated(make_cloud([point(3), point(4)], [1, 1]), target, 0.01)
    assert indices == frozenset() and weight == 0

    # distances 0.1 and 0.5 under the weight 1/4 of the second entry
    indices, weight = select_concentrated(make_cloud([point(0.4), point(2.0)], [0.7, 0.3]), target, 0.2)
    assert indices == frozenset({0}) and weight == pytest.approx(0.7)

    with pytest.raises(ValueError):
        select_concentrated(make_cloud([target], [1]), target, 0.0)


@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(0.01, 1)), min_size=1, max_size=8), st.floats(0.01, 0.5))
def test_split_cloud_recombines(entries, eps):
    cloud = make_cloud([point(v) for v, _ in entries], [w for _, w in entries])
    indices, _ = select_concentrated(cloud, point(0), eps)
    alpha, inside, outside = split_cloud(cloud, indices)

    recombined = np.zeros(2, dtype=complex)
    if inside is not None:
        recombined += alpha * inside.as_array()
    if outside is not None:
        recombined += (1 - alpha) * outside.as_array()
    assert np.allclose(recombined, barycenter(cloud).as_array())


def test_make_cloud_needs_positive_weight():
    with pytest.raises(ValueError):
        make_cloud([point(0)], [0.0])


def test_truncation_bound():
    assert truncation_bound(default_test_family(25)) == pytest.approx(2**-24)


METRIC_FAMILY = default_test_family(8)


@settings(max_examples=1000)
@given(states(METRIC_FAMILY), states(METRIC_FAMILY), states(METRIC_FAMILY))
def test_distance_is_a_metric(s1, s2, s3):
    assert distance(s1, s1) == 0
    assert distance(s1, s2) >= 0
    assert distance(s1, s2) == distance(s2, s1)
    assert distance(s1, s3) <= distance(s1, s2) + distance(s2, s3) + 1e-12

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.topology.verlinde import asymptotic_volume_estimate, spin_character_classes, spin_dimension_table, verlinde_dim


@given(st.integers(2, 60).map(lambda k: 2 * k))
def test_genus_zero_and_one(p):
    assert verlinde_dim(0, p) == 1
    assert verlinde_dim(1, p) == p // 2 - 1


@given(st.integers(2, 100).map(lambda k: 2 * k))
def test_genus_two_closed_form(p):
    assert verlinde_dim(2, p) == p * (p * p - 4) // 48


@given(st.integers(1, 60).map(lambda k: 2 * k + 1))
def test_odd_levels_are_integral(p):
    assert verlinde_dim(2, p) == p * (p * p - 1) // 24


@pytest.mark.parametrize("g, p, expected", [(2, 8, 10), (2, 12, 35), (2, 16, 84), (3, 8, 36), (3, 12, 329)])
def test_known_dimensions(g, p, expected):
    assert verlinde_dim(g, p) == expected


def test_high_genus_stays_integral():
    assert verlinde_dim(8, 200) > 0


def test_invalid_arguments():
    with pytest.raises(ValueError):
        verlinde_dim(-1, 8)
    with pytest.raises(ValueError):
        verlinde_dim(2, 2)
    with pytest.raises(ValueError):
        spin_dimension_table(2, 1)


def entries_by_label(g: int, r: int) -> dict[str, tuple[int, int]]:
    return {entry.character.label: (entry.multiplicity, entry.dimension) for entry in spin_dimension_table(g, r).entries}


def test_spin_table_odd_r():
    table = spin_dimension_table(2, 3)
    assert table.total == 35
    assert table.level == 12
    assert entries_by_label(2, 3) == {"chi=0": (1, 5), "chi!=0": (15, 2)}


def test_spin_table_even_r():
    assert spin_dimension_table(2, 2).total == 10
    assert entries_by_label(2, 2) == {"arf=0": (10, 1), "arf=1": (6, 0)}


@pytest.mark.parametrize("g", range(1, 5))
@pytest.mark.parametrize("r", range(2, 13))
def test_summands_partition_the_total(g, r):
    table = spin_dimension_table(g, r)
    assert table.partition_ok
    assert sum(multiplicity for _, multiplicity in spin_character_classes(g, r)) == 4**g


def test_genus_one_asymptotics():
    estimates, ratios = asymptotic_volume_estimate(1, [100, 200, 500])
    assert estimates == [2 * r - 1 for r in (100, 200, 500)]
    assert abs(ratios[-1] - 0.25) < abs(ratios[0] - 0.25) + 1e-12
    assert ratios[-1] == pytest.approx(0.25, abs=1e-2)


def test_genus_two_ratios_approach_limit():
    estimates, ratios = asymptotic_volume_estimate(2, [101, 201, 501])
    assert ratios[-1] == pytest.approx(1 / 16, rel=1e-2)
    assert abs(estimates[-1] - estimates[-2]) < abs(estimates[1] - estimates[0])


def test_asymptotics_need_increasing_levels():
    with pytest.raises(ValueError):
        asymptotic_volume_estimate(2, [200, 100])


@pytest.mark.parametrize("g", range(1, 6))
@pytest.mark.parametrize("r", [3, 5, 7, 9, 25])
def test_trivial_character_excess(g, r):
    labels = entries_by_label(g, r)
    assert labels["chi=0"][1] - labels["chi!=0"][1] == r ** (g - 1)


def test_even_r_ratio_within_one_percent():
    _, ratios = asymptotic_volume_estimate(2, [500])
    assert ratios[0] == pytest.approx(1 / 16, rel=1e-2)


@pytest.mark.parametrize("g", range(1, 6))
def test_dimension_grows_strictly_with_level(g):
    dims = [verlinde_dim(g, 4 * r) for r in range(1, 31)]
    assert all(b > a for a, b in zip(dims, dims[1:]))

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.data.models import FourierObservable, SL2Matrix, TorusPoint
from src.torus.observables import ONE, X, Y, classical_average, evaluate, from_json, pointwise_product, poisson_bracket, pullback_sl2, scaled_commutator, star_product, to_json
from strategies import exponents, observables, sl2_matrices


def close(f: FourierObservable, g: FourierObservable, tol: float = 1e-12) -> bool:
    keys = set(f.coefficients) | set(g.coefficients)
    return all(abs(f.coefficient(*key) - g.coefficient(*key)) <= tol for key in keys)


def test_evaluate():
    assert evaluate(ONE, TorusPoint(theta1=0.7, theta2=0.1)) == pytest.approx(1)
    assert evaluate(X, TorusPoint(theta1=0.25, theta2=0)) == pytest.approx(1j)
    f = X + FourierObservable.monomial(-1, 0)
    assert f.is_real
    assert evaluate(f, TorusPoint(theta1=0.5, theta2=0.3)) == pytest.approx(-2)


def test_star_product_examples():
    hbar = 0.3
    assert close(star_product(ONE, X + Y, hbar), X + Y)
    xy = FourierObservable.monomial(1, 1)
    assert close(star_product(X, Y, hbar), xy.scale(cmath.exp(1j * math.pi * hbar)))
    commutator = star_product(X, Y, hbar) - star_product(Y, X, hbar)
    assert close(commutator, xy.scale(2j * math.sin(math.pi * hbar)))


@given(observables(), observables(), observables(), st.floats(0.0, 2.0))
def test_star_product_is_associative(f, g, h, hbar):
    assert close(star_product(star_product(f, g, hbar), h, hbar), star_product(f, star_product(g, h, hbar), hbar), tol=1e-9)


@given(observables(), observables())
def test_star_product_at_zero_is_commutative(f, g):
    assert close(star_product(f, g, 0.0), star_product(g, f, 0.0), tol=1e-12)


def test_poisson_bracket_examples():
    assert poisson_bracket(X, X).coefficients == {}
    assert close(poisson_bracket(X, Y), FourierObservable.monomial(1, 1, -2 * math.pi))
    assert close(poisson_bracket(FourierObservable.monomial(2, 0), Y), FourierObservable.monomial(2, 1, -4 * math.pi))


@given(exponents(3), exponents(3))
def test_scaled_commutator_converges_quadratically(p, q):
    f, g = FourierObservable.monomial(*p), FourierObservable.monomial(*q)
    bracket = poisson_bracket(f, g)
    key = (p[0] + q[0], p[1] + q[1])

    def error(hbar: float) -> float:
        return abs(scaled_commutator(f, g, hbar).coefficient(*key) - bracket.coefficient(*key))

    coarse, fine = error(1e-2), error(5e-3)
    if coarse < 1e-12:
        assert fine < 1e-12
    else:
        assert 3.5 < coarse / fine < 4.5


def test_classical_average():
    assert classical_average(ONE) == 1
    assert classical_average(X) == 0
    assert classical_average(ONE.scale(3) + FourierObservable.monomial(1, 1, 2)) == 3


def test_pullback_examples():
    T = SL2Matrix.T()
    assert pullback_sl2(Y, SL2Matrix.identity()) == Y
    assert pullback_sl2(Y, T) == FourierObservable.monomial(-1, 1)
    assert pullback_sl2(X, T) == X


@given(observables(), sl2_matrices(), sl2_matrices())
def test_pullback_is_a_right_action(f, phi, psi):
    assert pullback_sl2(pullback_sl2(f, phi), psi) == pullback_sl2(f, phi @ psi)


@given(observables(), observables(), sl2_matrices(), st.floats(0.0, 1.0))
def test_pullback_preserves_star_product(f, g, phi, hbar):
    left = pullback_sl2(star_product(f, g, hbar), phi)
    right = star_product(pullback_sl2(f, phi), pullback_sl2(g, phi), hbar)
    assert close(left, right, tol=1e-9)


def test_json_form():
    f = FourierObservable.monomial(2, -1, 0.5 - 1j) + ONE
    assert from_json(to_json(f)) == f
    with pytest.raises(ValueError, match="duplicate"):
        from_json({"terms": [{"a": 1, "b": 0, "re": 1.0}, {"a": 1, "b": 0, "re": 2.0}]})


@given(observables(), observables())
def test_pointwise_operator_matches_star_product_at_zero(f, g):
    assert close(f * g, star_product(f, g, 0.0))
    assert close(pointwise_product(f, g), f * g)
    assert close(2 * f, f.scale(2))


def test_from_terms():
    assert FourierObservable.from_terms({(1, 0): 1, (0, 0): 0}) == X

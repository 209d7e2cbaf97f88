import numpy as np
import pytest
from hypothesis import given

from src.data.models import FourierObservable, SL2Matrix
from src.torus.observables import X, Y
from src.torus.quantization import make_context
from src.torus.weil import classical_period, decompose_sl2, egorov_defect, gauss_prefactor, generators, is_anosov, projective_defect, quantum_period, random_sl2, rho, scalar_defect
from strategies import sl2_matrices

CAT = SL2Matrix.of(2, 1, 1, 1)


@pytest.mark.parametrize("N", range(2, 65))
def test_gauss_prefactor_modulus(N):
    assert abs(gauss_prefactor(make_context(N))) == pytest.approx(N**-0.5, abs=1e-12)


@pytest.mark.parametrize(
    "phi, letters",
    [
        (SL2Matrix.identity(), ()),
        (SL2Matrix.S(), ("S",)),
        (SL2Matrix.of(1, -3, 0, 1), ("T", "T", "T")),
        (CAT, ("T-1", "T-1", "S-1", "T-1")),
    ],
)
def test_decompose_examples(phi, letters):
    assert decompose_sl2(phi).letters == letters


@given(sl2_matrices(max_letters=30))
def test_decompose_evaluates_back(phi):
    word = decompose_sl2(phi)
    assert word.evaluate() == phi
    assert word.source == phi


def test_decompose_accepts_tuples():
    assert decompose_sl2((2, 1, 1, 1)).source == CAT


@pytest.mark.parametrize("N", [2, 3, 4, 9, 16])
def test_rho_of_identity_and_generators(N):
    ctx = make_context(N)
    s, t = generators(ctx)
    assert np.allclose(rho(ctx, SL2Matrix.identity()).matrix, np.eye(N))
    assert np.allclose(rho(ctx, SL2Matrix.T()).matrix, t.matrix)
    assert np.allclose(rho(ctx, SL2Matrix.S()).matrix, s.matrix)


@pytest.mark.parametrize("N", range(3, 17))
def test_generator_relations_hold_projectively(N):
    s, t = (op.matrix for op in generators(make_context(N)))
    assert scalar_defect(np.linalg.matrix_power(s, 4)) < 1e-9
    st = s @ t
    assert scalar_defect(st @ st @ st @ np.linalg.inv(s @ s)) < 1e-9


@pytest.mark.parametrize("N", [2, 5, 8, 11])
def test_rho_is_a_projective_homomorphism(N, rng):
    ctx = make_context(N)
    for _ in range(50):
        phi, psi = random_sl2(rng, 50), random_sl2(rng, 50)
        assert projective_defect(rho(ctx, phi @ psi).matrix, rho(ctx, phi).matrix @ rho(ctx, psi).matrix) < 1e-8


def test_egorov_examples():
    ctx = make_context(4)
    assert egorov_defect(ctx, SL2Matrix.identity(), Y) < 1e-10
    assert egorov_defect(ctx, SL2Matrix.T(), X) < 1e-10
    assert egorov_defect(ctx, SL2Matrix.T(), Y) < 1e-10


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 7, 9, 10, 15, 16, 39])
@pytest.mark.parametrize("phi", [SL2Matrix.S(), SL2Matrix.T(), SL2Matrix.S() @ SL2Matrix.T(), CAT])
def test_egorov_identity_is_exact(N, phi):
    ctx = make_context(N)
    operator = rho(ctx, phi)
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert egorov_defect(ctx, phi, FourierObservable.monomial(a, b), operator) < 1e-8


def test_is_anosov():
    assert is_anosov(CAT)
    assert not is_anosov(SL2Matrix.identity())
    assert not is_anosov(SL2Matrix.S())


def test_projective_defect_ignores_phase():
    x = np.arange(4, dtype=complex).reshape(2, 2)
    assert projective_defect(x, np.exp(0.7j) * x) < 1e-12
    assert projective_defect(x, np.eye(2)) > 0.1


def test_classical_period():
    assert classical_period(SL2Matrix.identity(), 7) == 1
    assert classical_period(SL2Matrix.S(), 5) == 4
    # the cat map modulo 2 cycles with period 3
    assert classical_period(CAT, 2) == 3


@pytest.mark.parametrize("N", [5, 7, 8, 12])
def test_quantum_period_gives_scalar_power(N):
    ctx = make_context(N)
    k = quantum_period(ctx, CAT)
    assert k > 0
    assert scalar_defect(np.linalg.matrix_power(rho(ctx, CAT).matrix, k)) < 1e-8
    assert all(scalar_defect(np.linalg.matrix_power(rho(ctx, CAT).matrix, d)) > 1e-8 for d in range(1, k))


def test_quantum_period_of_identity():
    assert quantum_period(make_context(5), SL2Matrix.identity()) == 1


def test_random_sl2_respects_bound(rng):
    for _ in range(200):
        phi = random_sl2(rng, 10)
        assert max(abs(x) for x in phi.entries()) <= 10


def test_generators_need_level_two():
    with pytest.raises(ValueError):
        generators(make_context(1))


def test_quantum_period_reports_zero_when_no_power_is_scalar():
    ctx = make_context(7)
    # no matrix has a negative scalar defect, so nothing qualifies
    assert quantum_period(ctx, CAT, tol=-1.0) == 0

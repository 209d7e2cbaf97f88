from itertools import groupby

import numpy as np

from src.data.cache import get_generator_cache
from src.data.models import FourierObservable, Letter, QuantizationContext, SL2Matrix, SL2Word, WeilOperator
from src.torus.observables import pullback_sl2
from src.torus.quantization import quantize

_INVERSE: dict[str, str] = {"S": "S-1", "S-1": "S", "T": "T-1", "T-1": "T"}


class NonUnitaryError(ValueError):
    pass


def gauss_prefactor(ctx: QuantizationContext) -> complex:
    """(1/N) sum over k mod N of A^(k^2)."""
    k = np.arange(ctx.N)
    return complex(ctx.power(k * k).sum() / ctx.N)


def _generator_matrices(ctx: QuantizationContext) -> tuple[np.ndarray, np.ndarray]:
    cache = get_generator_cache()
    if ctx.N in cache:
        return cache[ctx.N]

    g = gauss_prefactor(ctx)
    if abs(abs(g) - ctx.N**-0.5) > 1e-9:
        raise ValueError(f"Gauss prefactor has modulus {abs(g):.12g} at N={ctx.N}, expected {ctx.N ** -0.5:.12g}")

    i = np.arange(1, ctx.N + 1)
    t_matrix = np.diag(ctx.power(i * i))
    # the displayed Fourier matrix g * A^(2ij) conjugates like S^-1, so S is its adjoint
    fourier = g * ctx.power(2 * np.outer(i, i))
    s_matrix = fourier.conj().T.copy()

    s_matrix.flags.writeable = False
    t_matrix.flags.writeable = False
    cache.insert(ctx.N, (s_matrix, t_matrix))
    return s_matrix, t_matrix


def generators(ctx: QuantizationContext) -> tuple[WeilOperator, WeilOperator]:
    """rho_N(S) and rho_N(T)."""
    if ctx.N < 2:
        raise ValueError(f"Weil generators need N >= 2, got {ctx.N}")
    s_matrix, t_matrix = _generator_matrices(ctx)
    return (
        WeilOperator(context=ctx, matrix=s_matrix, source=SL2Matrix.S()),
        WeilOperator(context=ctx, matrix=t_matrix, source=SL2Matrix.T()),
    )


def _free_reduce(letters: list[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1] == _INVERSE[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def _t_power(k: int) -> list[Letter]:
    """Letters of T^k."""
    return ["T"] * k if k >= 0 else ["T-1"] * (-k)


def decompose_sl2(phi: SL2Matrix | tuple[int, int, int, int]) -> SL2Word:
    """Write phi as a word in S, T and their inverses by Euclidean reduction of the first column."""
    if not isinstance(phi, SL2Matrix):
        phi = SL2Matrix.of(*phi)

    a, b, c, d = phi.entries()
    letters: list[Letter] = []
    while c != 0:
        q = a // c
        # phi = word * M and T^q M = [[a - qc, b - qd], [c, d]]
        letters.extend(_t_power(-q))
        a, b = a - q * c, b - q * d
        # S M = [[c, d], [-a, -b]]
        a, b, c, d = c, d, -a, -b
        letters.append("S-1")

    if a == 1:
        letters.extend(_t_power(-b))
    else:
        letters.extend(["S", "S"])
        letters.extend(_t_power(b))
    return SL2Word(letters=_free_reduce(letters), source=phi)


def rho(ctx: QuantizationContext, phi: SL2Matrix) -> WeilOperator:
    """rho_N(phi) as the product of generator matrices along decompose_sl2(phi)."""
    word = decompose_sl2(phi)
    s_matrix, _ = _generator_matrices(ctx) if ctx.N >= 2 else (np.eye(1, dtype=complex), None)
    i = np.arange(1, ctx.N + 1)

    result = np.eye(ctx.N, dtype=complex)
    for letter, run in groupby(word.letters):
        count = len(list(run))
        if letter in ("T", "T-1"):
            exponent = count if letter == "T" else -count
            result = result * ctx.power(exponent * i * i)[None, :]
        else:
            factor = s_matrix if letter == "S" else s_matrix.conj().T
            for _ in range(count):
                result = result @ factor
    try:
        return WeilOperator(context=ctx, matrix=result, source=phi)
    except ValueError as e:
        raise NonUnitaryError(str(e)) from e


def egorov_defect(ctx: QuantizationContext, phi: SL2Matrix, f: FourierObservable, operator: WeilOperator | None = None) -> float:
    """Frobenius norm of rho(phi)^-1 Op_N(f) rho(phi) - Op_N(f o phi); pass operator to reuse a computed rho(phi)."""
    u = (operator or rho(ctx, phi)).matrix
    conjugated = u.conj().T @ quantize(ctx, f).matrix @ u
    return float(np.linalg.norm(conjugated - quantize(ctx, pullback_sl2(f, phi)).matrix))


def projective_defect(x: np.ndarray, y: np.ndarray) -> float:
    """min over unit-modulus lambda of ||x - lambda y||_F."""
    t = np.vdot(x, y)
    phase = np.conj(t) / abs(t) if abs(t) > 0 else 1.0
    return float(np.linalg.norm(x - phase * y))


def scalar_defect(m: np.ndarray) -> float:
    """Frobenius distance from m to the nearest multiple of the identity."""
    n = m.shape[0]
    return float(np.linalg.norm(m - (np.trace(m) / n) * np.eye(n)))


def is_anosov(phi: SL2Matrix) -> bool:
    return abs(phi.trace()) > 2


def classical_period(phi: SL2Matrix, modulus: int, limit: int | None = None) -> int:
    """Least k >= 1 with phi^k = I mod modulus, or 0 if none is found below the limit."""
    limit = limit or 6 * modulus + 6
    a, b, c, d = (x % modulus for x in phi.entries())
    p, q, r, s = a, b, c, d
    for k in range(1, limit + 1):
        if (p % modulus, q % modulus, r % modulus, s % modulus) == (1 % modulus, 0, 0, 1 % modulus):
            return k
        p, q, r, s = (p * a + q * c) % modulus, (p * b + q * d) % modulus, (r * a + s * c) % modulus, (r * b + s * d) % modulus
    return 0


def quantum_period(ctx: QuantizationContext, phi: SL2Matrix, operator: WeilOperator | None = None, tol: float = 1e-8) -> int:
    """Least k >= 1 with rho_N(phi)^k scalar within tol, or 0 if no divisor of the period of phi modulo the order of A qualifies.

    The answer divides the period of phi modulo the order of A, so only its divisors are tried.
    """
    bound = classical_period(phi, ctx.order)
    if bound == 0:
        return 0
    u = (operator or rho(ctx, phi)).matrix
    for k in (d for d in range(1, bound + 1) if bound % d == 0):
        if scalar_defect(np.linalg.matrix_power(u, k)) <= tol:
            return k
    return 0


def random_sl2(rng: np.random.Generator, bound: int) -> SL2Matrix:
    """Random element of SL2(Z) with entries bounded by bound in absolute value."""
    while True:
        a, b = (int(x) for x in rng.integers(-bound, bound + 1, size=2))
        # extended Euclid: a x + b y = g with |x| <= |b|, |y| <= |a|
        old_r, r, old_x, x, old_y, y = a, b, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_x, x = x, old_x - q * x
            old_y, y = y, old_y - q * y
        if abs(old_r) != 1:
            continue
        x, y = old_x * old_r, old_y * old_r
        # det [[a, b], [-y, x]] = a x + b y = 1
        if max(abs(x), abs(y)) <= bound:
            return SL2Matrix.of(a, b, -y, x)

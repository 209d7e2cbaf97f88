import cmath
import math

import numpy as np
from scipy.linalg import null_space

from src.data.models import FourierObservable, QuantizationContext, QuantumOperator


def make_context(N: int) -> QuantizationContext:
    """Level-N parameters: A = exp(2i pi/N), hbar = 2/N for odd N and A = exp(i pi/N), hbar = 1/N for even N."""
    if N < 1:
        raise ValueError(f"level N must be a positive integer, got {N}")
    hbar = 2.0 / N if N % 2 else 1.0 / N
    return QuantizationContext(N=N, A=cmath.exp(1j * math.pi * hbar), hbar=hbar)


def _as_columns(ctx: QuantizationContext, vectors) -> tuple[np.ndarray, bool]:
    block = np.asarray(vectors, dtype=complex)
    single = block.ndim == 1
    if single:
        block = block[:, None]
    if block.ndim != 2 or block.shape[0] != ctx.N:
        raise ValueError(f"expected vectors of length {ctx.N}, got array of shape {np.shape(vectors)}")
    return block, single


def apply_operator(ctx: QuantizationContext, f: FourierObservable, vectors) -> np.ndarray:
    """Apply Op_N(f) to a vector or to the columns of a matrix without forming Op_N(f)."""
    block, single = _as_columns(ctx, vectors)
    indices = np.arange(1, ctx.N + 1)
    result = np.zeros_like(block)
    for (a, b), c in f.coefficients.items():
        # Y^b sends e_i to e_(i+b), a cyclic shift of the rows
        shifted = np.roll(block, b, axis=0)
        diagonal = ctx.power(2 * a * indices)
        result += (c * ctx.power(-a * b)) * diagonal[:, None] * shifted
    return result[:, 0] if single else result


def quantize(ctx: QuantizationContext, f: FourierObservable) -> QuantumOperator:
    return QuantumOperator(context=ctx, matrix=apply_operator(ctx, f, np.eye(ctx.N, dtype=complex)))


def trace_average(ctx: QuantizationContext, f: FourierObservable) -> complex:
    """(1/N) Tr Op_N(f), summed monomial by monomial."""
    indices = np.arange(1, ctx.N + 1)
    total = 0j
    for (a, b), c in f.coefficients.items():
        if b % ctx.N:
            continue
        total += c * complex(ctx.power(-a * b)) * complex(ctx.power(2 * a * indices).sum())
    return total / ctx.N


def check_orthonormal(basis: np.ndarray, tol: float = 1e-10) -> None:
    gram = basis.conj().T @ basis
    deviation = np.abs(gram - np.eye(gram.shape[0]))
    i, j = np.unravel_index(np.argmax(deviation), deviation.shape)
    if deviation[i, j] > tol:
        raise ValueError(f"basis is not orthonormal: Gram entry ({i}, {j}) = {gram[i, j]:.6g}")


def subspace_block(ctx: QuantizationContext, basis) -> np.ndarray:
    """Validated N x d array whose columns are the basis vectors."""
    if isinstance(basis, np.ndarray):
        block = np.asarray(basis, dtype=complex)
        if block.ndim == 1:
            block = block[:, None]
    else:
        block = np.column_stack([np.asarray(v, dtype=complex) for v in basis])
    if block.shape[0] != ctx.N or block.shape[1] == 0:
        raise ValueError(f"basis must be a nonempty set of vectors in C^{ctx.N}, got shape {block.shape}")
    check_orthonormal(block)
    return block


def block_expectation(ctx: QuantizationContext, block: np.ndarray, f: FourierObservable) -> complex:
    """(1/dim W) Tr(P_W Op_N(f)) for an already validated basis block."""
    return complex(np.sum(block.conj() * apply_operator(ctx, f, block)) / block.shape[1])


def subspace_state_value(ctx: QuantizationContext, basis, f: FourierObservable) -> complex:
    return block_expectation(ctx, subspace_block(ctx, basis), f)


def commutant_dimension(ctx: QuantizationContext) -> int:
    """Dimension of the space of matrices commuting with both Op_N(X) and Op_N(Y)."""
    identity = np.eye(ctx.N)
    equations = []
    for f in (FourierObservable.monomial(1, 0), FourierObservable.monomial(0, 1)):
        op = quantize(ctx, f).matrix
        # row-major vec: vec(AM) = (A kron I) vec(M), vec(MA) = (I kron A^T) vec(M)
        equations.append(np.kron(op, identity) - np.kron(identity, op.T))
    return null_space(np.vstack(equations)).shape[1]


def operator_norm(op: QuantumOperator) -> float:
    return float(np.linalg.norm(op.matrix, 2))


def coefficient_norm(f: FourierObservable) -> float:
    """Sum of |c(a,b)|, an upper bound for the operator norm of every Op_N(f)."""
    return math.fsum(abs(c) for c in f.coefficients.values())


def to_json_dump(op: QuantumOperator) -> dict:
    return {"n": op.context.N, "re": op.matrix.real.tolist(), "im": op.matrix.imag.tolist()}

from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np
from scipy.linalg import schur

from src.data.models import BlockSummary, EigenBlock, EigenspaceDecomposition, ErgodicityRecord, QuantumOperator, ScarBlock, SL2Matrix, TestFamily, WeilOperator
from src.geometry.states import barycenter, classical_state, distance, distances_to, evaluate_subspace_state, make_cloud, select_concentrated
from src.torus.quantization import make_context
from src.torus.weil import NonUnitaryError, is_anosov, quantum_period, rho


def _phase(z: np.ndarray) -> np.ndarray:
    """Phase in [0, 2 pi), with round-off just below 2 pi folded to 0."""
    phase = np.mod(np.angle(z), 2 * np.pi)
    return np.where(phase >= 2 * np.pi - 1e-12, 0.0, phase)


def spectral_decomposition(U: QuantumOperator | WeilOperator | np.ndarray, cluster_tol: float = 1e-8) -> EigenspaceDecomposition:
    """Split a unitary matrix into eigenspaces, merging eigenvalues whose phases differ by at most cluster_tol."""
    matrix = U if isinstance(U, np.ndarray) else U.matrix
    n = matrix.shape[0]
    defect = np.linalg.norm(matrix.conj().T @ matrix - np.eye(n))
    if defect > 1e-8:
        raise NonUnitaryError(f"spectral decomposition needs a unitary matrix, defect {defect:.3e}")

    triangular, vectors = schur(matrix, output="complex")
    eigenvalues = np.diag(triangular)
    phases = _phase(eigenvalues)
    order = np.argsort(phases, kind="stable")

    clusters: list[list[int]] = [[int(order[0])]]
    for previous, current in zip(order, order[1:]):
        if phases[current] - phases[previous] <= cluster_tol:
            clusters[-1].append(int(current))
        else:
            clusters.append([int(current)])
    # phases just below 2 pi belong with those just above 0
    if len(clusters) > 1 and phases[clusters[0][0]] + 2 * np.pi - phases[clusters[-1][-1]] <= cluster_tol:
        clusters[0] = clusters.pop() + clusters[0]

    blocks = []
    for members in clusters:
        mean = eigenvalues[members].mean()
        eigenvalue = complex(mean / abs(mean))
        basis = vectors[:, members]
        residual = np.linalg.norm(matrix @ basis - eigenvalue * basis, axis=0).max()
        if residual > 10 * cluster_tol:
            raise ValueError(f"eigenspace for {eigenvalue:.6g} is not invariant to tolerance (residual {residual:.3e}); cluster_tol {cluster_tol} is too tight")
        blocks.append(EigenBlock(eigenvalue=eigenvalue, basis=basis))

    blocks.sort(key=lambda block: float(_phase(np.array(block.eigenvalue))))
    return EigenspaceDecomposition(blocks=tuple(blocks), cluster_tol=cluster_tol)


def reconstruct(decomposition: EigenspaceDecomposition) -> np.ndarray:
    """Sum of lambda_i times the projector onto block i."""
    return sum(block.eigenvalue * (block.basis @ block.basis.conj().T) for block in decomposition.blocks)


def ergodicity_record(phi: SL2Matrix, N: int, family: TestFamily, eps: float, ceiling: float = 0.1, cluster_tol: float = 1e-8) -> ErgodicityRecord:
    ctx = make_context(N)
    operator = rho(ctx, phi)
    decomposition = spectral_decomposition(operator, cluster_tol)
    reference = classical_state(family)

    states = [evaluate_subspace_state(ctx, block.basis, family) for block in decomposition.blocks]
    dimensions = [block.dimension for block in decomposition.blocks]
    cloud = make_cloud(states, dimensions)
    block_distances = distances_to(reference, states)

    _, fraction = select_concentrated(cloud, reference, eps)
    center = barycenter(cloud)
    full_space = evaluate_subspace_state(ctx, np.eye(N, dtype=complex), family)

    outliers = tuple((i, float(block_distances[i]), dimensions[i]) for i in range(len(states)) if block_distances[i] > eps)
    return ErgodicityRecord(
        N=N,
        weighted_fraction_within_eps=min(1.0, fraction),
        barycenter_distance=distance(center, reference),
        mean_distance=float(np.dot(cloud.weights, block_distances)),
        barycenter_defect=float(np.abs(center.as_array() - full_space.as_array()).max()),
        quantum_period=quantum_period(ctx, phi, operator),
        outliers=outliers,
        ceiling_violations=tuple(o for o in outliers if o[2] / N > ceiling),
        blocks=tuple(
            BlockSummary(index=i, eigenvalue=block.eigenvalue, dimension=block.dimension, distance=float(block_distances[i]), values=state.values)
            for i, (block, state) in enumerate(zip(decomposition.blocks, states))
        ),
    )


def fraction_within(record: ErgodicityRecord, eps: float) -> float:
    """Dimension-weighted fraction of the record's blocks within eps of the classical state."""
    return min(1.0, sum(block.dimension for block in record.blocks if block.distance <= eps) / record.N)


def ergodicity_report(phi: SL2Matrix, N_values: list[int], family: TestFamily, eps: float, ceiling: float = 0.1, cluster_tol: float = 1e-8, max_workers: int | None = None) -> list[ErgodicityRecord]:
    """One ErgodicityRecord per level, in the order of N_values."""
    if not is_anosov(phi):
        raise ValueError(f"{phi} is not Anosov (|trace| = {abs(phi.trace())} <= 2)")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(partial(ergodicity_record, phi, family=family, eps=eps, ceiling=ceiling, cluster_tol=cluster_tol), N_values))


def scar_outliers(report: list[ErgodicityRecord], threshold: float) -> list[ScarBlock]:
    scars = [
        ScarBlock(N=record.N, index=block.index, eigenvalue=block.eigenvalue, dimension=block.dimension, distance=block.distance, values=block.values)
        for record in report
        for block in record.blocks
        if block.distance > threshold
    ]
    return sorted(scars, key=lambda scar: (-scar.distance, scar.N, scar.index))

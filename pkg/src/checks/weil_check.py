from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.data.models import CheckResult, FourierObservable, RunConfig, SL2Matrix
from src.torus.quantization import make_context
from src.torus.weil import egorov_defect, generators, projective_defect, random_sl2, rho, scalar_defect
from src.utils.config import max_workers
from src.utils.progress import progress

CHECK_NAME = "weil-check"
TOLERANCE = 1e-8
UNITARITY_TOL = 1e-9

EGOROV_MATRICES = [SL2Matrix.S(), SL2Matrix.T(), SL2Matrix.S() @ SL2Matrix.T(), SL2Matrix.of(2, 1, 1, 1)]
EGOROV_MONOMIALS = [FourierObservable.monomial(a, b) for a in range(-3, 4) for b in range(-3, 4)]


def check_level(N: int, seed: int, pairs: int = 50, bound: int = 50) -> dict:
    progress.update_status(CHECK_NAME, f"N={N}", "Checking Weil representation")
    rng = np.random.default_rng([seed, N])
    ctx = make_context(N)
    identity = np.eye(N)

    unitarity = 0.0
    projective = 0.0
    for _ in range(pairs):
        phi, psi = random_sl2(rng, bound), random_sl2(rng, bound)
        u_phi, u_psi, u_product = rho(ctx, phi).matrix, rho(ctx, psi).matrix, rho(ctx, phi @ psi).matrix
        unitarity = max(unitarity, *(float(np.linalg.norm(u.conj().T @ u - identity)) for u in (u_phi, u_psi, u_product)))
        projective = max(projective, projective_defect(u_product, u_phi @ u_psi))

    s, t = (op.matrix for op in generators(ctx))
    s_inverse = s.conj().T
    st = s @ t

    progress.update_status(CHECK_NAME, f"N={N}", "Checking Egorov identity")
    egorov = 0.0
    for phi in EGOROV_MATRICES:
        operator = rho(ctx, phi)
        egorov = max(egorov, max(egorov_defect(ctx, phi, f, operator) for f in EGOROV_MONOMIALS))

    progress.update_status(CHECK_NAME, f"N={N}", "Done")
    return {
        "N": N,
        "unitarity_defect": unitarity,
        "projective_defect": projective,
        "s4_defect": scalar_defect(np.linalg.matrix_power(s, 4)),
        "st3_defect": scalar_defect(st @ st @ st @ s_inverse @ s_inverse),
        "egorov_defect": egorov,
        "parity": "even" if N % 2 == 0 else "odd",
    }


def run_weil_check(config: RunConfig) -> CheckResult:
    """Sweep unitarity, projectivity, generator relations and the Egorov identity over N in [n_min, n_max]."""
    levels = list(range(max(config.n_min, 2), config.n_max + 1))
    with ThreadPoolExecutor(max_workers=max_workers()) as executor:
        records = list(executor.map(lambda N: check_level(N, config.seed), levels))

    failed = []
    findings = []
    for record in records:
        structural = record["unitarity_defect"] <= UNITARITY_TOL and max(record["projective_defect"], record["s4_defect"], record["st3_defect"]) <= TOLERANCE
        if not structural or (record["parity"] == "even" and record["egorov_defect"] > TOLERANCE):
            failed.append(record["N"])

    odd = [record for record in records if record["parity"] == "odd"]
    if odd:
        worst = max(odd, key=lambda record: record["egorov_defect"])
        findings.append(f"largest odd-N Egorov defect {worst['egorov_defect']:.3e} at N = {worst['N']}")
    if failed:
        findings.append(f"invariant violated at N = {', '.join(map(str, failed))}")
    return CheckResult(name=CHECK_NAME, records=records, passed=not failed, findings=findings)

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.data.models import CheckResult, FourierObservable, RunConfig
from src.torus.observables import classical_average, star_product
from src.torus.quantization import coefficient_norm, commutant_dimension, make_context, operator_norm, quantize, trace_average
from src.utils.config import max_workers
from src.utils.progress import progress

CHECK_NAME = "torus-check"
MORPHISM_TOL = 1e-9
EXACT_TOL = 1e-12


def random_observable(rng: np.random.Generator, bound: int, max_terms: int = 3) -> FourierObservable:
    """A few monomials with exponents in [-bound, bound]^2 and complex Gaussian coefficients."""
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        a, b = (int(x) for x in rng.integers(-bound, bound + 1, size=2))
        terms[(a, b)] = complex(rng.normal(), rng.normal())
    return FourierObservable(coefficients=terms)


def check_level(N: int, seed: int, pairs: int = 100) -> dict:
    progress.update_status(CHECK_NAME, f"N={N}", "Checking algebra")
    rng = np.random.default_rng([seed, N])
    ctx = make_context(N)

    morphism = 0.0
    hermiticity = 0.0
    trace = 0.0
    norm_ok = True
    inner = min(N - 1, 5)
    for _ in range(pairs):
        f, g = random_observable(rng, 5), random_observable(rng, 5)
        product = quantize(ctx, f).matrix @ quantize(ctx, g).matrix
        morphism = max(morphism, float(np.linalg.norm(quantize(ctx, star_product(f, g, ctx.hbar)).matrix - product)))

        real = f + f.conjugate()
        op = quantize(ctx, real).matrix
        hermiticity = max(hermiticity, float(np.linalg.norm(op - op.conj().T)))

        low = random_observable(rng, inner)
        trace = max(trace, abs(trace_average(ctx, low) - classical_average(low)))
        norm_ok = norm_ok and operator_norm(quantize(ctx, g)) <= coefficient_norm(g) + 1e-9

    x_hat = quantize(ctx, FourierObservable.monomial(1, 0)).matrix
    y_hat = quantize(ctx, FourierObservable.monomial(0, 1)).matrix
    commutation = float(np.linalg.norm(x_hat @ y_hat - ctx.A**2 * y_hat @ x_hat))

    progress.update_status(CHECK_NAME, f"N={N}", "Done")
    return {
        "N": N,
        "morphism_defect": morphism,
        "hermiticity_defect": hermiticity,
        "commutation_defect": commutation,
        "trace_defect": trace,
        "xn_value": trace_average(ctx, FourierObservable.monomial(N, 0)).real,
        "commutant_dim": commutant_dimension(ctx) if N <= 8 else None,
        "norm_ok": norm_ok,
    }


def level_passes(record: dict) -> bool:
    return (
        record["morphism_defect"] <= MORPHISM_TOL
        and record["hermiticity_defect"] <= EXACT_TOL
        and record["commutation_defect"] <= EXACT_TOL
        and record["trace_defect"] <= EXACT_TOL
        and abs(record["xn_value"] - 1) <= EXACT_TOL
        and record["commutant_dim"] in (None, 1)
        and record["norm_ok"]
    )


def run_torus_check(config: RunConfig) -> CheckResult:
    """Sweep the quantization invariants over N in [n_min, n_max]."""
    levels = list(range(config.n_min, config.n_max + 1))
    with ThreadPoolExecutor(max_workers=max_workers()) as executor:
        records = list(executor.map(lambda N: check_level(N, config.seed), levels))

    failed = [record["N"] for record in records if not level_passes(record)]
    findings = [f"invariant violated at N = {', '.join(map(str, failed))}"] if failed else []
    return CheckResult(name=CHECK_NAME, records=records, passed=not failed, findings=findings)

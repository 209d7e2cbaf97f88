import statistics

from src.data.models import CheckResult, ErgodicityRecord, RunConfig
from src.experiments.ergodicity import ergodicity_report, fraction_within, scar_outliers
from src.geometry.states import default_test_family
from src.utils.config import max_workers
from src.utils.progress import progress

CHECK_NAME = "catmap"
BARYCENTER_TOL = 1e-10
SMALL_PRIMES = (11, 41)
LARGE_PRIMES = (150, 250)
TIGHT_EPS = 0.05


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def primes_between(low: int, high: int) -> list[int]:
    return [n for n in range(low, high + 1) if is_prime(n)]


def default_levels() -> list[int]:
    return primes_between(*SMALL_PRIMES) + primes_between(*LARGE_PRIMES)


def trend_summary(report: list[ErgodicityRecord], eps: float) -> dict | None:
    """Medians of fraction (at eps and at TIGHT_EPS) and of mean block distance over the small and the large prime ranges."""
    small = [r for r in report if SMALL_PRIMES[0] <= r.N <= SMALL_PRIMES[1] and is_prime(r.N)]
    large = [r for r in report if LARGE_PRIMES[0] <= r.N <= LARGE_PRIMES[1] and is_prime(r.N)]
    if not small or not large:
        return None
    return {
        "fraction_small": statistics.median(fraction_within(r, eps) for r in small),
        "fraction_large": statistics.median(fraction_within(r, eps) for r in large),
        "tight_fraction_small": statistics.median(fraction_within(r, TIGHT_EPS) for r in small),
        "tight_fraction_large": statistics.median(fraction_within(r, TIGHT_EPS) for r in large),
        "distance_small": statistics.median(r.mean_distance for r in small),
        "distance_large": statistics.median(r.mean_distance for r in large),
    }


def trend_violations(trend: dict) -> list[str]:
    """Ways in which the large primes fail to sit closer to the classical state than the small ones."""
    violations = []
    if trend["fraction_large"] < trend["fraction_small"]:
        violations.append(f"median fraction fell from {trend['fraction_small']:.4g} to {trend['fraction_large']:.4g}")
    if trend["tight_fraction_large"] <= trend["tight_fraction_small"]:
        violations.append(f"median fraction at eps = {TIGHT_EPS} did not grow ({trend['tight_fraction_small']:.4g} vs {trend['tight_fraction_large']:.4g})")
    if trend["distance_large"] >= trend["distance_small"]:
        violations.append(f"median mean distance did not shrink ({trend['distance_small']:.4g} vs {trend['distance_large']:.4g})")
    return violations


def run_catmap(config: RunConfig) -> CheckResult:
    """Ergodicity report for the configured cat map, with scars above the threshold attached per level."""
    levels = list(config.n_values) or default_levels()
    family = default_test_family(config.family_size)

    progress.update_status(CHECK_NAME, f"{len(levels)} levels", "Decomposing cat maps")
    report = ergodicity_report(config.matrix, levels, family, config.eps, ceiling=config.ceiling, max_workers=max_workers())
    scars = scar_outliers(report, config.scar_threshold)
    progress.update_status(CHECK_NAME, None, "Done")

    records = []
    for record in report:
        records.append(
            {
                "N": record.N,
                "fraction": record.weighted_fraction_within_eps,
                "barycenter_distance": record.barycenter_distance,
                "n_outliers": len(record.outliers),
                "mean_distance": record.mean_distance,
                "barycenter_defect": record.barycenter_defect,
                "quantum_period": record.quantum_period,
                "outliers": record.outliers,
                "ceiling_violations": record.ceiling_violations,
                "scars": [{"index": s.index, "eigenvalue": s.eigenvalue, "dimension": s.dimension, "distance": s.distance, "values": s.values} for s in scars if s.N == record.N],
            }
        )

    failed = [record.N for record in report if record.barycenter_defect > BARYCENTER_TOL]
    findings = []
    if failed:
        findings.append(f"barycenter identity violated at N = {', '.join(map(str, failed))}")
    violations = [(record.N, v) for record in report for v in record.ceiling_violations]
    if violations:
        findings.append(f"{len(violations)} outlier blocks exceed the dimension ceiling {config.ceiling}")
    trend = trend_summary(report, config.eps)
    broken = trend_violations(trend) if trend is not None else []
    if trend is not None:
        findings.append(
            f"median fraction {trend['fraction_small']:.4g} (N in {SMALL_PRIMES}) vs {trend['fraction_large']:.4g} (N in {LARGE_PRIMES}); "
            f"at eps = {TIGHT_EPS} {trend['tight_fraction_small']:.4g} vs {trend['tight_fraction_large']:.4g}; "
            f"median mean distance {trend['distance_small']:.4g} vs {trend['distance_large']:.4g}"
        )
        findings.extend(f"trend violated: {message}" for message in broken)
    findings.append(f"{len(scars)} blocks farther than {config.scar_threshold} from the classical state")
    return CheckResult(name=CHECK_NAME, records=records, passed=not failed and not broken, findings=findings)

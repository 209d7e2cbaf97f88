import math

from mpmath.ctx_mp import MPContext

from src.data.models import SpinCharacter, SpinDimensionEntry, SpinDimensionTable

INTEGRALITY_TOL = 1e-6


class NonIntegralDimensionError(ValueError):
    pass


def _working_digits(g: int, p: int) -> int:
    """Decimal digits needed to resolve the Verlinde sum to well below 1e-6.

    Uses sin(2 pi j / p) >= 4 / p on the summation range, so the sum is at most p (p/4)^(3g-3).
    """
    magnitude = math.log10(p) + max(0, 3 * g - 3) * math.log10(max(p / 4, 1.0))
    return 30 + math.ceil(magnitude)


def verlinde_dim(g: int, p: int) -> int:
    """dim V_p(Sigma_g) = (p/4)^(g-1) sum_j sin(2 pi j/p)^(2-2g), j up to p/2 - 1 (even p) or (p-1)/2 (odd p)."""
    if g < 0:
        raise ValueError(f"genus must be nonnegative, got {g}")
    if p < 3:
        raise ValueError(f"level p must be at least 3, got {p}")

    mp = MPContext()
    mp.dps = _working_digits(g, p)
    top = p // 2 - 1 if p % 2 == 0 else (p - 1) // 2
    total = mp.fsum(mp.sin(2 * mp.pi * j / p) ** (2 - 2 * g) for j in range(1, top + 1))
    value = (mp.mpf(p) / 4) ** (g - 1) * total

    nearest = mp.nint(value)
    if abs(value - nearest) > INTEGRALITY_TOL:
        raise NonIntegralDimensionError(f"Verlinde sum for g={g}, p={p} is {mp.nstr(value, 20)}, not an integer")
    return int(nearest)


def spin_character_classes(g: int, r: int) -> list[tuple[SpinCharacter, int]]:
    """Character classes with multiplicities; 4^g characters in total."""
    if r % 2:
        return [(SpinCharacter(is_zero=True), 1), (SpinCharacter(is_zero=False), 4**g - 1)]
    return [
        (SpinCharacter(is_zero=False, arf=0), 2 ** (g - 1) * (2**g + 1)),
        (SpinCharacter(is_zero=False, arf=1), 2 ** (g - 1) * (2**g - 1)),
    ]


def _exact_quotient(numerator: int, g: int, r: int, label: str) -> int:
    quotient, remainder = divmod(numerator, 4**g)
    if remainder:
        raise NonIntegralDimensionError(f"dimension of the {label} summand at g={g}, r={r} is {numerator}/4^{g}, not an integer")
    return quotient


def spin_dimension_table(g: int, r: int) -> SpinDimensionTable:
    """Dimensions of the character summands V_4r(Sigma_g, chi)."""
    if g < 1:
        raise ValueError(f"genus must be at least 1, got {g}")
    if r < 2:
        raise ValueError(f"r must be at least 2, got {r}")

    total = verlinde_dim(g, 4 * r)
    shift = r ** (g - 1)
    entries = []
    for character, multiplicity in spin_character_classes(g, r):
        if character.arf is None:
            nonzero = _exact_quotient(total - shift, g, r, "chi!=0")
            dimension = nonzero + shift if character.is_zero else nonzero
        else:
            sign = 1 if character.arf == 0 else -1
            dimension = _exact_quotient(total + shift * (sign * 2**g - 1), g, r, character.label)
        entries.append(SpinDimensionEntry(character=character, multiplicity=multiplicity, dimension=dimension))

    table = SpinDimensionTable(genus=g, r=r, total=total, entries=tuple(entries))
    if not table.partition_ok:
        raise ValueError(f"spin summands do not add up to dim V_{4 * r}(Sigma_{g}) = {total}")
    return table


def asymptotic_volume_estimate(g: int, r_values: list[int]) -> tuple[list[float], list[float]]:
    """Normalised dimensions dim V_4r / (4r)^(3g-3) and the share of one nonzero-character summand."""
    if g < 1:
        raise ValueError(f"genus must be at least 1, got {g}")
    if any(r < 2 for r in r_values) or any(b <= a for a, b in zip(r_values, r_values[1:])):
        raise ValueError(f"r values must be increasing and at least 2, got {r_values}")

    estimates, ratios = [], []
    for r in r_values:
        table = spin_dimension_table(g, r)
        estimates.append(table.total / (4 * r) ** (3 * g - 3))
        # chi != 0 for odd r, the arf = 1 class for even r
        entry = table.entries[-1]
        ratios.append(entry.dimension / table.total)
    return estimates, ratios

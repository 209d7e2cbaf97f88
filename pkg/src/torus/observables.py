import cmath
import math

from src.data.models import FourierObservable, SL2Matrix, TorusPoint

X = FourierObservable.monomial(1, 0)
Y = FourierObservable.monomial(0, 1)
ONE = FourierObservable.constant(1.0)


def evaluate(f: FourierObservable, p: TorusPoint) -> complex:
    """Evaluate f at a point given in full turns."""
    return complex(sum(c * cmath.exp(2j * math.pi * (a * p.theta1 + b * p.theta2)) for (a, b), c in f.coefficients.items()))


def _symplectic_pairing(a: int, b: int, a2: int, b2: int) -> int:
    return b2 * a - a2 * b


def star_product(f: FourierObservable, g: FourierObservable, hbar: float) -> FourierObservable:
    """Moyal-type product X^aY^b * X^a'Y^b' = exp(i pi hbar (b'a - a'b)) X^(a+a')Y^(b+b')."""
    product: dict[tuple[int, int], complex] = {}
    for (a, b), c in f.coefficients.items():
        for (a2, b2), c2 in g.coefficients.items():
            key = (a + a2, b + b2)
            phase = cmath.exp(1j * math.pi * hbar * _symplectic_pairing(a, b, a2, b2))
            product[key] = product.get(key, 0j) + phase * c * c2
    return FourierObservable(coefficients=product)


def pointwise_product(f: FourierObservable, g: FourierObservable) -> FourierObservable:
    """The hbar = 0 case of star_product."""
    return f * g


def poisson_bracket(f: FourierObservable, g: FourierObservable) -> FourierObservable:
    bracket: dict[tuple[int, int], complex] = {}
    for (a, b), c in f.coefficients.items():
        for (a2, b2), c2 in g.coefficients.items():
            key = (a + a2, b + b2)
            bracket[key] = bracket.get(key, 0j) - 2 * math.pi * (a * b2 - a2 * b) * c * c2
    return FourierObservable(coefficients=bracket)


def scaled_commutator(f: FourierObservable, g: FourierObservable, hbar: float) -> FourierObservable:
    """(i/hbar)(f*g - g*f); tends to the Poisson bracket as hbar -> 0."""
    return (star_product(f, g, hbar) - star_product(g, f, hbar)).scale(1j / hbar)


def classical_average(f: FourierObservable) -> complex:
    return f.coefficient(0, 0)


def exponent_map(phi: SL2Matrix) -> tuple[int, int, int, int]:
    """Matrix acting on exponent columns (a, b) under f -> f o phi.

    This is P phi^-1 P with P = diag(1, -1); it is an anti-homomorphism, so
    pullbacks compose as a right action and the Egorov identity holds exactly.
    """
    return (phi.m22, phi.m12, phi.m21, phi.m11)


def pullback_sl2(f: FourierObservable, phi: SL2Matrix) -> FourierObservable:
    p, q, r, s = exponent_map(phi)
    return FourierObservable(coefficients={(p * a + q * b, r * a + s * b): c for (a, b), c in f.coefficients.items()})


def to_json(f: FourierObservable) -> dict:
    return {"terms": [{"a": a, "b": b, "re": c.real, "im": c.imag} for a, b, c in f.terms()]}


def from_json(payload: dict) -> FourierObservable:
    coefficients: dict[tuple[int, int], complex] = {}
    for term in payload.get("terms", []):
        key = (int(term["a"]), int(term["b"]))
        if key in coefficients:
            raise ValueError(f"duplicate exponent {key} in observable terms")
        coefficients[key] = complex(term.get("re", 0.0), term.get("im", 0.0))
    return FourierObservable(coefficients=coefficients)

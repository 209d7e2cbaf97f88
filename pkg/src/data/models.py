import cmath
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

Exponent = tuple[int, int]
Letter = Literal["S", "S-1", "T", "T-1"]


class SL2Matrix(BaseModel):
    model_config = {"frozen": True}

    m11: int
    m12: int
    m21: int
    m22: int

    @model_validator(mode="after")
    def check_determinant(self):
        det = self.m11 * self.m22 - self.m12 * self.m21
        if det != 1:
            raise ValueError(f"determinant must be 1, got {det} for {self.entries()}")
        return self

    @classmethod
    def of(cls, m11: int, m12: int, m21: int, m22: int) -> "SL2Matrix":
        return cls(m11=m11, m12=m12, m21=m21, m22=m22)

    @classmethod
    def identity(cls) -> "SL2Matrix":
        return cls.of(1, 0, 0, 1)

    @classmethod
    def S(cls) -> "SL2Matrix":
        return cls.of(0, 1, -1, 0)

    @classmethod
    def T(cls) -> "SL2Matrix":
        return cls.of(1, -1, 0, 1)

    @classmethod
    def parse(cls, text: str) -> "SL2Matrix":
        """Parse "m11,m12,m21,m22"."""
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"matrix must have 4 comma-separated integers, got {text!r}")
        try:
            entries = [int(part) for part in parts]
        except ValueError:
            raise ValueError(f"matrix entries must be integers, got {text!r}")
        return cls.of(*entries)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.m11, self.m12, self.m21, self.m22)

    def trace(self) -> int:
        return self.m11 + self.m22

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix.of(self.m22, -self.m12, -self.m21, self.m11)

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix.of(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __str__(self) -> str:
        return f"[[{self.m11},{self.m12}],[{self.m21},{self.m22}]]"


class TorusPoint(BaseModel):
    model_config = {"frozen": True}

    theta1: float
    theta2: float

    @field_validator("theta1", "theta2")
    @classmethod
    def reduce_mod_one(cls, value: float) -> float:
        reduced = value % 1.0
        # float rounding can land exactly on 1.0 for tiny negative inputs
        return 0.0 if reduced >= 1.0 else reduced


class FourierObservable(BaseModel):
    """A trigonometric polynomial sum c(a,b) X^a Y^b on the torus, stored sparsely."""

    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    coefficients: dict[Exponent, complex] = Field(default_factory=dict)

    @field_validator("coefficients", mode="before")
    @classmethod
    def drop_zero_terms(cls, value):
        cleaned = {}
        for (a, b), c in dict(value).items():
            c = complex(c)
            if c != 0:
                cleaned[(int(a), int(b))] = c
        return cleaned

    @classmethod
    def constant(cls, c: complex = 1.0) -> "FourierObservable":
        return cls(coefficients={(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c: complex = 1.0) -> "FourierObservable":
        return cls(coefficients={(a, b): c})

    @classmethod
    def from_terms(cls, terms: dict[Exponent, complex]) -> "FourierObservable":
        return cls(coefficients=terms)

    @property
    def is_real(self) -> bool:
        for (a, b), c in self.coefficients.items():
            partner = self.coefficients.get((-a, -b), 0j)
            if abs(partner - c.conjugate()) > 1e-15 * max(1.0, abs(c)):
                return False
        return True

    def coefficient(self, a: int, b: int) -> complex:
        return self.coefficients.get((a, b), 0j)

    def terms(self) -> list[tuple[int, int, complex]]:
        return [(a, b, c) for (a, b), c in sorted(self.coefficients.items())]

    def max_degree(self) -> int:
        return max((max(abs(a), abs(b)) for a, b in self.coefficients), default=0)

    def conjugate(self) -> "FourierObservable":
        return FourierObservable(coefficients={(-a, -b): c.conjugate() for (a, b), c in self.coefficients.items()})

    def __add__(self, other: "FourierObservable") -> "FourierObservable":
        merged = dict(self.coefficients)
        for key, c in other.coefficients.items():
            merged[key] = merged.get(key, 0j) + c
        return FourierObservable(coefficients=merged)

    def __neg__(self) -> "FourierObservable":
        return FourierObservable(coefficients={key: -c for key, c in self.coefficients.items()})

    def __sub__(self, other: "FourierObservable") -> "FourierObservable":
        return self + (-other)

    def scale(self, factor: complex) -> "FourierObservable":
        return FourierObservable(coefficients={key: factor * c for key, c in self.coefficients.items()})

    def __mul__(self, other) -> "FourierObservable":
        """Pointwise product with another observable (exponents convolve), or scaling by a number."""
        if not isinstance(other, FourierObservable):
            return self.scale(complex(other))
        product: dict[Exponent, complex] = {}
        for (a, b), c in self.coefficients.items():
            for (a2, b2), c2 in other.coefficients.items():
                product[(a + a2, b + b2)] = product.get((a + a2, b + b2), 0j) + c * c2
        return FourierObservable(coefficients=product)

    def __rmul__(self, other) -> "FourierObservable":
        return self.scale(complex(other))


class QuantizationContext(BaseModel):
    model_config = {"frozen": True}

    N: int
    A: complex
    hbar: float

    @model_validator(mode="after")
    def check_parameters(self):
        if self.N < 1:
            raise ValueError(f"level N must be positive, got {self.N}")
        if abs(abs(self.A) - 1.0) > 1e-15:
            raise ValueError(f"deformation parameter must have unit modulus, got |A| = {abs(self.A)!r}")
        if abs(self.A - cmath.exp(1j * math.pi * self.hbar)) > 1e-12:
            raise ValueError(f"A = {self.A} does not match exp(i pi hbar) for hbar = {self.hbar}")
        return self

    @property
    def order(self) -> int:
        """Multiplicative order of A."""
        return self.N if self.N % 2 else 2 * self.N

    def power(self, k):
        """A**k for an integer or an integer array, reduced modulo the order of A first."""
        reduced = np.mod(np.asarray(k, dtype=np.int64), self.order)
        return np.exp(1j * np.pi * self.hbar * reduced)


class QuantumOperator(BaseModel):
    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    context: QuantizationContext
    matrix: np.ndarray

    @model_validator(mode="after")
    def check_shape(self):
        n = self.context.N
        if self.matrix.shape != (n, n):
            raise ValueError(f"operator must be {n}x{n}, got shape {self.matrix.shape}")
        self.matrix.flags.writeable = False
        return self


class SL2Word(BaseModel):
    model_config = {"frozen": True}

    letters: tuple[Letter, ...]
    source: SL2Matrix

    @model_validator(mode="after")
    def check_product(self):
        if self.evaluate() != self.source:
            raise ValueError(f"word {self.letters} does not evaluate to {self.source}")
        return self

    def evaluate(self) -> SL2Matrix:
        generators = {
            "S": SL2Matrix.S(),
            "S-1": SL2Matrix.S().inverse(),
            "T": SL2Matrix.T(),
            "T-1": SL2Matrix.T().inverse(),
        }
        product = SL2Matrix.identity()
        for letter in self.letters:
            product = product @ generators[letter]
        return product


class WeilOperator(BaseModel):
    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    context: QuantizationContext
    matrix: np.ndarray
    source: SL2Matrix

    @model_validator(mode="after")
    def check_unitary(self):
        n = self.context.N
        if self.matrix.shape != (n, n):
            raise ValueError(f"operator must be {n}x{n}, got shape {self.matrix.shape}")
        defect = np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(n))
        if defect > 1e-9:
            raise ValueError(f"rho_{n}({self.source}) is not unitary: defect {defect:.3e}")
        self.matrix.flags.writeable = False
        return self


class TestFamily(BaseModel):
    model_config = {"frozen": True}
    __test__ = False

    family_id: str
    observables: tuple[FourierObservable, ...]

    @model_validator(mode="after")
    def check_entries(self):
        if not self.observables:
            raise ValueError("test family must not be empty")
        if self.observables[0] != FourierObservable.constant(1.0):
            raise ValueError("first entry of a test family must be the constant 1")
        for i, f in enumerate(self.observables):
            for j in range(i):
                if self.observables[j] == f:
                    raise ValueError(f"test family entries {j + 1} and {i + 1} coincide")
        return self

    @property
    def size(self) -> int:
        return len(self.observables)

    @property
    def weights(self) -> np.ndarray:
        return 0.5 ** np.arange(1, self.size + 1)


class State(BaseModel):
    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    family: TestFamily
    values: tuple[complex, ...]

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, value):
        return tuple(complex(v) for v in value)

    @model_validator(mode="after")
    def check_normalized(self):
        if len(self.values) != self.family.size:
            raise ValueError(f"state has {len(self.values)} values for a family of size {self.family.size}")
        if abs(self.values[0] - 1.0) > 1e-9:
            raise ValueError(f"state is not normalized: tau(1) = {self.values[0]}")
        return self

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def to_json(self) -> dict:
        return {"family_id": self.family.family_id, "values": [[v.real, v.imag] for v in self.values]}


class WeightedCloud(BaseModel):
    model_config = {"frozen": True}

    points: tuple[State, ...]
    weights: tuple[float, ...]

    @model_validator(mode="after")
    def check_weights(self):
        if not self.points:
            raise ValueError("cloud must contain at least one point")
        if len(self.points) != len(self.weights):
            raise ValueError(f"{len(self.points)} points but {len(self.weights)} weights")
        if any(w < 0 for w in self.weights):
            raise ValueError("cloud weights must be nonnegative")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"cloud weights must sum to 1, got {math.fsum(self.weights)!r}")
        family_id = self.points[0].family.family_id
        if any(p.family.family_id != family_id for p in self.points):
            raise ValueError("all cloud points must share one test family")
        return self

    @property
    def family(self) -> TestFamily:
        return self.points[0].family

    def value_matrix(self) -> np.ndarray:
        return np.array([p.values for p in self.points], dtype=complex)

    def to_json(self) -> dict:
        return {"points": [{"state": p.to_json(), "alpha": w} for p, w in zip(self.points, self.weights)]}


class SeparatingFunctional(BaseModel):
    model_config = {"frozen": True}

    coefficients: tuple[float, ...]
    norm: float
    a: float
    c: float

    def evaluate(self, state: State) -> float:
        stacked = np.column_stack([state.as_array().real, state.as_array().imag]).ravel()
        return float(np.dot(self.coefficients, stacked))


class EigenBlock(BaseModel):
    model_config = {"frozen": True, "arbitrary_types_allowed": True}

    eigenvalue: complex
    basis: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]


class EigenspaceDecomposition(BaseModel):
    model_config = {"frozen": True}

    blocks: tuple[EigenBlock, ...]
    cluster_tol: float

    @property
    def N(self) -> int:
        return sum(block.dimension for block in self.blocks)


class BlockSummary(BaseModel):
    model_config = {"frozen": True}

    index: int
    eigenvalue: complex
    dimension: int
    distance: float
    values: tuple[complex, ...]


class ErgodicityRecord(BaseModel):
    model_config = {"frozen": True}

    N: int
    weighted_fraction_within_eps: float = Field(ge=0.0, le=1.0)
    barycenter_distance: float
    mean_distance: float
    barycenter_defect: float
    quantum_period: int
    outliers: tuple[tuple[int, float, int], ...]
    ceiling_violations: tuple[tuple[int, float, int], ...] = ()
    blocks: tuple[BlockSummary, ...] = ()


class ScarBlock(BaseModel):
    model_config = {"frozen": True}

    N: int
    index: int
    eigenvalue: complex
    dimension: int
    distance: float
    values: tuple[complex, ...]


class SpinCharacter(BaseModel):
    model_config = {"frozen": True}

    is_zero: bool
    arf: Literal[0, 1] | None = None

    @property
    def label(self) -> str:
        if self.arf is not None:
            return f"arf={self.arf}"
        return "chi=0" if self.is_zero else "chi!=0"


class SpinDimensionEntry(BaseModel):
    model_config = {"frozen": True}

    character: SpinCharacter
    multiplicity: int
    dimension: int


class SpinDimensionTable(BaseModel):
    model_config = {"frozen": True}

    genus: int
    r: int
    total: int
    entries: tuple[SpinDimensionEntry, ...]

    @model_validator(mode="after")
    def check_entries(self):
        for entry in self.entries:
            if entry.dimension < 0:
                raise ValueError(f"negative dimension {entry.dimension} for {entry.character.label} at g={self.genus}, r={self.r}")
        if sum(e.multiplicity for e in self.entries) != 4**self.genus:
            raise ValueError(f"character multiplicities do not add up to 4^{self.genus}")
        return self

    @property
    def level(self) -> int:
        return 4 * self.r

    @property
    def partition_ok(self) -> bool:
        return sum(e.multiplicity * e.dimension for e in self.entries) == self.total


class RunConfig(BaseModel):
    model_config = {"frozen": True}

    subcommand: str
    seed: int = 20240917
    output: str | None = None
    format: Literal["json", "csv"] = "json"
    n_min: int = 3
    n_max: int = 40
    n_values: tuple[int, ...] = ()
    matrix: SL2Matrix = SL2Matrix.of(2, 1, 1, 1)
    eps: float = 0.3
    family_size: int = 25
    ceiling: float = 0.1
    scar_threshold: float = 0.3
    trials: int = 1000
    r_max: int = 50
    genus: int = 2
    p: int | None = None
    r: int | None = None
    r_values: tuple[int, ...] = (100, 200, 500)

    @model_validator(mode="after")
    def check_ranges(self):
        largest = max((self.n_max, *self.n_values))
        if largest > 2048:
            raise ValueError(f"N ranges are capped at 2048, got {largest}")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ValueError(f"invalid N range [{self.n_min}, {self.n_max}]")
        if any(n < 1 for n in self.n_values):
            raise ValueError("N values must be positive")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.family_size < 1:
            raise ValueError(f"family size must be positive, got {self.family_size}")
        min_genus = 1 if self.subcommand in ("spin", "asymptotics") else 0
        if self.genus < min_genus:
            raise ValueError(f"{self.subcommand} needs genus at least {min_genus}, got {self.genus}")
        if self.p is not None and self.p < 3:
            raise ValueError(f"level p must be at least 3, got {self.p}")
        if self.subcommand == "spin" and self.r is None and self.p is not None and self.p < 8:
            raise ValueError(f"spin needs a level of at least 8, got {self.p}")
        if self.r is not None and self.r < 2:
            raise ValueError(f"r must be at least 2, got {self.r}")
        if not self.r_values:
            raise ValueError("r values must not be empty")
        if any(r < 2 for r in self.r_values) or any(b <= a for a, b in zip(self.r_values, self.r_values[1:])):
            raise ValueError(f"r values must be increasing and at least 2, got {list(self.r_values)}")
        return self


class CheckResult(BaseModel):
    name: str
    records: list[dict]
    passed: bool
    findings: list[str] = Field(default_factory=list)
    rows: list[dict] | None = None

"""Exact arithmetic over prime fields GF(q).

Small prime moduli only (the numerics in this package live over F_2..F_257);
elements are immutable and freely shareable.  Exponent 0 always yields 1,
including 0^0 = 1, so that a zero exponent means "variable absent" when these
elements are used to evaluate monomials.
"""

from dataclasses import dataclass

from .errors import UsageError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(q) for a prime modulus q."""

    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise UsageError(f"field modulus must be prime, got {self.q}")

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value % self.q, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.q)]

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    """A residue in [0, q) belonging to a PrimeField."""

    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise UsageError(
                f"value {self.value} out of range for {self.field}"
            )

    def _check_same_field(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise UsageError(f"expected FieldElement, got {type(other).__name__}")
        if other.field.q != self.field.q:
            raise UsageError(
                f"mixed fields: {self.field} and {other.field}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        return FieldElement((self.value + other.value) % self.field.q, self.field)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        return FieldElement((self.value - other.value) % self.field.q, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        return FieldElement((self.value * other.value) % self.field.q, self.field)

    def __neg__(self) -> "FieldElement":
        return FieldElement((-self.value) % self.field.q, self.field)

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            raise UsageError("negative exponents are not supported")
        # pow(0, 0, q) == 1, which is exactly the convention we need
        return FieldElement(pow(self.value, exponent, self.field.q), self.field)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise UsageError("zero has no multiplicative inverse")
        return FieldElement(pow(self.value, self.field.q - 2, self.field.q), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def power(a: FieldElement, exponent: int) -> FieldElement:
    return a ** exponent

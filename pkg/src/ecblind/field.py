"""Modular integer arithmetic for the coordinate field and the scalar ring.

Values are Python ints, so any modulus width works (521-bit curves included).
Nothing here is constant time; do not use it where timing leaks matter.
"""

from __future__ import annotations

from dataclasses import dataclass


class ModulusMismatch(ValueError):
    """Two residues with different moduli were combined."""


class NotInvertible(ZeroDivisionError):
    """The residue has no multiplicative inverse."""


def inverse(value: int, modulus: int) -> int:
    """Inverse of ``value`` mod ``modulus`` by the extended Euclidean algorithm.

    Delegates to ``pow(value, -1, modulus)``, which runs extended Euclid in C.
    """
    value %= modulus
    if value == 0:
        raise NotInvertible(f"0 has no inverse mod {modulus}")
    try:
        return pow(value, -1, modulus)
    except ValueError:
        raise NotInvertible(f"{value} is not invertible mod {modulus}") from None


def fermat_inverse(value: int, prime: int) -> int:
    """Inverse via a^(p-2); valid for prime moduli only. Used as a cross-check."""
    value %= prime
    if value == 0:
        raise NotInvertible(f"0 has no inverse mod {prime}")
    return pow(value, prime - 2, prime)


def byte_length(modulus: int) -> int:
    return (modulus.bit_length() + 7) // 8


@dataclass(frozen=True, slots=True)
class ModInt:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: ModInt) -> None:
        if not isinstance(other, ModInt):
            raise TypeError(f"expected ModInt, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"moduli differ: {self.modulus} vs {other.modulus}")

    def __add__(self, other: ModInt) -> ModInt:
        self._check(other)
        return ModInt((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: ModInt) -> ModInt:
        self._check(other)
        return ModInt((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: ModInt) -> ModInt:
        self._check(other)
        return ModInt(self.value * other.value % self.modulus, self.modulus)

    def __neg__(self) -> ModInt:
        return ModInt(-self.value % self.modulus, self.modulus)

    def __pow__(self, e: int) -> ModInt:
        if e < 0:
            raise ValueError("negative exponent; use inv()")
        return ModInt(pow(self.value, e, self.modulus), self.modulus)

    def inv(self) -> ModInt:
        return ModInt(inverse(self.value, self.modulus), self.modulus)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"ModInt({self.value} mod {self.modulus})"


def mod_add(a: ModInt, b: ModInt) -> ModInt:
    return a + b


def mod_sub(a: ModInt, b: ModInt) -> ModInt:
    return a - b


def mod_mul(a: ModInt, b: ModInt) -> ModInt:
    return a * b


def mod_inv(a: ModInt) -> ModInt:
    return a.inv()


def mod_pow(a: ModInt, e: int) -> ModInt:
    """Square-and-multiply exponentiation, O(log e) multiplications."""
    return a**e


def reduce_from_bytes(data: bytes, modulus: int) -> ModInt:
    """Interpret ``data`` as a big-endian unsigned integer and reduce it."""
    return ModInt(int.from_bytes(data, "big") % modulus, modulus)

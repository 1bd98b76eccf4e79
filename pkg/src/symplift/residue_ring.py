"""Arithmetic in Z/l^k Z for a prime l and a small exponent k.

Values are stored as canonical least non-negative representatives, so equality
and hashing are bit-exact.  Unit inversion goes through the extended Euclid on
the integer lift (Python's three-argument pow), not Hensel iteration: the
moduli here are tiny and simplicity wins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonUnit, NotPrime, RangeError

MAX_K = 12
MAX_L = 97
WIDTH_CAP = 2**63


def is_prime(n: int) -> bool:
    """Deterministic trial division; supported primes are at most 97."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Modulus:
    """A prime power l^k: the coefficient ring Z/l^k Z of all arithmetic here.

    Construct through make_modulus, which validates the primality of l and the
    width caps (k <= 12, l^k < 2^63) that keep every product exact.
    """

    l: int
    k: int
    value: int

    def reduce_to(self, j: int) -> "Modulus":
        """The modulus l^j one or more levels below; 1 <= j <= k."""
        if not 1 <= j <= self.k:
            raise RangeError(f"target level {j} outside 1..{self.k}")
        return Modulus(self.l, j, self.l**j)

    def __repr__(self) -> str:
        return f"Modulus({self.l}^{self.k})"


def make_modulus(l: int, k: int) -> Modulus:
    """Validated constructor for Modulus(l, k)."""
    if not isinstance(l, int) or not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if l > MAX_L:
        raise RangeError(f"prime {l} exceeds the supported bound {MAX_L}")
    if not isinstance(k, int) or k < 1 or k > MAX_K:
        raise RangeError(f"exponent k={k} outside 1..{MAX_K}")
    value = l**k
    if value >= WIDTH_CAP:
        raise RangeError(f"{l}^{k} exceeds the 2^63 width cap")
    return Modulus(l, k, value)


@dataclass(frozen=True)
class Residue:
    """An element of Z/l^k Z in canonical form (0 <= value < l^k)."""

    value: int
    modulus: Modulus

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", int(self.value) % self.modulus.value)

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.value})"


def res_inv(x: Residue) -> Residue:
    """Multiplicative inverse of a unit mod l^k."""
    m = x.modulus
    if x.value % m.l == 0:
        raise NonUnit(f"{x.value} shares the factor {m.l} with {m.value}")
    return Residue(pow(x.value, -1, m.value), m)


def res_reduce(x: Residue, j: int) -> Residue:
    """Reduce x from level k to level j, 1 <= j <= k."""
    return Residue(x.value, x.modulus.reduce_to(j))


def inv_int(value: int, modulus: Modulus) -> int:
    """Inverse of an integer unit mod l^k, as a plain int (pivot helper)."""
    if value % modulus.l == 0:
        raise NonUnit(f"{value} is not a unit mod {modulus.value}")
    return pow(value, -1, modulus.value)

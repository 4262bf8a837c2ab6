from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import galois

from .._errors import BadField, UnsupportedOrder


class FieldSpec:
    """
    FieldSpec - description of the finite field GF(p^d) behind a classical plane

    Prime fields need only the characteristic. Prime-power fields need an
    irreducible modulus of degree d over GF(p), given as coefficients from the
    highest degree down (the galois.Poly convention). Desk-scale orders
    4, 8, 9, 16, 25 and 27 have a built-in modulus, which a caller may
    override.

    Usage:
        ```python
        from hjelmslev import FieldSpec

        FieldSpec(5)                       # GF(5)
        FieldSpec(2, 2)                    # GF(4), modulus x^2 + x + 1
        FieldSpec(3, 2, modulus=[1, 0, 1]) # GF(9) with x^2 + 1
        FieldSpec.for_order(8)             # GF(2^3)
        ```
    """

    # order -> modulus coefficients, highest degree first
    BUILTIN_MODULI: Dict[int, Tuple[int, ...]] = {
        4: (1, 1, 1),
        8: (1, 0, 1, 1),
        9: (1, 2, 2),
        16: (1, 0, 0, 1, 1),
        25: (1, 4, 2),
        27: (1, 0, 2, 1),
    }

    def __init__(self, characteristic: int, degree: int = 1, modulus: Optional[Sequence[int]] = None):
        """
        Creates a field description, checking it against GF(p).

        Args:
            characteristic: The prime p
            degree: The extension degree d >= 1
            modulus: Coefficients of a monic degree-d polynomial irreducible over
                GF(p); defaults to the built-in table when d > 1

        Raises:
            BadField: If p is not prime, d < 1, or the modulus is missing,
                of the wrong degree, or reducible
        """
        if not isinstance(characteristic, int) or not galois.is_prime(characteristic):
            raise BadField(f"characteristic {characteristic!r} is not a prime")
        if degree < 1:
            raise BadField(f"degree must be at least 1, got {degree}")

        order = characteristic**degree
        if degree > 1 and modulus is None:
            if order not in self.BUILTIN_MODULI:
                raise BadField(
                    f"no built-in modulus for GF({characteristic}^{degree}); "
                    f"pass one explicitly (built-in orders: {sorted(self.BUILTIN_MODULI)})"
                )
            modulus = self.BUILTIN_MODULI[order]

        self.characteristic = characteristic
        self.degree = degree
        self.modulus: Optional[Tuple[int, ...]] = None
        if degree > 1:
            self.modulus = tuple(int(c) for c in modulus)
            self._check_modulus()

    def _check_modulus(self) -> None:
        p, d, coeffs = self.characteristic, self.degree, self.modulus
        if len(coeffs) != d + 1:
            raise BadField(f"modulus {list(coeffs)} does not have degree {d}")
        if coeffs[0] != 1:
            raise BadField(f"modulus {list(coeffs)} must be monic")
        if any(c < 0 or c >= p for c in coeffs):
            raise BadField(f"modulus coefficients must lie in [0, {p})")
        if not galois.Poly(list(coeffs), field=galois.GF(p)).is_irreducible():
            raise BadField(f"modulus {list(coeffs)} is reducible over GF({p})")

    @classmethod
    def for_order(cls, order: int, modulus: Optional[Sequence[int]] = None) -> "FieldSpec":
        """
        Field of the given prime-power order.

        Raises:
            UnsupportedOrder: If order is not a prime power
            BadField: If the modulus is unusable
        """
        if order < 2 or not galois.is_prime_power(order):
            raise UnsupportedOrder(f"order {order} is not a prime power; no field-based plane exists for it")
        primes, exponents = galois.factors(order)
        return cls(int(primes[0]), int(exponents[0]), modulus)

    @property
    def order(self) -> int:
        return self.characteristic**self.degree

    @cached_property
    def galois_field(self):
        """The galois FieldArray class for this field."""
        if self.degree == 1:
            return galois.GF(self.characteristic)
        try:
            poly = galois.Poly(list(self.modulus), field=galois.GF(self.characteristic))
            return galois.GF(self.order, irreducible_poly=poly)
        except ValueError as e:
            raise BadField(f"galois rejected GF({self.order}) with modulus {list(self.modulus)}: {e}") from e

    def __repr__(self):
        if self.modulus is None:
            return f"FieldSpec(GF({self.characteristic}))"
        return f"FieldSpec(GF({self.characteristic}^{self.degree}), modulus={list(self.modulus)})"

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.characteristic, self.degree, self.modulus) == (other.characteristic, other.degree, other.modulus)

    def __hash__(self):
        return hash((self.characteristic, self.degree, self.modulus))

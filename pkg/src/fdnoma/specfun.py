"""Scalar special functions and combinatorial enumeration.

Everything here is a pure function of its arguments; large factorial
arithmetic is done in log space with signs tracked separately so the
alternating series built on top of these primitives never overflows
prematurely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "Composition",
    "SeriesConvergenceError",
    "log_gamma",
    "pochhammer",
    "gauss_2f1",
    "multinomial_coeff",
    "log_multinomial",
    "compositions",
]

# Non-terminating hypergeometric series controls: the transformed argument
# lies in [0, 1), so decay is eventually geometric.
_2F1_MAX_TERMS = 10_000
_2F1_REL_TOL = 1e-15


class SeriesConvergenceError(ArithmeticError):
    """A series failed to meet its tolerance within the term budget.

    Carries the partial value and the number of terms accumulated so the
    caller can decide whether the partial result is still usable.
    """

    def __init__(self, message: str, partial_value: float, num_terms: int):
        super().__init__(message)
        self.partial_value = partial_value
        self.num_terms = num_terms


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of non-negative integers with a fixed sum."""

    parts: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.parts):
            raise ValueError(f"composition parts must be non-negative: {self.parts}")
        if sum(self.parts) != self.total:
            raise ValueError(
                f"composition parts {self.parts} sum to {sum(self.parts)}, not {self.total}"
            )

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Composition":
        parts = tuple(int(p) for p in parts)
        return cls(parts, sum(parts))


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a: float, i: int) -> float:
    """Rising factorial a (a+1) ... (a+i-1); empty product is 1."""
    if i < 0:
        raise ValueError(f"pochhammer order must be non-negative, got {i}")
    result = 1.0
    for k in range(i):
        result *= a + k
    return result


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0.

    When ``a`` is a non-positive integer the series terminates after
    |a| + 1 terms and is summed exactly.  Otherwise the Pfaff
    transformation

        2F1(a, b; c; z) = (1 - z)^(-b) 2F1(c - a, b; c; z / (z - 1))

    maps the argument into [0, 1) where the series converges; target
    relative accuracy is 1e-10.
    """
    if _is_nonpositive_integer(c):
        raise ValueError(f"2F1 parameter c must not be a non-positive integer, got {c}")
    if z > 0:
        raise ValueError(f"2F1 argument must satisfy z <= 0, got {z}")

    if _is_nonpositive_integer(a):
        n = int(round(-a))
        total = 0.0
        term = 1.0
        for k in range(n + 1):
            if k > 0:
                term *= (a + k - 1) * (b + k - 1) / ((c + k - 1) * k) * z
            total += term
        return total

    w = 0.0 if z == 0 else z / (z - 1.0)  # in [0, 1)
    aa = c - a
    total = 0.0
    term = 1.0
    for k in range(_2F1_MAX_TERMS):
        if k > 0:
            term *= (aa + k - 1) * (b + k - 1) / ((c + k - 1) * k) * w
        total += term
        if abs(term) <= _2F1_REL_TOL * abs(total):
            return (1.0 - z) ** (-b) * total
    scale = (1.0 - z) ** (-b)
    raise SeriesConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not converge within {_2F1_MAX_TERMS} terms",
        partial_value=scale * total,
        num_terms=_2F1_MAX_TERMS,
    )


def log_multinomial(comp: Composition) -> float:
    """ln of the multinomial coefficient total! / (l_1! ... l_k!)."""
    return math.lgamma(comp.total + 1) - math.fsum(
        math.lgamma(p + 1) for p in comp.parts
    )


def multinomial_coeff(comp: Composition) -> float:
    """Multinomial coefficient, evaluated in log space to avoid overflow."""
    return math.exp(log_multinomial(comp))


def compositions(total: int, num_parts: int) -> Iterator[Composition]:
    """All ordered tuples of ``num_parts`` non-negative integers summing to
    ``total``, in lexicographic order.

    Yields binomial(total + num_parts - 1, num_parts - 1) tuples.
    """
    if total < 0:
        raise ValueError(f"total must be non-negative, got {total}")
    if num_parts < 1:
        raise ValueError(f"num_parts must be positive, got {num_parts}")
    for parts in _composition_parts(total, num_parts):
        yield Composition(parts, total)


def _composition_parts(total: int, num_parts: int) -> Iterator[tuple[int, ...]]:
    if num_parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _composition_parts(total - first, num_parts - 1):
            yield (first,) + rest

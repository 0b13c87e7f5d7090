"""Core data model: exact arithmetic, game instances, subgame references.

A market instance is a finite list of consumer valuations (sorted from
highest to lowest) together with a deadline: the number of selling periods.
Every monetary quantity in this package is an exact non-negative rational,
so argmax ties between candidate prices resolve deterministically instead
of drifting on floating-point noise.

All types here are immutable after construction; instances can be shared
freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

# Exact rational money amount. ``fractions.Fraction`` already guarantees the
# lowest-terms, positive-denominator representation required here.
Rational = Fraction


class ValidationError(ValueError):
    """Bad input data. ``field`` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class SizeGuardError(RuntimeError):
    """An exhaustive computation was refused because the instance is too big."""


def parse_rational(raw: int | str) -> Rational:
    """Parse an exact rational from an int or a string like ``"21/11"``.

    Floats are rejected: a float literal in an input file would silently
    lose exactness, which defeats the point of rational arithmetic.
    """
    if isinstance(raw, bool):
        raise ValidationError("valuations", f"expected integer or 'p/q' string, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError("valuations", f"cannot parse rational {raw!r}: {exc}") from exc
    raise ValidationError("valuations", f"expected integer or 'p/q' string, got {type(raw).__name__}")


def format_rational(value: Rational) -> str:
    """Canonical string form: ``"260"`` for integers, ``"21/11"`` otherwise."""
    return str(value)


@dataclass(frozen=True)
class Instance:
    """A durable-good market: sorted valuations plus a selling deadline.

    Attributes:
        valuations: consumer values, sorted non-increasing, all >= 0 and
            at least one > 0. Consumer ``i`` (1-based) has value
            ``valuations[i - 1]``.
        periods: number of selling periods (the horizon), >= 1.
    """

    valuations: tuple[Rational, ...]
    periods: int

    def __post_init__(self):
        if not isinstance(self.periods, int) or isinstance(self.periods, bool):
            raise ValidationError("periods", f"must be an integer, got {self.periods!r}")
        if self.periods < 1:
            raise ValidationError("periods", f"must be >= 1, got {self.periods}")
        if len(self.valuations) == 0:
            raise ValidationError("valuations", "must contain at least one consumer")
        for value in self.valuations:
            if not isinstance(value, Fraction):
                raise ValidationError("valuations", f"expected Rational, got {value!r}")
            if value < 0:
                raise ValidationError("valuations", f"negative valuation {value}")
        if all(value == 0 for value in self.valuations):
            raise ValidationError("valuations", "all valuations are zero (degenerate market)")
        for a, b in zip(self.valuations, self.valuations[1:]):
            if a < b:
                raise ValidationError("valuations", "must be sorted non-increasing")

    @property
    def n(self) -> int:
        """Number of consumers."""
        return len(self.valuations)

    def suffix_values(self, first: int) -> tuple[Rational, ...]:
        """Values of consumers ``first..n`` (1-based), i.e. the low tail."""
        if not 1 <= first <= self.n + 1:
            raise IndexError(f"consumer index {first} out of range 1..{self.n + 1}")
        return self.valuations[first - 1 :]

    def lowest(self, count: int) -> tuple[Rational, ...]:
        """The ``count`` lowest valuations, still sorted non-increasing."""
        if not 0 <= count <= self.n:
            raise IndexError(f"count {count} out of range 0..{self.n}")
        return self.valuations[self.n - count :]


@dataclass(frozen=True)
class SubgameRef:
    """Locates a subgame: consumers ``first_consumer..n`` from ``start_period`` on.

    ``first_consumer == n + 1`` denotes the empty subgame (profit zero).
    """

    first_consumer: int
    start_period: int


def make_instance(values: Iterable[int | str | Rational], periods: int) -> Instance:
    """Build an instance from valuations in any order.

    The canonical form sorts valuations non-increasing; all consumer indices
    reported elsewhere refer to this sorted order.

    Raises:
        ValidationError: empty list, negative value, unparseable entry, or
            ``periods < 1``.
    """
    parsed = []
    for raw in values:
        if isinstance(raw, Fraction):
            parsed.append(raw)
        else:
            parsed.append(parse_rational(raw))
    if not parsed:
        raise ValidationError("valuations", "must contain at least one consumer")
    parsed.sort(reverse=True)
    return Instance(tuple(parsed), periods)


def total_surplus(inst: Instance) -> Rational:
    """Sum of all valuations: the perfect-price-discrimination benchmark."""
    return sum(inst.valuations, Fraction(0))


def instance_to_dict(inst: Instance) -> dict:
    """JSON-ready form: ``{"valuations": ["100", ...], "periods": 2}``."""
    return {
        "valuations": [format_rational(v) for v in inst.valuations],
        "periods": inst.periods,
    }


def instance_from_dict(data: dict) -> Instance:
    """Parse the instance JSON schema. Valuations may appear in any order."""
    if not isinstance(data, dict):
        raise ValidationError("instance", f"expected JSON object, got {type(data).__name__}")
    if "valuations" not in data:
        raise ValidationError("valuations", "missing")
    if "periods" not in data:
        raise ValidationError("periods", "missing")
    raw_values = data["valuations"]
    if not isinstance(raw_values, list):
        raise ValidationError("valuations", "must be an array")
    periods = data["periods"]
    if not isinstance(periods, int) or isinstance(periods, bool):
        raise ValidationError("periods", f"must be an integer, got {periods!r}")
    return make_instance(raw_values, periods)


def scaled_ints(values: Sequence[Rational]) -> tuple[list[int], int]:
    """Rescale rationals to exact integers: returns (scaled values, scale).

    ``scaled[k] == values[k] * scale`` exactly. Lets hot loops run on machine
    integers and convert back to Fractions only at the boundary.
    """
    scale = 1
    for value in values:
        scale = math.lcm(scale, value.denominator)
    return [int(value * scale) for value in values], scale

"""Static (single-shot) monopoly pricing over full markets and low tails.

The static monopolist facing consumers ``i..n`` posts one price and sells to
everyone whose value meets it. The optimal price is always some consumer's
value; ties in the revenue argmax are broken toward the *smallest* index,
i.e. the highest price and fewest sales. That rule is applied uniformly
across the whole package so the dynamic program, the brute-force oracle and
these tables stay mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Instance, Rational, scaled_ints


@dataclass(frozen=True)
class StaticPriceTable:
    """Static monopoly price of every low tail ``{i..n}`` of a market.

    Attributes:
        prices: ``prices[i - 1]`` is the static monopoly price when only
            consumers ``i..n`` remain.
        maximizers: ``maximizers[i - 1]`` is the (1-based, absolute) index of
            the last buyer at that price: the smallest revenue-maximizing
            cutoff. ``prices[i - 1] == valuations[maximizers[i - 1] - 1]``.
    """

    prices: tuple[Rational, ...]
    maximizers: tuple[int, ...]


def static_price(values: Sequence[Rational]) -> tuple[Rational, int]:
    """Optimal single price for a sorted (non-increasing) value list.

    Returns:
        ``(price, index)`` where ``index`` is the 1-based cutoff consumer:
        the smallest ``k`` maximizing ``k * values[k - 1]``.

    Raises:
        ValueError: empty list.
    """
    if not values:
        raise ValueError("static_price requires at least one consumer")
    best_revenue = None
    best_index = 0
    for k, value in enumerate(values, start=1):
        revenue = k * value
        if best_revenue is None or revenue > best_revenue:
            best_revenue = revenue
            best_index = k
    return values[best_index - 1], best_index


def static_profit(values: Sequence[Rational]) -> Rational:
    """Maximum single-price revenue ``max_k k * values[k - 1]``."""
    price, index = static_price(values)
    return index * price


def suffix_price_table(inst: Instance) -> StaticPriceTable:
    """Static monopoly price of every tail ``{i..n}``, for ``i = 1..n``.

    These are the final-period prices of the sequential game, and the
    threat prices of the two-period game.
    """
    scaled, scale = scaled_ints(inst.valuations)
    n = inst.n
    prices = []
    maximizers = []
    for i in range(1, n + 1):
        best = -1
        best_j = i
        for j in range(i, n + 1):
            revenue = (j - i + 1) * scaled[j - 1]
            if revenue > best:
                best = revenue
                best_j = j
        prices.append(Fraction(scaled[best_j - 1], scale))
        maximizers.append(best_j)
    return StaticPriceTable(tuple(prices), tuple(maximizers))


def _resorted_price(values: list[Rational]) -> Rational:
    values.sort(reverse=True)
    price, _ = static_price(values)
    return price


def replace_value_price(values: Sequence[Rational], j: int, new_value: Rational) -> Rational:
    """Static price after replacing the ``j``-th value (1-based) by ``new_value``.

    The perturbed multiset is fully re-sorted before pricing, so the caller
    never has to reason about where the replacement lands.

    Raises:
        IndexError: ``j`` out of range.
    """
    if not 1 <= j <= len(values):
        raise IndexError(f"index {j} out of range 1..{len(values)}")
    perturbed = list(values)
    perturbed[j - 1] = new_value
    return _resorted_price(perturbed)


def insert_value_price(values: Sequence[Rational], new_value: Rational) -> Rational:
    """Static price after adding one extra consumer with value ``new_value``."""
    return _resorted_price(list(values) + [new_value])

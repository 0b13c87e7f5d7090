"""Profit comparisons between the sequential seller and static benchmarks.

For any market the exact sandwich holds:

    static profit <= sequential profit <= sum of tail prices
                  <= static profit + top tail price <= 2 * static profit

so a seller facing a deadline beats a one-shot monopolist by at most the
top price, and never doubles them. ``tight_example`` generates the
two-period family whose profit ratio approaches 2, showing the factor is
sharp.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Rational, ValidationError, make_instance, total_surplus
from .solver import solve
from .static_monopoly import static_profit, suffix_price_table


@dataclass(frozen=True)
class BoundsReport:
    """All benchmark profits and bound verdicts for one market.

    Attributes:
        static_profit: best one-shot revenue over the whole market.
        duropoly_profit: revenue of the sequential seller's equilibrium.
        sum_suffix_prices: sum over consumers of their tail static price.
        top_price: static price of the full market (tail price of consumer 1).
        coase_profit: everyone served at the lowest valuation (competitive
            benchmark; reported, no bound asserted).
        surplus: sum of all valuations (perfect price discrimination).
        ratio: duropoly_profit / static_profit, exact.
        verdicts: one boolean per link of the sandwich chain.
    """

    static_profit: Rational
    duropoly_profit: Rational
    sum_suffix_prices: Rational
    top_price: Rational
    coase_profit: Rational
    surplus: Rational
    ratio: Rational
    verdicts: dict[str, bool]

    @property
    def all_ok(self) -> bool:
        return all(self.verdicts.values())


def analyze(inst: Instance) -> BoundsReport:
    """Compute every benchmark profit and check the sandwich chain."""
    table = suffix_price_table(inst)
    mono = static_profit(inst.valuations)
    duro = solve(inst).profit
    price_sum = sum(table.prices, Fraction(0))
    top = table.prices[0]
    verdicts = {
        "static_le_duropoly": mono <= duro,
        "duropoly_le_price_sum": duro <= price_sum,
        "price_sum_le_static_plus_top": price_sum <= mono + top,
        "static_plus_top_le_double_static": mono + top <= 2 * mono,
    }
    return BoundsReport(
        static_profit=mono,
        duropoly_profit=duro,
        sum_suffix_prices=price_sum,
        top_price=top,
        coase_profit=inst.n * inst.valuations[-1],
        surplus=total_surplus(inst),
        ratio=Fraction(duro, 1) / mono,
        verdicts=verdicts,
    )


def tight_example(n: int, k: int, v_high: Rational | int) -> Instance:
    """Two-period market pushing sequential profit toward twice static profit.

    ``k`` consumers value the good at ``v_high`` and ``n - k`` at
    ``v_high / (n - k + 1)``. The equilibrium sells high in period 1 and low
    in period 2 for total revenue ``k * v_high + (n - k) * v_low``; with
    ``k = 1`` the profit ratio is ``(2n - 1) / n``, approaching 2.

    Raises:
        ValidationError: ``k`` outside ``1..n-1`` or non-positive ``v_high``.
    """
    if not isinstance(n, int) or not isinstance(k, int):
        raise ValidationError("n", "n and k must be integers")
    if k < 1 or k >= n:
        raise ValidationError("k", f"need 1 <= k < n, got k = {k}, n = {n}")
    high = Fraction(v_high)
    if high <= 0:
        raise ValidationError("v_high", f"must be positive, got {high}")
    low = high / (n - k + 1)
    return make_instance([high] * k + [low] * (n - k), 2)


def suffix_profit_bound(inst: Instance, m: int) -> tuple[Rational, Rational]:
    """Static profit of the tail ``{m..n}`` versus the sum of its tail prices.

    Returns ``(lhs, rhs)``; the first never exceeds the second.

    Raises:
        IndexError: ``m`` out of range.
    """
    if not 1 <= m <= inst.n:
        raise IndexError(f"index {m} out of range 1..{inst.n}")
    table = suffix_price_table(inst)
    lhs = static_profit(inst.suffix_values(m))
    rhs = sum(table.prices[m - 1 :], Fraction(0))
    return lhs, rhs


def split_upper_bound(inst: Instance) -> Rational:
    """Upper envelope on sequential profit from splitting the schedule once.

    If consumers ``m..y_m`` are the ones served at the deadline, that final
    sale earns the tail's static profit and everyone served earlier paid at
    most their own tail price. Maximizing over the split point ``m`` bounds
    the sequential profit from above.
    """
    table = suffix_price_table(inst)
    best = None
    prefix = Fraction(0)  # sum of tail prices of consumers < m
    for m in range(1, inst.n + 1):
        y = table.maximizers[m - 1]
        candidate = (y - m + 1) * inst.valuations[y - 1] + prefix
        if best is None or candidate > best:
            best = candidate
        prefix += table.prices[m - 1]
    return best

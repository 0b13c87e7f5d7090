"""Backward-induction solver for the sequential durable-good pricing game.

The seller posts one price per period; consumers each want one unit and act
to maximize value-minus-price. Working back from the deadline:

* In the last period every remaining consumer accepts any price up to their
  value, so the seller charges the static monopoly price of the remaining
  tail.
* Earlier, a consumer accepts only a price no higher than the price they
  would be offered next period if they (and everyone below) refused -- their
  *threat price*. So selling down to consumer ``j`` in period ``t`` earns
  ``j``'s threat price per unit, and the seller picks the cutoff maximizing
  current revenue plus the optimal continuation.

The recursion fills dense tables over (first remaining consumer, period);
ties in the cutoff argmax break toward the smallest index, matching the
static tables. Complexity is O(n^2 * periods) time, O(n * periods) space,
comfortable up to a few thousand consumers.

The solved strategy profile also survives a blinded market where nobody
knows who holds which value and only per-period sales *counts* are public:
relabeling the remaining crowd as the lowest-valued tail of the original
market reproduces the same price path (see ``reindexed_subgame``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import Instance, Rational, scaled_ints


@dataclass(frozen=True)
class DpTables:
    """Dense backward-induction tables, indexed by 1-based (consumer, period).

    For ``i`` in ``1..n`` and ``t`` in ``1..T``: ``price(i, t)`` is the price
    posted and ``cutoff(i, t)`` the last buyer when consumers ``i..n`` remain
    at period ``t``; ``profit(i, t)`` the seller's optimal revenue from that
    state. ``profit`` extends to ``i = n + 1`` (empty market) and
    ``t = T + 1`` (past the deadline), both zero. ``threat(i, t)`` is the
    price consumer ``i`` would face next period after a joint refusal,
    defined for ``t < T``.
    """

    consumers: int
    horizon: int
    _scale: int = field(repr=False)
    _profit: list = field(repr=False)  # [t][i], t in 1..T+1, i in 1..n+1
    _price: list = field(repr=False)  # [t][i], t in 1..T, i in 1..n
    _cutoff: list = field(repr=False)  # [t][i], t in 1..T, i in 1..n

    def _check(self, i: int, t: int, max_i: int, max_t: int):
        if not 1 <= i <= max_i:
            raise IndexError(f"consumer index {i} out of range 1..{max_i}")
        if not 1 <= t <= max_t:
            raise IndexError(f"period {t} out of range 1..{max_t}")

    def profit(self, i: int, t: int) -> Rational:
        """Optimal seller revenue when consumers ``i..n`` remain at period ``t``."""
        self._check(i, t, self.consumers + 1, self.horizon + 1)
        return Fraction(self._profit[t][i], self._scale)

    def price(self, i: int, t: int) -> Rational:
        """Price posted at period ``t`` when consumers ``i..n`` remain."""
        self._check(i, t, self.consumers, self.horizon)
        return Fraction(self._price[t][i], self._scale)

    def cutoff(self, i: int, t: int) -> int:
        """Last buyer (1-based) at period ``t`` when consumers ``i..n`` remain."""
        self._check(i, t, self.consumers, self.horizon)
        return self._cutoff[t][i]

    def threat(self, i: int, t: int) -> Rational:
        """Price consumer ``i`` faces at ``t + 1`` if ``i..n`` all refuse at ``t``.

        Raises:
            ValueError: ``t`` is the final period; there, willingness to pay
                is the consumer's own value, not a continuation price.
        """
        if t >= self.horizon:
            raise ValueError(
                f"threat price undefined at final period {t}; "
                "final-period willingness is the consumer's value"
            )
        return self.price(i, t + 1)


@dataclass(frozen=True)
class EquilibriumSolution:
    """Realized outcome of the revenue-maximal equilibrium.

    Attributes:
        prices: price posted in each period ``1..T``. Once everyone has
            bought, later entries repeat the last charged price (display
            convention; no sale occurs).
        buyers: number of sales per period.
        cutoffs: last buyer index per period (non-decreasing); consumers
            beyond ``cutoffs[-1]`` never buy.
        profit: total seller revenue.
        tables: full backward-induction tables, or None for solutions
            re-loaded from serialized form.
    """

    prices: tuple[Rational, ...]
    buyers: tuple[int, ...]
    cutoffs: tuple[int, ...]
    profit: Rational
    tables: DpTables | None = None


def solve(inst: Instance) -> EquilibriumSolution:
    """Compute the seller's revenue-maximal equilibrium by backward induction.

    Fills the price/cutoff/profit tables from the deadline back to period 1,
    then walks the cutoffs forward from the full market to extract the
    realized price path and sales schedule.
    """
    n, horizon = inst.n, inst.periods
    values, scale = scaled_ints(inst.valuations)
    values = [0] + values  # 1-based

    profit_rows: list = [None] * (horizon + 2)
    price_rows: list = [None] * (horizon + 1)
    cutoff_rows: list = [None] * (horizon + 1)
    profit_rows[horizon + 1] = [0] * (n + 2)

    # Virtual "next-period price" seed for the final period: willingness to
    # pay at the deadline is the consumer's own value.
    next_price = values
    next_profit = profit_rows[horizon + 1]
    for t in range(horizon, 0, -1):
        row_profit = [0] * (n + 2)
        row_price = [0] * (n + 1)
        row_cutoff = [0] * (n + 1)
        for i in range(n, 0, -1):
            best = -1
            best_j = i
            for j in range(i, n + 1):
                candidate = (j - i + 1) * next_price[j] + next_profit[j + 1]
                if candidate > best:
                    best = candidate
                    best_j = j
            row_profit[i] = best
            row_price[i] = next_price[best_j]
            row_cutoff[i] = best_j
        profit_rows[t] = row_profit
        price_rows[t] = row_price
        cutoff_rows[t] = row_cutoff
        next_price = row_price
        next_profit = row_profit

    tables = DpTables(
        consumers=n,
        horizon=horizon,
        _scale=scale,
        _profit=profit_rows,
        _price=price_rows,
        _cutoff=cutoff_rows,
    )

    prices: list[Rational] = []
    buyers: list[int] = []
    cutoffs: list[int] = []
    i = 1
    for t in range(1, horizon + 1):
        if i > n:
            prices.append(prices[-1])
            buyers.append(0)
            cutoffs.append(cutoffs[-1])
            continue
        j = cutoff_rows[t][i]
        prices.append(Fraction(price_rows[t][i], scale))
        buyers.append(j - i + 1)
        cutoffs.append(j)
        i = j + 1

    return EquilibriumSolution(
        prices=tuple(prices),
        buyers=tuple(buyers),
        cutoffs=tuple(cutoffs),
        profit=Fraction(profit_rows[1][1], scale),
        tables=tables,
    )


def threat_price(inst: Instance, i: int, t: int) -> Rational:
    """Price consumer ``i`` would face at ``t + 1`` after a joint refusal at ``t``.

    Raises:
        ValueError: ``t`` is the final period.
        IndexError: consumer or period out of range.
    """
    return solve(inst).tables.threat(i, t)


def reindexed_subgame(inst: Instance, remaining_count: int, period: int) -> Instance:
    """The count-based belief game: lowest values, remaining periods.

    When only per-period sales counts are observable, a market with
    ``remaining_count`` unsold consumers at the start of ``period`` is
    treated as a fresh game over the ``remaining_count`` lowest valuations
    with the remaining ``T - period + 1`` periods. Along the equilibrium
    path this reproduces the original solution's prices exactly.

    Raises:
        IndexError: ``remaining_count`` not in ``1..n`` or ``period`` not in
            ``1..T``.
    """
    if not 1 <= remaining_count <= inst.n:
        raise IndexError(f"remaining_count {remaining_count} out of range 1..{inst.n}")
    if not 1 <= period <= inst.periods:
        raise IndexError(f"period {period} out of range 1..{inst.periods}")
    return Instance(inst.lowest(remaining_count), inst.periods - period + 1)

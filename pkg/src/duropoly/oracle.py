"""Independent verification machinery for the equilibrium solver.

Three separate checks, all deliberately implemented without touching the
solver's recursion:

* ``enumerate_schedules`` prices every admissible sales schedule explicitly
  (threat prices recomputed by recursive tree evaluation with a private
  static-price scan) and takes the maximum. Must reproduce ``solve``'s
  profit exactly.
* ``verify_spne`` replays a proposed solution and hunts for strictly
  profitable one-shot deviations: every alternative purchase time for every
  consumer, and every alternative posted price for the seller at each
  reached state.
* ``best_with_skips`` relaxes the one-sale-per-period rule and confirms
  that idle periods never help.

Exhaustive components refuse oversized inputs loudly instead of silently
truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Rational, SizeGuardError, SubgameRef
from .solver import EquilibriumSolution, solve

MAX_ENUM_CONSUMERS = 14
MAX_ENUM_PERIODS = 6


@dataclass(frozen=True)
class Deviation:
    """One strictly profitable unilateral deviation."""

    agent: int | str  # consumer index, or "duropolist"
    subgame: SubgameRef
    alternative_action: str
    payoff_gain: Rational


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of a deviation hunt; empty means every check passed."""

    deviations: tuple[Deviation, ...]

    @property
    def ok(self) -> bool:
        return not self.deviations


def _check_enum_guard(inst: Instance, what: str):
    if inst.n > MAX_ENUM_CONSUMERS or inst.periods > MAX_ENUM_PERIODS:
        raise SizeGuardError(
            f"{what} is exhaustive and limited to n <= {MAX_ENUM_CONSUMERS}, "
            f"periods <= {MAX_ENUM_PERIODS}; got n = {inst.n}, periods = {inst.periods}"
        )


class _SchedulePricer:
    """Recursive tree evaluation of optimal play, independent of the solver.

    ``best_play(i, t)`` explores every first-period cutoff of the subgame
    with consumers ``i..n`` and periods ``t..T``, pricing each group at the
    recursively evaluated continuation threat price. Ties break toward the
    lexicographically smallest schedule, the same selection the solver's
    smallest-index rule induces.
    """

    def __init__(self, inst: Instance):
        self.values = (Fraction(0),) + inst.valuations  # 1-based
        self.n = inst.n
        self.horizon = inst.periods
        self._cache: dict = {}

    def tail_static(self, i: int) -> tuple[Rational, Rational, int]:
        """Best single-price sale to consumers ``i..n``: (revenue, price, cutoff)."""
        best_rev = None
        best_j = i
        for j in range(i, self.n + 1):
            rev = (j - i + 1) * self.values[j]
            if best_rev is None or rev > best_rev:
                best_rev = rev
                best_j = j
        return best_rev, self.values[best_j], best_j

    def best_play(self, i: int, t: int):
        """Optimal play of subgame (i, t): (revenue, first price, schedule)."""
        if i > self.n:
            return Fraction(0), None, ()
        key = (i, t)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if t == self.horizon:
            rev, price, j = self.tail_static(i)
            result = (rev, price, (j,))
        else:
            best = None
            for k in range(i, self.n + 1):
                threat = self.best_play(k, t + 1)[1]
                cont_rev, _, cont_sched = self.best_play(k + 1, t + 1)
                rev = (k - i + 1) * threat + cont_rev
                if best is None or rev > best[0]:
                    best = (rev, threat, (k,) + cont_sched)
            result = best
        self._cache[key] = result
        return result


def _forced_sale_sequences(n: int, periods: int):
    """Cutoff tuples with at least one sale per period while consumers remain."""

    def rec(prefix: tuple, prev: int, remaining: int):
        if remaining == 0:
            yield prefix
            return
        if prev == n:
            yield prefix + (n,) * remaining
            return
        for j in range(prev + 1, n + 1):
            yield from rec(prefix + (j,), j, remaining - 1)

    yield from rec((), 0, periods)


def _skip_allowed_sequences(n: int, periods: int):
    """Cutoff tuples that may leave periods idle (cutoff repeats)."""

    def rec(prefix: tuple, prev: int, remaining: int):
        if remaining == 0:
            yield prefix
            return
        for j in range(prev, n + 1):
            yield from rec(prefix + (j,), j, remaining - 1)

    yield from rec((), 0, periods)


def _schedule_revenue(pricer: _SchedulePricer, seq: tuple) -> tuple[Rational, tuple]:
    """Revenue of a pre-deadline cutoff sequence, final period priced statically.

    Each non-empty group in period ``t`` pays the threat price of its last
    buyer; whatever remains at the deadline is sold at its static monopoly
    price (consumers below that price stay unsold).
    """
    revenue = Fraction(0)
    prev = 0
    for t, j in enumerate(seq, start=1):
        if j > prev:
            threat = pricer.best_play(j, t + 1)[1]
            revenue += (j - prev) * threat
        prev = j
    if prev < pricer.n:
        tail_rev, _, tail_cut = pricer.tail_static(prev + 1)
        revenue += tail_rev
        schedule = seq + (tail_cut,)
    else:
        schedule = seq + (pricer.n,)
    return revenue, schedule


def enumerate_schedules(inst: Instance) -> tuple[Rational, tuple[int, ...]]:
    """Maximum revenue over all forced-sale schedules, by explicit enumeration.

    Returns:
        ``(max_profit, best_schedule)`` where the schedule lists the last
        buyer per period. Must equal ``solve(inst).profit`` exactly.

    Raises:
        SizeGuardError: instance exceeds the exhaustive-search limits.
    """
    _check_enum_guard(inst, "enumerate_schedules")
    pricer = _SchedulePricer(inst)
    best_rev = None
    best_schedule = None
    for seq in _forced_sale_sequences(inst.n, inst.periods - 1):
        revenue, schedule = _schedule_revenue(pricer, seq)
        if best_rev is None or revenue > best_rev:
            best_rev = revenue
            best_schedule = schedule
    return best_rev, best_schedule


def best_with_skips(inst: Instance) -> Rational:
    """Maximum revenue when the seller may sit out periods with buyers left.

    Pricing stays consistent with equilibrium continuations (groups pay the
    recursively evaluated threat price of their last buyer). Never exceeds
    ``solve(inst).profit``.

    Raises:
        SizeGuardError: instance exceeds the exhaustive-search limits.
    """
    _check_enum_guard(inst, "best_with_skips")
    pricer = _SchedulePricer(inst)
    best_rev = None
    for seq in _skip_allowed_sequences(inst.n, inst.periods - 1):
        revenue, _ = _schedule_revenue(pricer, seq)
        if best_rev is None or revenue > best_rev:
            best_rev = revenue
    return best_rev


def _acceptance_threshold(tables, c: int, t: int) -> Rational:
    """Highest price consumer ``c`` accepts at period ``t`` in equilibrium."""
    if t == tables.horizon:
        return None  # caller substitutes the consumer's own value
    return tables.price(c, t + 1)


def _response_cutoff(inst: Instance, tables, first: int, t: int, price: Rational) -> int:
    """Last consumer >= ``first`` accepting ``price`` at period ``t`` (0 if none).

    Thresholds are non-increasing in the consumer index, so acceptors form a
    prefix of the remaining tail.
    """
    last = first - 1
    for c in range(first, inst.n + 1):
        threshold = inst.valuations[c - 1] if t == inst.periods else tables.price(c, t + 1)
        if threshold >= price:
            last = c
        else:
            break
    return last


def _holdout_prices(inst: Instance, sold_after_refusal: int, start_period: int) -> dict[int, Rational]:
    """Prices a lone holdout faces after refusing their scheduled purchase.

    Only sales counts are payoff-relevant, so after the refusal the seller
    re-solves the game over the lowest remaining valuations each period; the
    conforming members of each believed sales group keep buying while the
    holdout abstains, leaving the count one short every period.
    """
    prices: dict[int, Rational] = {}
    remaining = inst.n - sold_after_refusal
    for s in range(start_period, inst.periods + 1):
        believed = Instance(inst.lowest(remaining), inst.periods - s + 1)
        bsol = solve(believed)
        prices[s] = bsol.prices[0]
        conformers = bsol.buyers[0] - 1  # the holdout occupies one believed slot
        remaining -= conformers
    return prices


def verify_spne(inst: Instance, sol: EquilibriumSolution) -> DeviationReport:
    """Hunt for strictly profitable unilateral deviations from ``sol``.

    The candidate profile is: the seller posts ``sol.prices`` along the
    declared schedule ``sol.cutoffs``, consumers buy as scheduled, and any
    state off the declared path is continued with equilibrium play. Checks:

    * every consumer, every alternative purchase time including never
      (delays are priced by re-solving the count-based belief game along
      the holdout path, everyone else conforming);
    * the seller, at every declared state, every alternative price from the
      breakpoint set {remaining values} u {remaining threat prices} plus a
      no-sale sentinel, with consumers responding by their equilibrium
      acceptance thresholds.

    Returns an empty report iff no strict improvement exists.

    Raises:
        ValueError: solution dimensions do not match the instance.
    """
    n, horizon = inst.n, inst.periods
    if len(sol.prices) != horizon or len(sol.buyers) != horizon or len(sol.cutoffs) != horizon:
        raise ValueError(
            f"solution dimensions do not match instance: expected {horizon} periods, "
            f"got prices={len(sol.prices)}, buyers={len(sol.buyers)}, cutoffs={len(sol.cutoffs)}"
        )
    tables = solve(inst).tables

    # Walk the declared schedule. groups[t] is (first, last) or None.
    groups: list = [None] * (horizon + 1)
    state_first: list = [None] * (horizon + 2)
    first = 1
    for t in range(1, horizon + 1):
        state_first[t] = first
        declared_last = sol.cutoffs[t - 1]
        if first <= n and declared_last >= first:
            groups[t] = (first, declared_last)
            first = declared_last + 1
    state_first[horizon + 1] = first

    # Profile value at each declared state: declared sales accrue while the
    # consumers' threshold responses actually match the declared groups;
    # from the first divergence onward the seller earns the equilibrium
    # continuation of whatever state the real response leads to.
    value_at: list = [Fraction(0)] * (horizon + 2)
    for t in range(horizon, 0, -1):
        i = state_first[t]
        if i > n:
            value_at[t] = Fraction(0)
            continue
        price = sol.prices[t - 1]
        actual_last = _response_cutoff(inst, tables, i, t, price)
        declared_last = groups[t][1] if groups[t] is not None else i - 1
        earned = max(0, actual_last - i + 1) * price
        if actual_last == declared_last:
            value_at[t] = earned + value_at[t + 1]
        else:
            value_at[t] = earned + tables.profit(max(actual_last, i - 1) + 1, t + 1)

    deviations: list[Deviation] = []

    # --- consumer deviations, holding everyone else to the declared play ---
    bought_at: dict[int, int] = {}
    sold_before: list = [0] * (horizon + 2)
    for t in range(1, horizon + 1):
        size = 0
        if groups[t] is not None:
            g_first, g_last = groups[t]
            size = g_last - g_first + 1
            for c in range(g_first, g_last + 1):
                bought_at[c] = t
        sold_before[t + 1] = sold_before[t] + size

    for c in range(1, n + 1):
        value = inst.valuations[c - 1]
        s_star = bought_at.get(c)
        base = value - sol.prices[s_star - 1] if s_star is not None else Fraction(0)
        best_alt = None  # (gain, action)
        early_limit = s_star - 1 if s_star is not None else horizon
        for s in range(1, early_limit + 1):
            gain = (value - sol.prices[s - 1]) - base
            if gain > 0 and (best_alt is None or gain > best_alt[0]):
                best_alt = (gain, f"buy in period {s} instead")
        if s_star is not None:
            if -base > 0:
                best_alt = (-base, "never buy")
            g_first, g_last = groups[s_star]
            sold_after_refusal = sold_before[s_star] + (g_last - g_first)
            chain = _holdout_prices(inst, sold_after_refusal, s_star + 1)
            for s in range(s_star + 1, horizon + 1):
                gain = (value - chain[s]) - base
                if gain > 0 and (best_alt is None or gain > best_alt[0]):
                    best_alt = (gain, f"hold out and buy in period {s} at {chain[s]}")
        if best_alt is not None:
            period = s_star if s_star is not None else horizon
            deviations.append(
                Deviation(
                    agent=c,
                    subgame=SubgameRef(state_first[period], period),
                    alternative_action=best_alt[1],
                    payoff_gain=best_alt[0],
                )
            )

    # --- seller deviations (one-shot, equilibrium continuation) ---
    for t in range(1, horizon + 1):
        i = state_first[t]
        if i > n:
            break
        candidates = {inst.valuations[c - 1] for c in range(i, n + 1)}
        if t < horizon:
            candidates.update(tables.price(c, t + 1) for c in range(i, n + 1))
        candidates.add(inst.valuations[i - 1] + 1)  # no-sale sentinel
        best_alt = None
        for price in candidates:
            last = _response_cutoff(inst, tables, i, t, price)
            if last >= i:
                alt_value = (last - i + 1) * price + tables.profit(last + 1, t + 1)
            elif t < horizon:
                alt_value = tables.profit(i, t + 1)
            else:
                alt_value = Fraction(0)
            gain = alt_value - value_at[t]
            if gain > 0 and (best_alt is None or gain > best_alt[0]):
                best_alt = (gain, f"post price {price} instead of {sol.prices[t - 1]}")
        if best_alt is not None:
            deviations.append(
                Deviation(
                    agent="duropolist",
                    subgame=SubgameRef(i, t),
                    alternative_action=best_alt[1],
                    payoff_gain=best_alt[0],
                )
            )

    return DeviationReport(tuple(deviations))

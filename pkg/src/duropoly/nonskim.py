"""Two-period strategy profiles that violate buy-in-value-order, and the swap fix.

With simultaneous consumer moves, an equilibrium can have a lower-valued
consumer buying in period 1 while a higher-valued one waits for the
clearance price. A profile here is explicit: each consumer has a period-1
acceptance threshold (buy iff the posted price is at most it), period 2 is
the dominant endgame -- remaining consumers pay up to their value and the
seller posts the static price of whoever is left.

``swap_to_skimming`` repairs out-of-order equilibria: repeatedly exchange
the period-1 actions of the highest-valued waiter and the lowest-valued
cheaper buyer. Every swap preserves both prices, total revenue, and the
equilibrium property, and finitely many swaps restore value order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .model import (
    Instance,
    Rational,
    SizeGuardError,
    SubgameRef,
    ValidationError,
    make_instance,
    parse_rational,
    scaled_ints,
)
from .oracle import Deviation, DeviationReport
from .static_monopoly import static_price, static_profit

MAX_SEARCH_CONSUMERS = 5


@dataclass(frozen=True)
class StrategyProfile2P:
    """Two-period profile: period-1 thresholds plus the seller's opening price.

    ``thresholds[c - 1]`` is consumer ``c``'s period-1 acceptance bound (buy
    iff the opening price is <= it). Period-2 behavior is fixed: remaining
    consumers buy iff the price is at most their value, and the seller posts
    the static monopoly price of the remaining set.
    """

    thresholds: tuple[Rational, ...]
    price1: Rational


@dataclass(frozen=True)
class SwapPair:
    """An out-of-order pair: ``low_value`` buys in period 1, ``high_value`` waits."""

    low_value: Rational
    high_value: Rational


@dataclass(frozen=True)
class Outcome2P:
    """Realized play of a two-period profile."""

    price1: Rational
    period1_buyers: tuple[int, ...]  # consumer indices, 1-based
    price2: Rational | None  # None when nobody remains
    period2_buyers: tuple[int, ...]
    revenue: Rational


@dataclass(frozen=True)
class SwapChain:
    """Evaluated price chain for one swap of an out-of-order pair.

    Every link is guaranteed at equilibrium:
    ``high >= low >= wait_price_low = wait_price_high_after_swap
    >= opening_price = opening_price_after_swap
    >= clearance_price = clearance_price_after_swap``.
    """

    high: Rational
    low: Rational
    wait_price_low: Rational
    wait_price_high_after_swap: Rational
    opening_price: Rational
    opening_price_after_swap: Rational
    clearance_price: Rational
    clearance_price_after_swap: Rational

    def as_tuple(self) -> tuple[Rational, ...]:
        return (
            self.high,
            self.low,
            self.wait_price_low,
            self.wait_price_high_after_swap,
            self.opening_price,
            self.opening_price_after_swap,
            self.clearance_price,
            self.clearance_price_after_swap,
        )


class NonEquilibriumError(ValueError):
    """The supplied profile fails verification; ``report`` lists deviations."""

    def __init__(self, report: DeviationReport):
        super().__init__(
            f"profile is not an equilibrium ({len(report.deviations)} profitable deviation(s))"
        )
        self.report = report


def _require_two_periods(inst: Instance):
    if inst.periods != 2:
        raise ValueError(f"two-period profiles only; instance has {inst.periods} periods")


def play_profile(inst: Instance, prof: StrategyProfile2P) -> Outcome2P:
    """Play the profile out and return prices, buyer sets, and revenue."""
    _require_two_periods(inst)
    if len(prof.thresholds) != inst.n:
        raise ValueError(
            f"profile has {len(prof.thresholds)} thresholds for {inst.n} consumers"
        )
    first = tuple(
        c for c in range(1, inst.n + 1) if prof.price1 <= prof.thresholds[c - 1]
    )
    remaining = [c for c in range(1, inst.n + 1) if c not in first]
    revenue = len(first) * prof.price1
    if remaining:
        price2, _ = static_price([inst.valuations[c - 1] for c in remaining])
        second = tuple(c for c in remaining if price2 <= inst.valuations[c - 1])
        revenue += len(second) * price2
    else:
        price2 = None
        second = ()
    return Outcome2P(prof.price1, first, price2, second, revenue)


def builtin_nonskim_example() -> tuple[Instance, StrategyProfile2P]:
    """The canonical three-consumer market with an out-of-order equilibrium.

    The middle consumer (value 70) buys at the opening price 70 while the
    top consumer (value 80) waits for the clearance price 45: an equilibrium
    in which a strictly higher-valued consumer buys later and cheaper.
    """
    inst = make_instance([80, 70, 45], 2)
    prof = StrategyProfile2P(
        thresholds=(Fraction(45), Fraction(70), Fraction(45)),
        price1=Fraction(70),
    )
    return inst, prof


def verify_profile(inst: Instance, prof: StrategyProfile2P) -> DeviationReport:
    """Check every one-step deviation from a two-period profile.

    Consumers may flip their period-1 decision (waiting re-prices period 2
    over the enlarged remaining set; buying early just pays the opening
    price). The seller may move the opening price to any other consumer
    threshold, or above everyone's.

    Raises:
        ValueError: instance is not two-period or thresholds mismatch.
    """
    outcome = play_profile(inst, prof)
    deviations: list[Deviation] = []
    first_set = set(outcome.period1_buyers)
    waiter_values = [inst.valuations[c - 1] for c in range(1, inst.n + 1) if c not in first_set]

    def period2_utility(value: Rational, others: list[Rational]) -> Rational:
        pool = sorted(others + [value], reverse=True)
        price, _ = static_price(pool)
        return value - price if price <= value else Fraction(0)

    for c in range(1, inst.n + 1):
        value = inst.valuations[c - 1]
        if c in first_set:
            base = value - prof.price1
            alt = period2_utility(value, waiter_values)
            action = "wait for period 2"
        else:
            clearance = outcome.price2
            base = value - clearance if clearance <= value else Fraction(0)
            alt = value - prof.price1
            action = "buy in period 1"
        if alt > base:
            deviations.append(
                Deviation(
                    agent=c,
                    subgame=SubgameRef(1, 1),
                    alternative_action=action,
                    payoff_gain=alt - base,
                )
            )

    candidates = {thr for thr in prof.thresholds if thr > 0}
    candidates.add(max(prof.thresholds, default=Fraction(0)) + 1)  # nobody buys
    best_alt = None
    for price in candidates:
        buyers = [c for c in range(1, inst.n + 1) if price <= prof.thresholds[c - 1]]
        rev = len(buyers) * price
        left = [inst.valuations[c - 1] for c in range(1, inst.n + 1) if c not in buyers]
        if left:
            rev += static_profit(left)
        gain = rev - outcome.revenue
        if gain > 0 and (best_alt is None or gain > best_alt[0]):
            best_alt = (gain, f"post opening price {price} instead of {prof.price1}")
    if best_alt is not None:
        deviations.append(
            Deviation(
                agent="duropolist",
                subgame=SubgameRef(1, 1),
                alternative_action=best_alt[1],
                payoff_gain=best_alt[0],
            )
        )
    return DeviationReport(tuple(deviations))


def is_skimming(inst: Instance, prof: StrategyProfile2P) -> bool:
    """Does realized play respect value order?

    True iff no consumer who waits past period 1 has a strictly higher value
    than some period-1 buyer.
    """
    outcome = play_profile(inst, prof)
    first_set = set(outcome.period1_buyers)
    if not first_set or len(first_set) == inst.n:
        return True
    min_buyer = min(inst.valuations[c - 1] for c in first_set)
    max_waiter = max(
        inst.valuations[c - 1] for c in range(1, inst.n + 1) if c not in first_set
    )
    return max_waiter <= min_buyer


def _find_swap_pair(inst: Instance, outcome: Outcome2P) -> tuple[int, int] | None:
    """Indices (buyer, waiter) of the out-of-order pair to swap, or None.

    The waiter is the highest-valued consumer not buying in period 1; the
    buyer is the lowest-valued period-1 buyer strictly below them.
    """
    first_set = set(outcome.period1_buyers)
    waiters = [c for c in range(1, inst.n + 1) if c not in first_set]
    if not waiters:
        return None
    w = min(waiters)  # valuations sorted, so the smallest index is the highest value
    w_value = inst.valuations[w - 1]
    cheaper_buyers = [c for c in first_set if inst.valuations[c - 1] < w_value]
    if not cheaper_buyers:
        return None
    v = max(cheaper_buyers)  # largest index = lowest value
    return v, w


def swap_to_skimming(inst: Instance, prof: StrategyProfile2P) -> StrategyProfile2P:
    """Convert an equilibrium into a value-ordered one at identical prices.

    Repeatedly swaps the period-1 thresholds of the out-of-order pair until
    realized play respects value order. Opening price, clearance price, and
    revenue are all preserved, and the result is still an equilibrium.

    Raises:
        NonEquilibriumError: the input profile fails ``verify_profile``.
    """
    report = verify_profile(inst, prof)
    if not report.ok:
        raise NonEquilibriumError(report)
    current = prof
    for _ in range(inst.n * inst.n + 1):
        outcome = play_profile(inst, current)
        pair = _find_swap_pair(inst, outcome)
        if pair is None:
            return current
        v, w = pair
        thresholds = list(current.thresholds)
        thresholds[v - 1], thresholds[w - 1] = thresholds[w - 1], thresholds[v - 1]
        current = StrategyProfile2P(tuple(thresholds), current.price1)
    raise AssertionError("swap loop failed to terminate")  # pragma: no cover


def check_swap_chain(inst: Instance, prof: StrategyProfile2P) -> SwapChain:
    """Evaluate the full price chain around one swap of the out-of-order pair.

    Raises:
        ValueError: realized play has no out-of-order pair to swap.
    """
    outcome = play_profile(inst, prof)
    pair = _find_swap_pair(inst, outcome)
    if pair is None:
        raise ValueError("no swap pair exists: realized play already respects value order")
    v, w = pair
    first_set = set(outcome.period1_buyers)
    waiters = [inst.valuations[c - 1] for c in range(1, inst.n + 1) if c not in first_set]
    low = inst.valuations[v - 1]
    high = inst.valuations[w - 1]

    def price_of(pool: list[Rational]) -> Rational:
        price, _ = static_price(sorted(pool, reverse=True))
        return price

    waiters_after_swap = [x for x in waiters]
    waiters_after_swap.remove(high)
    waiters_after_swap.append(low)

    return SwapChain(
        high=high,
        low=low,
        wait_price_low=price_of(waiters + [low]),
        wait_price_high_after_swap=price_of(waiters_after_swap + [high]),
        opening_price=prof.price1,
        opening_price_after_swap=prof.price1,
        clearance_price=price_of(waiters),
        clearance_price_after_swap=price_of(waiters_after_swap),
    )


def profile_from_dict(inst: Instance, data: dict) -> StrategyProfile2P:
    """Parse the profile JSON schema, thresholds keyed by consumer value.

    Consumers sharing a value share the threshold entry.
    """
    if not isinstance(data, dict):
        raise ValidationError("profile", f"expected JSON object, got {type(data).__name__}")
    if "mu1" not in data:
        raise ValidationError("mu1", "missing")
    if "thresholds" not in data or not isinstance(data["thresholds"], dict):
        raise ValidationError("thresholds", "missing or not an object")
    price1 = parse_rational(data["mu1"])
    by_value: dict[Rational, Rational] = {}
    for key, raw in data["thresholds"].items():
        by_value[parse_rational(key)] = parse_rational(raw)
    thresholds = []
    for value in inst.valuations:
        if value not in by_value:
            raise ValidationError("thresholds", f"no threshold for consumer value {value}")
        thresholds.append(by_value[value])
    return StrategyProfile2P(tuple(thresholds), price1)


def profile_to_dict(inst: Instance, prof: StrategyProfile2P) -> dict:
    """JSON-ready profile form (collapses equal-valued consumers)."""
    thresholds: dict[str, str] = {}
    for c in range(inst.n):
        thresholds[str(inst.valuations[c])] = str(prof.thresholds[c])
    return {"mu1": str(prof.price1), "thresholds": thresholds}


def exhaustive_equilibrium_search(
    inst: Instance,
) -> tuple[Rational, StrategyProfile2P | None]:
    """Best revenue over *all* verified threshold-profile equilibria.

    Thresholds range over the consumer values plus 0 (refuse period 1), the
    opening price over the consumer values plus one sentinel above
    everything. Every combination is played out and verified; returns the
    highest equilibrium revenue and one profile achieving it.

    Raises:
        ValueError: not a two-period instance.
        SizeGuardError: too many consumers for the exhaustive grid.
    """
    _require_two_periods(inst)
    n = inst.n
    if n > MAX_SEARCH_CONSUMERS:
        raise SizeGuardError(
            f"exhaustive profile search is limited to n <= {MAX_SEARCH_CONSUMERS}; got n = {n}"
        )
    scaled, scale = scaled_ints(inst.valuations)
    full = (1 << n) - 1

    # Static price/profit of every consumer subset, by bitmask.
    sub_price: list = [None] * (1 << n)
    sub_profit: list = [0] * (1 << n)
    for mask in range(1, 1 << n):
        members = [scaled[k] for k in range(n) if mask & (1 << k)]
        best = -1
        best_price = 0
        for rank, value in enumerate(members, start=1):
            rev = rank * value
            if rev > best:
                best = rev
                best_price = value
        sub_price[mask] = best_price
        sub_profit[mask] = best

    distinct = sorted(set(scaled), reverse=True)
    threshold_choices = distinct + [0]
    sentinel = distinct[0] + 1
    opening_choices = distinct + [sentinel]

    def revenue_and_mask(thresholds: tuple[int, ...], price: int) -> tuple[int, int]:
        mask = 0
        for k in range(n):
            if price <= thresholds[k]:
                mask |= 1 << k
        rev = price * mask.bit_count() + sub_profit[full ^ mask]
        return rev, mask

    consumer_ok_cache: dict[tuple[int, int], bool] = {}

    def consumer_ok(price: int, mask: int) -> bool:
        key = (price, mask)
        cached = consumer_ok_cache.get(key)
        if cached is not None:
            return cached
        rest = full ^ mask
        ok = True
        for k in range(n):
            value = scaled[k]
            bit = 1 << k
            if mask & bit:
                base = value - price
                alt_price = sub_price[rest | bit]
                alt = value - alt_price if alt_price <= value else 0
            else:
                stay_price = sub_price[rest]
                base = value - stay_price if stay_price <= value else 0
                alt = value - price
            if alt > base:
                ok = False
                break
        consumer_ok_cache[key] = ok
        return ok

    best_rev = None
    best_profile = None
    for thresholds in product(threshold_choices, repeat=n):
        seller_best = sub_profit[full]  # price everyone out, clear statically
        outcomes = []
        for price in opening_choices:
            rev, mask = revenue_and_mask(thresholds, price)
            outcomes.append((price, rev, mask))
            if rev > seller_best:
                seller_best = rev
        for price, rev, mask in outcomes:
            if rev != seller_best:
                continue
            if not consumer_ok(price, mask):
                continue
            if best_rev is None or rev > best_rev:
                best_rev = rev
                best_profile = (thresholds, price)

    if best_rev is None:
        return Fraction(0), None
    thresholds, price = best_profile
    profile = StrategyProfile2P(
        tuple(Fraction(t, scale) for t in thresholds), Fraction(price, scale)
    )
    return Fraction(best_rev, scale), profile

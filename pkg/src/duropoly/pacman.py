"""Full-surplus extraction: when greedy top-value pricing takes everything.

The seller's greedy strategy posts, each period, the highest valuation still
unserved; impatient consumers buy the first time a price gives them
non-negative utility. The pair extracts the entire consumer surplus in
equilibrium exactly when (a) the number of distinct valuations fits within
the horizon and (b) every consumer's own value is already the static price
of their tail -- which forces valuations to fall off steeply (each distinct
value at least doubles the next ones in the right weighted sense).

Equality of value and tail price is judged after tie-breaking: a revenue tie
resolved to the consumer's own index counts, since the smallest-index rule
returns the highest optimal price. Markets that qualify only through such a
tie are flagged ``tie_dependent``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .model import Instance, Rational, SizeGuardError
from .static_monopoly import static_price

MAX_SUBSET_CONSUMERS = 15


@dataclass(frozen=True)
class DistinctProfile:
    """Distinct valuations with multiplicities, highest first."""

    values: tuple[Rational, ...]
    counts: tuple[int, ...]

    @property
    def distinct_count(self) -> int:
        return len(self.values)


def distinct_profile(inst: Instance) -> DistinctProfile:
    """Collapse the sorted valuations into (distinct value, multiplicity) runs."""
    values: list[Rational] = []
    counts: list[int] = []
    for v in inst.valuations:
        if values and values[-1] == v:
            counts[-1] += 1
        else:
            values.append(v)
            counts.append(1)
    return DistinctProfile(tuple(values), tuple(counts))


class PacmanCheck(NamedTuple):
    """Result of the full-surplus eligibility test.

    ``witness`` is None when eligible; otherwise the first consumer whose
    tail price falls below their value, or the distinct-value count when
    only the horizon is too short. ``tie_dependent`` marks eligibility that
    rests on a revenue tie resolved toward the consumer's own index.
    """

    eligible: bool
    witness: int | None
    tie_dependent: bool


def pacman_condition(inst: Instance) -> PacmanCheck:
    """Can some equilibrium extract the whole consumer surplus?

    True iff the number of distinct valuations is at most the horizon and
    every consumer's tail static price equals their own value.
    """
    values = inst.valuations
    n = inst.n
    tie_dependent = False
    for i in range(1, n + 1):
        best = None
        ties_at_own = False
        for j in range(i, n + 1):
            revenue = (j - i + 1) * values[j - 1]
            if best is None or revenue > best:
                best = revenue
                best_j = j
            elif revenue == best and best_j == i:
                ties_at_own = True
        if best_j != i:
            return PacmanCheck(False, i, False)
        if ties_at_own:
            tie_dependent = True
    profile = distinct_profile(inst)
    if profile.distinct_count > inst.periods:
        return PacmanCheck(False, profile.distinct_count, tie_dependent)
    return PacmanCheck(True, None, tie_dependent)


def simulate_pacman(inst: Instance) -> tuple[Rational, tuple[Rational, ...]]:
    """Play the greedy strategy pair; return (revenue, posted prices).

    Period ``t`` posts the ``t``-th highest distinct value and every consumer
    at that value buys immediately; the run stops after
    ``min(distinct values, horizon)`` periods. This simulates the strategies
    whether or not they form an equilibrium.
    """
    profile = distinct_profile(inst)
    rounds = min(profile.distinct_count, inst.periods)
    prices = profile.values[:rounds]
    revenue = sum(
        (profile.counts[t] * profile.values[t] for t in range(rounds)), Fraction(0)
    )
    return revenue, prices


def subset_price_property(inst: Instance) -> bool:
    """Does every non-empty consumer subset price statically at its maximum value?

    Equivalent to the per-tail condition ``tail price == own value`` for all
    consumers; checked here by direct enumeration, short-circuiting on the
    first failing subset.

    Raises:
        SizeGuardError: more consumers than the exponential guard allows.
    """
    n = inst.n
    if n > MAX_SUBSET_CONSUMERS:
        raise SizeGuardError(
            f"subset_price_property enumerates 2^n subsets and is limited to "
            f"n <= {MAX_SUBSET_CONSUMERS}; got n = {n}"
        )
    values = inst.valuations
    for mask in range(1, 1 << n):
        subset = [values[k] for k in range(n) if mask & (1 << k)]
        price, _ = static_price(subset)  # subset of a sorted tuple stays sorted
        if price != subset[0]:
            return False
    return True


def pacman1_inequality(inst: Instance, beta: int) -> bool:
    """Check the steep-decay inequalities behind greedy-price optimality.

    For every ``k`` in ``2..beta`` and ``i < k`` (with distinct values and
    multiplicities read as zero past the end):

        counts[i] * values[i] - counts[i] * values[k] - counts[beta+i] * values[beta+i] >= 0

    Raises:
        ValueError: the price condition (tail price == own value) fails, so
            the hypothesis of the inequality is not met, or ``beta < 2``.
    """
    if beta < 2:
        raise ValueError(f"beta must be >= 2, got {beta}")
    violation = _first_price_violation(inst)
    if violation is not None:
        raise ValueError(
            "hypothesis fails: some consumer's tail static price is below "
            f"their value (first violation at consumer {violation})"
        )
    profile = distinct_profile(inst)

    def w(idx: int) -> Rational:
        return profile.values[idx - 1] if idx <= profile.distinct_count else Fraction(0)

    def count(idx: int) -> int:
        return profile.counts[idx - 1] if idx <= profile.distinct_count else 0

    for k in range(2, beta + 1):
        for i in range(1, k):
            if count(i) * w(i) - count(i) * w(k) - count(beta + i) * w(beta + i) < 0:
                return False
    return True


def _first_price_violation(inst: Instance) -> int | None:
    """First consumer whose tail static price sits below their own value."""
    values = inst.valuations
    n = inst.n
    for i in range(1, n + 1):
        best = None
        best_j = i
        for j in range(i, n + 1):
            revenue = (j - i + 1) * values[j - 1]
            if best is None or revenue > best:
                best = revenue
                best_j = j
        if best_j != i:
            return i
    return None


def profit_with_first_price(inst: Instance, k: int) -> Rational:
    """Whole-game revenue when the opening price is the k-th distinct value.

    Everyone valued at or above that price buys immediately; the greedy
    strategy then clears one distinct value per remaining period. Opening at
    the very top (k = 1) weakly dominates every other opening on markets
    satisfying the price condition.
    """
    profile = distinct_profile(inst)
    if not 1 <= k <= profile.distinct_count:
        raise IndexError(f"k {k} out of range 1..{profile.distinct_count}")
    revenue = sum(profile.counts[:k]) * profile.values[k - 1]
    for j in range(k + 1, min(inst.periods + k - 1, profile.distinct_count) + 1):
        revenue += profile.counts[j - 1] * profile.values[j - 1]
    return revenue

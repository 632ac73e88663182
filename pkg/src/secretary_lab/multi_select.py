"""Online selection of k candidates: k-pegging and the fair-half baseline.

k-pegging works on candidates relabeled by decreasing predicted value, so the
internal label set [k] = {0..k-1} is the predicted top k. It tracks four
disjoint groups: H (predicted top-k not yet resolved), S (accepted), B
(backups: top-k members parked in favour of a pegged future candidate), and P
(pegged future candidates). |B| + |H| + |S| = k holds after every arrival.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .core import Instance, Schedule

__all__ = [
    "SetSelection",
    "k_pegging_run",
    "fair_half_run",
    "rank_accessor",
]

CASE_1 = "Case1"
CASE_2 = "Case2"
CASE_3A = "Case3a"
CASE_4A = "Case4a"
CASE_4B = "Case4b"
FAIR_HALF = "FairHalf"


@dataclass(frozen=True)
class SetSelection:
    """Accepted candidates (original indices) in acceptance order."""

    accepted_indices: tuple[int, ...]
    per_index_rule: tuple[str, ...]
    acceptance_times: tuple[float, ...]
    capacity: int

    @property
    def size(self) -> int:
        return len(self.accepted_indices)


def _check_k(instance: Instance, k: int, schedule: Schedule) -> None:
    if instance.n != schedule.n:
        raise ValueError(
            f"instance has {instance.n} candidates but schedule has {schedule.n}"
        )
    if not 1 <= k <= instance.n:
        raise ValueError(f"k must lie in [1, {instance.n}], got {k!r}")


class _TopK:
    """k-th highest value among observations so far (-inf until k seen)."""

    __slots__ = ("k", "heap")

    def __init__(self, k: int) -> None:
        self.k = k
        self.heap: list[float] = []

    def kth_highest(self) -> float:
        return self.heap[0] if len(self.heap) == self.k else -math.inf

    def observe(self, v: float) -> None:
        if len(self.heap) < self.k:
            heapq.heappush(self.heap, v)
        elif v > self.heap[0]:
            heapq.heapreplace(self.heap, v)


def k_pegging_run(
    instance: Instance,
    k: int,
    schedule: Schedule,
    check_invariants: bool = False,
) -> SetSelection:
    """Pegging generalized to k slots (additive errors).

    Arrivals from the predicted top k are accepted when fair-looking (better
    than the k-th best true value so far, after time 1/2); an unfair-looking
    one either gets accepted outright (nobody later could plausibly beat it)
    or is parked as a backup in favour of one pegged future candidate. Pegged
    candidates are accepted on arrival, releasing their backup. Fair-looking
    outsiders can displace a weaker backup or a weaker not-yet-seen top-k
    member.
    """
    _check_k(instance, k, schedule)
    n = instance.n
    by_pred = sorted(
        range(n), key=lambda i: (-instance.predicted_values[i], i)
    )
    u = [instance.true_values[i] for i in by_pred]
    uhat = [instance.predicted_values[i] for i in by_pred]
    label_of = [0] * n
    for lab, orig in enumerate(by_pred):
        label_of[orig] = lab
    order = [label_of[i] for i in schedule.arrival_order]

    top_k = set(range(k))
    H = set(range(k))
    S: list[int] = []
    rules: list[str] = []
    times: list[float] = []
    B: set[int] = set()
    P: set[int] = set()
    peg: dict[int, int] = {}
    peg_inv: dict[int, int] = {}
    seen = _TopK(k)
    eps_t = 0.0

    def take(lab: int, rule: str, t: float) -> None:
        S.append(lab)
        rules.append(rule)
        times.append(t)

    for pos, lab in enumerate(order):
        t = schedule.arrival_times[by_pred[lab]]
        err = abs(uhat[lab] - u[lab])
        if err > eps_t:
            eps_t = err
        if lab in P:
            take(lab, CASE_1, t)
            P.discard(lab)
            backup = peg_inv.pop(lab)
            B.discard(backup)
            del peg[backup]
        else:
            tau = seen.kth_highest()
            fair = u[lab] > tau and t > 0.5
            cand = lab in H
            if cand and fair:
                take(lab, CASE_2, t)
                H.discard(lab)
            elif cand:
                contenders = {
                    j
                    for j in order[pos + 1 :]
                    if u[lab] < uhat[j] + eps_t
                } - P - top_k
                if not contenders:
                    take(lab, CASE_3A, t)
                    H.discard(lab)
                else:
                    pegged = min(contenders)
                    P.add(pegged)
                    B.add(lab)
                    H.discard(lab)
                    peg[lab] = pegged
                    peg_inv[pegged] = lab
            elif fair:
                beatable = {j for j in B if u[lab] > u[j]}
                if beatable:
                    out = min(beatable)
                    take(lab, CASE_4A, t)
                    B.discard(out)
                    released = peg.pop(out)
                    P.discard(released)
                    del peg_inv[released]
                else:
                    weaker = {j for j in H if u[lab] > uhat[j] - eps_t}
                    if weaker:
                        take(lab, CASE_4B, t)
                        H.discard(min(weaker))
        seen.observe(u[lab])
        if check_invariants:
            assert len(B) + len(H) + len(S) == k, (len(B), len(H), len(S))
            assert len(B) == len(P) == len(peg) == len(peg_inv)
            assert set(peg.values()) == P and set(peg) == B
            assert not P & top_k
        if len(S) == k:
            break

    return SetSelection(
        accepted_indices=tuple(by_pred[lab] for lab in S),
        per_index_rule=tuple(rules),
        acceptance_times=tuple(times),
        capacity=k,
    )


def fair_half_run(instance: Instance, k: int, schedule: Schedule) -> SetSelection:
    """Reject everything before time 1/2; afterwards accept any candidate
    among the k best observed so far, while slots remain."""
    _check_k(instance, k, schedule)
    u = instance.true_values
    seen = _TopK(k)
    accepted: list[int] = []
    times: list[float] = []
    for i in schedule.arrival_order:
        t = schedule.arrival_times[i]
        if t > 0.5 and len(accepted) < k and u[i] > seen.kth_highest():
            accepted.append(i)
            times.append(t)
        seen.observe(u[i])
        if len(accepted) == k:
            break
    return SetSelection(
        accepted_indices=tuple(accepted),
        per_index_rule=tuple(FAIR_HALF for _ in accepted),
        acceptance_times=tuple(times),
        capacity=k,
    )


def rank_accessor(instance: Instance, rank: int) -> int:
    """Original index of the rank-th highest true value (rank 1 = best);
    ties go to the lower index."""
    if not 1 <= rank <= instance.n:
        raise ValueError(f"rank must lie in [1, {instance.n}], got {rank!r}")
    u = instance.true_values
    by_value = sorted(range(instance.n), key=lambda i: (-u[i], i))
    return by_value[rank - 1]

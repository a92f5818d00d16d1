"""Queue state: local/controller FIFO queues and prediction-window counters.

Requests are homogeneous, so FIFO queues store batches (origin switch,
arrival slot, count) instead of one object per request; partial service
splits the head batch.  This keeps slot updates O(batches touched) while
preserving exact FIFO semantics and per-arrival-slot response times.

Each switch tracks, per lookahead depth d in [0, D_i], how many requests of
slot t+d are still untreated and how many were already pre-admitted
(treated).  When a slot's actual count is revealed, the d=0 layer is
reconciled: missing arrivals become untreated work, over-predictions turn
already-admitted requests into phantoms.  Phantoms keep consuming queue
space and service capacity but are excluded from response statistics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class ContractViolation(AssertionError):
    """An operation was called outside its admissible range (policy bug)."""


class Batch:
    """Contiguous run of identical-arrival-slot requests in one queue.

    admission_slot < arrival_slot only for pre-admitted future requests;
    after same-arrival batches of already-arrived requests merge, the field
    keeps the earliest admission.
    """

    __slots__ = ("origin", "arrival_slot", "admission_slot", "count", "phantoms")

    def __init__(
        self,
        origin: int,
        arrival_slot: int,
        count: int,
        phantoms: int = 0,
        admission_slot: int | None = None,
    ):
        self.origin = origin
        self.arrival_slot = arrival_slot
        self.admission_slot = arrival_slot if admission_slot is None else admission_slot
        self.count = count
        self.phantoms = phantoms

    def __repr__(self):
        return (
            f"Batch(origin={self.origin}, arrival_slot={self.arrival_slot}, "
            f"admission_slot={self.admission_slot}, count={self.count}, "
            f"phantoms={self.phantoms})"
        )


@dataclass
class ServeResult:
    served: int = 0
    completions: int = 0  # real, already-arrived requests finished now
    sum_response_slots: int = 0
    phantom_completions: int = 0
    # portions finished before their arrival slot: (origin, arrival_slot, n)
    preserved: list[tuple[int, int, int]] = field(default_factory=list)


class FifoQueue:
    """FIFO of batches with O(1) backlog size."""

    __slots__ = ("batches", "size")

    def __init__(self):
        self.batches: deque[Batch] = deque()
        self.size = 0

    def push(self, batch: Batch, now: int) -> None:
        if batch.count <= 0:
            return
        self.size += batch.count
        # merging is safe only once both runs have actually arrived: their
        # response times depend on arrival_slot alone, and phantom flags for
        # arrived requests are already final
        if self.batches:
            tail = self.batches[-1]
            if tail.arrival_slot == batch.arrival_slot and batch.arrival_slot <= now:
                tail.count += batch.count
                tail.phantoms += batch.phantoms
                tail.origin = -1
                if batch.admission_slot < tail.admission_slot:
                    tail.admission_slot = batch.admission_slot
                return
        self.batches.append(batch)

    def serve(self, capacity: int, now: int) -> ServeResult:
        out = ServeResult()
        remaining = int(capacity)
        while remaining > 0 and self.batches:
            head = self.batches[0]
            take = min(remaining, head.count)
            if head.arrival_slot > now:
                out.preserved.append((head.origin, head.arrival_slot, take))
            else:
                real_in_head = head.count - head.phantoms
                real_served = min(take, real_in_head)
                out.completions += real_served
                out.sum_response_slots += real_served * (now - head.arrival_slot)
                out.phantom_completions += take - real_served
                head.phantoms -= take - real_served
            head.count -= take
            remaining -= take
            out.served += take
            self.size -= take
            if head.count == 0:
                self.batches.popleft()
        return out


@dataclass
class Cohort:
    """Pre-admitted requests of one (switch, future arrival slot)."""

    batches: list[Batch] = field(default_factory=list)  # admission order
    preserved: int = 0  # completed before arrival, realness pending


@dataclass
class RevealResult:
    actual: int = 0
    correction: int = 0  # change applied to the untreated d=0 counter
    phantoms_flagged: int = 0  # queued pre-admissions that turned out fake
    preserved_real: int = 0  # pre-served requests confirmed real: response 0
    preserved_phantom: int = 0  # pre-served requests that never arrive


class SwitchState:
    """Lookahead window counters plus the switch-local processing queue.

    The state carries the absolute slot its d=0 layer refers to; admission
    and reconciliation are expressed against that slot.
    """

    __slots__ = ("idx", "window", "slot", "untreated", "treated", "local", "cohorts")

    def __init__(self, idx: int, window: int, initial_predictions: list[int], slot: int = 0):
        if len(initial_predictions) != window + 1:
            raise ValueError("need one initial prediction per window layer")
        self.idx = idx
        self.window = int(window)
        self.slot = int(slot)
        self.untreated = [int(x) for x in initial_predictions]
        self.treated = [0] * (window + 1)
        self.local = FifoQueue()
        self.cohorts: dict[int, Cohort] = {}

    def q0(self) -> int:
        return self.untreated[0]

    def qp(self) -> int:
        return sum(self.untreated)

    def qs(self) -> int:
        return self.local.size

    def admit(self, y: int) -> list[Batch]:
        """Drain y untreated requests, current slot first then increasing d.

        Future-slot drains are recorded as treated and registered in the
        slot's cohort so a later reveal can reconcile them.
        """
        u0 = self.untreated[0]
        if self.window == 0:
            # no lookahead: qp == q0, so y is pinned to the current backlog
            if y != u0:
                raise ContractViolation(
                    f"switch {self.idx}: Y={y} outside [{u0}, {u0}]"
                )
            if y == 0:
                return []
            self.untreated[0] = 0
            return [Batch(self.idx, self.slot, y)]
        if y < u0 or y > self.qp():
            raise ContractViolation(
                f"switch {self.idx}: Y={y} outside [{u0}, {self.qp()}]"
            )
        batches: list[Batch] = []
        remaining = int(y)
        for d in range(self.window + 1):
            if remaining == 0:
                break
            take = min(remaining, self.untreated[d])
            if take == 0:
                continue
            self.untreated[d] -= take
            remaining -= take
            batch = Batch(self.idx, self.slot + d, take, admission_slot=self.slot)
            batches.append(batch)
            if d > 0:
                self.treated[d] += take
                self.cohorts.setdefault(self.slot + d, Cohort()).batches.append(batch)
        return batches

    def reveal_actual(self, actual: int) -> RevealResult | None:
        """Reconcile the d=0 layer against the revealed actual count.

        Pre-admissions beyond the actual count become phantoms, flagged on
        the most recently admitted members first; already pre-served
        requests are confirmed last, so surviving ones complete with
        response 0 at this slot.  Returns None when the slot had no
        pre-admissions at all (the counter is simply set to the actual).
        """
        if self.treated[0] == 0 and not self.cohorts:
            self.untreated[0] = actual
            return None
        res = RevealResult(actual=int(actual))
        treated = self.treated[0]
        cohort = self.cohorts.pop(self.slot, None)
        if cohort is not None:
            live = sum(b.count for b in cohort.batches)
            if live + cohort.preserved != treated:
                raise ContractViolation(
                    f"switch {self.idx}: cohort for slot {self.slot} does not add up"
                )
            quota = max(0, treated - actual)
            for batch in reversed(cohort.batches):
                if quota == 0:
                    break
                mark = min(quota, batch.count - batch.phantoms)
                batch.phantoms += mark
                quota -= mark
                res.phantoms_flagged += mark
            res.preserved_phantom = min(quota, cohort.preserved)
            res.preserved_real = cohort.preserved - res.preserved_phantom
        elif treated:
            raise ContractViolation(f"switch {self.idx}: treated requests lost")
        new_untreated = max(actual - treated, 0)
        res.correction = new_untreated - self.untreated[0]
        self.untreated[0] = new_untreated
        self.treated[0] = min(treated, actual)
        return res

    def slide(self, new_far_prediction: int) -> None:
        """Advance the window one slot and append the fresh far-slot layer."""
        if self.untreated[0] != 0:
            raise ContractViolation(
                f"switch {self.idx}: sliding with {self.untreated[0]} untreated "
                f"current requests (admission must drain the current slot)"
            )
        if self.window == 0:
            self.untreated[0] = int(new_far_prediction)
        else:
            self.untreated.pop(0)
            self.treated.pop(0)
            self.untreated.append(int(new_far_prediction))
            self.treated.append(0)
        self.slot += 1


class ControllerState:
    __slots__ = ("idx", "queue", "capacity")

    def __init__(self, idx: int, capacity: int):
        self.idx = idx
        self.queue = FifoQueue()
        self.capacity = int(capacity)

    def qc(self) -> int:
        return self.queue.size


def admit(sw: SwitchState, y: int) -> list[Batch]:
    return sw.admit(y)


def enqueue(dest: SwitchState | ControllerState, batches: list[Batch], now: int) -> None:
    queue = dest.local if isinstance(dest, SwitchState) else dest.queue
    for b in batches:
        queue.push(b, now)


def serve_fifo(q: FifoQueue, capacity: int, now: int) -> ServeResult:
    if capacity < 0:
        raise ContractViolation("service capacity must be >= 0")
    return q.serve(capacity, now)


def slide_window(sw: SwitchState, new_far_prediction: int, actual_now: int) -> RevealResult:
    """Advance the window, then reconcile the slot that just became current.

    The simulator performs the two halves around the slot boundary (slide at
    slot end, reveal at the next slot's start); composed here they realize
    the once-per-slot window update.
    """
    sw.slide(new_far_prediction)
    predicted_now = sw.untreated[0]
    res = sw.reveal_actual(actual_now)
    if res is None:
        res = RevealResult(actual=int(actual_now), correction=int(actual_now) - predicted_now)
    return res

"""Pure-Python kernels; the reference the compiled extension must match bit for bit."""

from __future__ import annotations

import heapq
import math

from .failure_model import walk_phases
from .rng import Substream

NAME = "python"

FAIL = 0
DONE = 1

SURVIVED = 0
FATAL = 1
POLICY = 2


def count_recoverable(kind, columns, group_size, group_tol, n_positions, max_size):
    """Decodable subsets of each size, by depth-first search over increasing indices.

    Decodability is monotone (a superset of an undecodable pattern is
    undecodable), so the search never descends below a failed node.
    """
    counts = [0] * (max_size + 1)
    counts[0] = 1
    if max_size == 0:
        return counts
    N = n_positions
    if kind == 0:
        def extend(basis, start, depth):
            for i in range(start, N):
                c = columns[i]
                for b in basis:
                    c = min(c, c ^ b)
                if c == 0:
                    continue
                counts[depth] += 1
                if depth < max_size:
                    basis.append(c)
                    extend(basis, i + 1, depth + 1)
                    basis.pop()
        extend([], 0, 1)
    else:
        used = [0] * (N // group_size + 1)

        def extend(start, depth):
            for i in range(start, N):
                g = i // group_size
                if used[g] >= group_tol:
                    continue
                counts[depth] += 1
                if depth < max_size:
                    used[g] += 1
                    extend(i + 1, depth + 1)
                    used[g] -= 1
        extend(0, 1)
    return counts


def _independent_with(columns, erased, new_col):
    basis = []
    for p in erased:
        c = columns[p]
        for b in basis:
            c = min(c, c ^ b)
        basis.append(c)
    c = new_col
    for b in basis:
        c = min(c, c ^ b)
    return c != 0


def simulate_one(plan, seed, run_index):
    """One mission; returns ``(code, time, exhausted_at, peak)``.

    ``code`` is SURVIVED, FATAL or POLICY; ``exhausted_at`` is -1.0 when the
    spare pool never ran dry while a repair was needed.
    """
    rng = Substream(seed, run_index)
    N = plan.n_positions
    mission = plan.mission
    starts = plan.starts
    rates = plan.rates
    surv0 = plan.surv0
    inf = math.inf

    fail = [inf] * N
    for p in range(N):
        u = rng.uniform()
        if u >= surv0:
            t = walk_phases(starts, rates, 0.0, -math.log(u))
            if t < mission:
                fail[p] = t
    S = plan.spares
    spare_fail = []
    if S > 0:
        spare_fail = [inf] * S
        for s in range(S):
            u = rng.uniform()
            if u >= surv0:
                t = walk_phases(starts, rates, 0.0, -math.log(u))
                if t < mission:
                    spare_fail[s] = t

    events = []
    seq = 0
    for p in range(N):
        if fail[p] < mission:
            events.append((fail[p], seq, FAIL, p, 0))
            seq += 1
    heapq.heapify(events)

    gen = [0] * N
    erased = [False] * N
    erased_list = []
    group_count = [0] * (N // plan.group_size + 1) if plan.kind == 1 else None
    count = 0
    peak = 0
    next_spare = 0
    exhausted_at = -1.0
    columns = plan.columns

    while events:
        t, _, kind, p, g = heapq.heappop(events)
        if g != gen[p]:
            continue
        if kind == DONE:
            erased[p] = False
            erased_list.remove(p)
            count -= 1
            if group_count is not None:
                group_count[p // plan.group_size] -= 1
            continue

        if not erased[p]:
            # loss check on the enlarged erasure pattern
            lost = False
            if plan.mode == 0:
                if plan.kind == 0:
                    lost = not _independent_with(columns, erased_list, columns[p])
                else:
                    lost = group_count[p // plan.group_size] + 1 > plan.group_tol
            erased[p] = True
            erased_list.append(p)
            count += 1
            if group_count is not None:
                group_count[p // plan.group_size] += 1
            if count > peak:
                peak = count
            if plan.mode == 1 and count > plan.n_f:
                j = count - plan.n_f
                if j > 3:
                    lost = True
                else:
                    lost = not (rng.uniform() < plan.ratios[j - 1])
            if lost:
                return FATAL, t, exhausted_at, peak

        # commit a spare to the erased position (fresh rebuild or restart)
        gen[p] += 1
        if S < 0:
            u = rng.uniform()
            tf = walk_phases(starts, rates, t, -math.log(u))
            have = True
        else:
            while next_spare < S and spare_fail[next_spare] <= t:
                next_spare += 1
            have = next_spare < S
            if have:
                tf = spare_fail[next_spare]
                next_spare += 1
        if not have:
            if exhausted_at < 0.0:
                exhausted_at = t
            if plan.policy == 1:
                return POLICY, t, exhausted_at, peak
            continue
        done = t + plan.repair
        if done < mission:
            heapq.heappush(events, (done, seq, DONE, p, gen[p]))
            seq += 1
        if tf < mission:
            heapq.heappush(events, (tf, seq, FAIL, p, gen[p]))
            seq += 1

    return SURVIVED, mission, exhausted_at, peak


def run_campaign(plan, seed, start, stop):
    """Counters ``(losses, fatal, policy, exhaustions, peak_sum)`` over runs ``[start, stop)``."""
    fatal = policy = exhaustions = peak_sum = 0
    for i in range(start, stop):
        code, _, exhausted_at, peak = simulate_one(plan, seed, i)
        if code == FATAL:
            fatal += 1
        elif code == POLICY:
            policy += 1
        if exhausted_at >= 0.0:
            exhaustions += 1
        peak_sum += peak
    return fatal + policy, fatal, policy, exhaustions, peak_sum

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.  Every floating-point step mirrors ``_pykernel`` so the two
backends agree bit for bit; keep them in lockstep when editing either."""

from libc.math cimport log, INFINITY
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

NAME = "cython"

cdef enum:
    FAIL = 0
    DONE = 1
    MAX_PHASES = 64
    MAX_DEPTH = 64

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef struct Rng:
    uint64_t s0, s1, s2, s3


cdef inline void rng_seed(Rng* r, uint64_t seed, uint64_t run) noexcept nogil:
    cdef uint64_t base = mix64(seed)
    cdef uint64_t first = 4 * run
    r.s0 = mix64(base + GOLDEN * (first + 1))
    r.s1 = mix64(base + GOLDEN * (first + 2))
    r.s2 = mix64(base + GOLDEN * (first + 3))
    r.s3 = mix64(base + GOLDEN * (first + 4))


cdef inline double rng_uniform(Rng* r) noexcept nogil:
    cdef uint64_t result = rotl(r.s1 * 5, 7) * 9
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = rotl(r.s3, 45)
    return (<double>(result >> 12) + 0.5) * (1.0 / 4503599627370496.0)


cdef struct Plan:
    int kind
    int n_positions
    int group_size
    int group_tol
    int spares
    int mode
    int n_f
    int policy
    int n_phases
    double mission
    double repair
    double surv0
    double starts[MAX_PHASES]
    double rates[MAX_PHASES]
    double ratios[3]
    uint64_t* columns


cdef inline double walk(const Plan* pl, double age, double budget) noexcept nogil:
    cdef int k = 0
    cdef int last = pl.n_phases - 1
    cdef double t, rate, end, cap
    while k + 1 < pl.n_phases and pl.starts[k + 1] <= age:
        k += 1
    t = age
    while True:
        rate = pl.rates[k]
        end = pl.starts[k + 1] if k < last else INFINITY
        if rate > 0.0:
            cap = rate * (end - t)
            if budget <= cap:
                return t + budget / rate
            budget -= cap
        elif k == last:
            return INFINITY
        t = end
        k += 1


cdef struct Work:
    int cap_events
    int n_events
    double* ev_time
    int64_t* ev_seq
    int* ev_kind
    int* ev_pos
    int* ev_gen
    double* fail
    double* spare_fail
    int* gen
    char* erased
    int* erased_list
    int n_erased
    int* group_count
    uint64_t* basis


cdef int work_init(Work* w, const Plan* pl) noexcept nogil:
    cdef int N = pl.n_positions
    cdef int S = pl.spares if pl.spares > 0 else 0
    cdef int groups = (N // pl.group_size + 1) if pl.kind == 1 else 1
    w.cap_events = 4 * (N + S) + 64
    w.n_events = 0
    w.ev_time = <double*>malloc(w.cap_events * sizeof(double))
    w.ev_seq = <int64_t*>malloc(w.cap_events * sizeof(int64_t))
    w.ev_kind = <int*>malloc(w.cap_events * sizeof(int))
    w.ev_pos = <int*>malloc(w.cap_events * sizeof(int))
    w.ev_gen = <int*>malloc(w.cap_events * sizeof(int))
    w.fail = <double*>malloc((N + 1) * sizeof(double))
    w.spare_fail = <double*>malloc((S + 1) * sizeof(double))
    w.gen = <int*>malloc((N + 1) * sizeof(int))
    w.erased = <char*>malloc(N + 1)
    w.erased_list = <int*>malloc((N + 1) * sizeof(int))
    w.group_count = <int*>malloc(groups * sizeof(int))
    w.basis = <uint64_t*>malloc((N + 1) * sizeof(uint64_t))
    if (w.ev_time == NULL or w.ev_seq == NULL or w.ev_kind == NULL or w.ev_pos == NULL
            or w.ev_gen == NULL or w.fail == NULL or w.spare_fail == NULL or w.gen == NULL
            or w.erased == NULL or w.erased_list == NULL or w.group_count == NULL
            or w.basis == NULL):
        return -1
    return 0


cdef void work_free(Work* w) noexcept nogil:
    free(w.ev_time); free(w.ev_seq); free(w.ev_kind); free(w.ev_pos); free(w.ev_gen)
    free(w.fail); free(w.spare_fail); free(w.gen); free(w.erased)
    free(w.erased_list); free(w.group_count); free(w.basis)


cdef int push(Work* w, double t, int64_t seq, int kind, int pos, int g) noexcept nogil:
    cdef int c
    if w.n_events == w.cap_events:
        c = 2 * w.cap_events
        w.ev_time = <double*>realloc(w.ev_time, c * sizeof(double))
        w.ev_seq = <int64_t*>realloc(w.ev_seq, c * sizeof(int64_t))
        w.ev_kind = <int*>realloc(w.ev_kind, c * sizeof(int))
        w.ev_pos = <int*>realloc(w.ev_pos, c * sizeof(int))
        w.ev_gen = <int*>realloc(w.ev_gen, c * sizeof(int))
        if (w.ev_time == NULL or w.ev_seq == NULL or w.ev_kind == NULL
                or w.ev_pos == NULL or w.ev_gen == NULL):
            return -1
        w.cap_events = c
    c = w.n_events
    w.ev_time[c] = t
    w.ev_seq[c] = seq
    w.ev_kind[c] = kind
    w.ev_pos[c] = pos
    w.ev_gen[c] = g
    w.n_events = c + 1
    return 0


cdef inline int pop_min(Work* w) noexcept nogil:
    """Move the (time, seq)-smallest event to slot ``n_events`` and return its index."""
    cdef int i, best = 0
    cdef int last
    cdef double bt = w.ev_time[0]
    cdef int64_t bs = w.ev_seq[0]
    for i in range(1, w.n_events):
        if w.ev_time[i] < bt or (w.ev_time[i] == bt and w.ev_seq[i] < bs):
            best = i
            bt = w.ev_time[i]
            bs = w.ev_seq[i]
    last = w.n_events - 1
    if best != last:
        w.ev_time[best], w.ev_time[last] = w.ev_time[last], w.ev_time[best]
        w.ev_seq[best], w.ev_seq[last] = w.ev_seq[last], w.ev_seq[best]
        w.ev_kind[best], w.ev_kind[last] = w.ev_kind[last], w.ev_kind[best]
        w.ev_pos[best], w.ev_pos[last] = w.ev_pos[last], w.ev_pos[best]
        w.ev_gen[best], w.ev_gen[last] = w.ev_gen[last], w.ev_gen[best]
    w.n_events = last
    return last


cdef inline bint independent_with(const Plan* pl, Work* w, uint64_t col) noexcept nogil:
    cdef int i, j, nb = 0
    cdef uint64_t c, x
    for i in range(w.n_erased):
        c = pl.columns[w.erased_list[i]]
        for j in range(nb):
            x = c ^ w.basis[j]
            if x < c:
                c = x
        w.basis[nb] = c
        nb += 1
    for j in range(nb):
        x = col ^ w.basis[j]
        if x < col:
            col = x
    return col != 0


cdef int simulate_one_c(const Plan* pl, Work* w, uint64_t seed, uint64_t run,
                        double* out_time, double* out_exhausted, int* out_peak) noexcept nogil:
    """Returns 0 survived, 1 fatal pattern, 2 exhaustion policy, -1 on allocation failure."""
    cdef Rng r
    cdef int N = pl.n_positions
    cdef int S = pl.spares
    cdef double mission = pl.mission
    cdef double u, t, tf, done
    cdef int p, s, i, g, kind, idx, j, next_spare = 0, count = 0, peak = 0
    cdef int64_t seq = 0
    cdef bint lost, have
    cdef double exhausted_at = -1.0

    rng_seed(&r, seed, run)
    for p in range(N):
        w.fail[p] = INFINITY
        u = rng_uniform(&r)
        if u >= pl.surv0:
            t = walk(pl, 0.0, -log(u))
            if t < mission:
                w.fail[p] = t
    for s in range(S):
        w.spare_fail[s] = INFINITY
        u = rng_uniform(&r)
        if u >= pl.surv0:
            t = walk(pl, 0.0, -log(u))
            if t < mission:
                w.spare_fail[s] = t

    w.n_events = 0
    for p in range(N):
        if w.fail[p] < mission:
            if push(w, w.fail[p], seq, FAIL, p, 0) < 0:
                return -1
            seq += 1

    memset(w.gen, 0, N * sizeof(int))
    memset(w.erased, 0, N)
    w.n_erased = 0
    if pl.kind == 1:
        memset(w.group_count, 0, (N // pl.group_size + 1) * sizeof(int))

    while w.n_events > 0:
        idx = pop_min(w)
        t = w.ev_time[idx]
        kind = w.ev_kind[idx]
        p = w.ev_pos[idx]
        if w.ev_gen[idx] != w.gen[p]:
            continue
        if kind == DONE:
            w.erased[p] = 0
            for i in range(w.n_erased):
                if w.erased_list[i] == p:
                    for j in range(i, w.n_erased - 1):
                        w.erased_list[j] = w.erased_list[j + 1]
                    break
            w.n_erased -= 1
            count -= 1
            if pl.kind == 1:
                w.group_count[p // pl.group_size] -= 1
            continue

        if not w.erased[p]:
            lost = False
            if pl.mode == 0:
                if pl.kind == 0:
                    lost = not independent_with(pl, w, pl.columns[p])
                else:
                    lost = w.group_count[p // pl.group_size] + 1 > pl.group_tol
            w.erased[p] = 1
            w.erased_list[w.n_erased] = p
            w.n_erased += 1
            count += 1
            if pl.kind == 1:
                w.group_count[p // pl.group_size] += 1
            if count > peak:
                peak = count
            if pl.mode == 1 and count > pl.n_f:
                j = count - pl.n_f
                if j > 3:
                    lost = True
                else:
                    lost = not (rng_uniform(&r) < pl.ratios[j - 1])
            if lost:
                out_time[0] = t
                out_exhausted[0] = exhausted_at
                out_peak[0] = peak
                return 1

        w.gen[p] += 1
        if S < 0:
            u = rng_uniform(&r)
            tf = walk(pl, t, -log(u))
            have = True
        else:
            while next_spare < S and w.spare_fail[next_spare] <= t:
                next_spare += 1
            have = next_spare < S
            if have:
                tf = w.spare_fail[next_spare]
                next_spare += 1
        if not have:
            if exhausted_at < 0.0:
                exhausted_at = t
            if pl.policy == 1:
                out_time[0] = t
                out_exhausted[0] = exhausted_at
                out_peak[0] = peak
                return 2
            continue
        done = t + pl.repair
        if done < mission:
            if push(w, done, seq, DONE, p, w.gen[p]) < 0:
                return -1
            seq += 1
        if tf < mission:
            if push(w, tf, seq, FAIL, p, w.gen[p]) < 0:
                return -1
            seq += 1

    out_time[0] = mission
    out_exhausted[0] = exhausted_at
    out_peak[0] = peak
    return 0


cdef int load_plan(Plan* pl, object plan) except -1:
    cdef int k
    starts = plan.starts
    rates = plan.rates
    if len(starts) > MAX_PHASES:
        raise ValueError(f"at most {MAX_PHASES} bathtub phases are supported")
    if plan.kind == 0 and plan.columns and max(plan.columns) >> 64:
        raise ValueError("the compiled kernel handles at most 64 parity stripes")
    pl.kind = plan.kind
    pl.n_positions = plan.n_positions
    pl.group_size = plan.group_size if plan.group_size > 0 else 1
    pl.group_tol = plan.group_tol
    pl.spares = plan.spares
    pl.mode = plan.mode
    pl.n_f = plan.n_f
    pl.policy = plan.policy
    pl.n_phases = len(starts)
    pl.mission = plan.mission
    pl.repair = plan.repair
    pl.surv0 = plan.surv0
    for k in range(pl.n_phases):
        pl.starts[k] = starts[k]
        pl.rates[k] = rates[k]
    for k in range(3):
        pl.ratios[k] = plan.ratios[k]
    pl.columns = <uint64_t*>malloc((pl.n_positions + 1) * sizeof(uint64_t))
    if pl.columns == NULL:
        raise MemoryError()
    for k in range(pl.n_positions):
        pl.columns[k] = plan.columns[k] if plan.kind == 0 else 0
    return 0


def simulate_one(plan, seed, run_index):
    cdef Plan pl
    cdef Work w
    cdef double t, ex
    cdef int peak, code
    load_plan(&pl, plan)
    try:
        if work_init(&w, &pl) < 0:
            raise MemoryError()
        code = simulate_one_c(&pl, &w, <uint64_t>seed, <uint64_t>run_index, &t, &ex, &peak)
        if code < 0:
            raise MemoryError()
        return code, t, ex, peak
    finally:
        work_free(&w)
        free(pl.columns)


def run_campaign(plan, seed, start, stop):
    cdef Plan pl
    cdef Work w
    cdef double t, ex
    cdef int peak, code
    cdef uint64_t s = <uint64_t>seed
    cdef uint64_t i
    cdef uint64_t lo = start
    cdef uint64_t hi = stop
    cdef long long fatal = 0, policy = 0, exhaustions = 0, peak_sum = 0
    cdef bint oom = False
    load_plan(&pl, plan)
    try:
        if work_init(&w, &pl) < 0:
            raise MemoryError()
        with nogil:
            for i in range(lo, hi):
                code = simulate_one_c(&pl, &w, s, i, &t, &ex, &peak)
                if code < 0:
                    oom = True
                    break
                if code == 1:
                    fatal += 1
                elif code == 2:
                    policy += 1
                if ex >= 0.0:
                    exhaustions += 1
                peak_sum += peak
        if oom:
            raise MemoryError()
        return fatal + policy, fatal, policy, exhaustions, peak_sum
    finally:
        work_free(&w)
        free(pl.columns)


cdef void dfs_gf2(const uint64_t* cols, int N, int start, int depth, int max_size,
                  uint64_t* basis, long long* counts) noexcept nogil:
    cdef int i, j
    cdef uint64_t c, x
    for i in range(start, N):
        c = cols[i]
        for j in range(depth - 1):
            x = c ^ basis[j]
            if x < c:
                c = x
        if c == 0:
            continue
        counts[depth] += 1
        if depth < max_size:
            basis[depth - 1] = c
            dfs_gf2(cols, N, i + 1, depth + 1, max_size, basis, counts)


cdef void dfs_groups(int N, int gsize, int tol, int start, int depth, int max_size,
                     int* used, long long* counts) noexcept nogil:
    cdef int i, g
    for i in range(start, N):
        g = i // gsize
        if used[g] >= tol:
            continue
        counts[depth] += 1
        if depth < max_size:
            used[g] += 1
            dfs_groups(N, gsize, tol, i + 1, depth + 1, max_size, used, counts)
            used[g] -= 1


def count_recoverable(kind, columns, group_size, group_tol, n_positions, max_size):
    cdef int N = n_positions
    cdef int ms = max_size
    cdef int gsize = group_size if group_size > 0 else 1
    cdef int tol = group_tol
    cdef int k
    cdef long long counts[MAX_DEPTH + 1]
    cdef uint64_t basis[MAX_DEPTH]
    cdef uint64_t* cols = NULL
    cdef int* used = NULL
    if ms > MAX_DEPTH:
        raise ValueError(f"subset size is limited to {MAX_DEPTH}")
    for k in range(ms + 1):
        counts[k] = 0
    counts[0] = 1
    if ms == 0:
        return [1]
    if kind == 0:
        if columns and max(columns) >> 64:
            raise ValueError("the compiled kernel handles at most 64 parity stripes")
        cols = <uint64_t*>malloc((N + 1) * sizeof(uint64_t))
        if cols == NULL:
            raise MemoryError()
        for k in range(N):
            cols[k] = columns[k]
        with nogil:
            dfs_gf2(cols, N, 0, 1, ms, basis, counts)
        free(cols)
    else:
        used = <int*>malloc((N // gsize + 1) * sizeof(int))
        if used == NULL:
            raise MemoryError()
        memset(used, 0, (N // gsize + 1) * sizeof(int))
        with nogil:
            dfs_groups(N, gsize, tol, 0, 1, ms, used, counts)
        free(used)
    return [counts[k] for k in range(ms + 1)]

"""Exhaustive subgroup census: visit every subgroup of a group once.

Same bottom-up HNF walk as :func:`cosetforge.abelian.iter_subgroup_hnfs`,
compiled with numba so the desk-scale grid (p^|alpha| <= 2^10, about 2.6e8
subgroups in total) is practical.  At every leaf the subgroup's type is
recomputed from log_p #(p^j H) and checked against the ambient type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import GroupSpec

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _logp(p, v):
    e = 0
    while v > 1:
        v //= p
        e += 1
    return e


@njit(cache=True)
def _log_index(p, moduli, B, scale, work):
    """log_p [Z^n : scale*L + R] for the lattice L with HNF rows B."""
    n = moduli.shape[0]
    for i in range(n):
        for k in range(n):
            work[i, k] = (scale * B[i, k]) % moduli[k]
    total = 0
    for c in range(n):
        for k in range(n):
            work[n, k] = 0
        work[n, c] = moduli[c]
        for r in range(n):
            b = work[r, c]
            if b == 0:
                continue
            a = work[n, c]
            # extended gcd of (a, b)
            x0, y0, x1, y1 = 1, 0, 0, 1
            aa, bb = a, b
            while bb != 0:
                q = aa // bb
                aa, bb = bb, aa - q * bb
                x0, x1 = x1, x0 - q * x1
                y0, y1 = y1, y0 - q * y1
            g = aa
            ag = a // g
            bg = b // g
            for k in range(c, n):
                u = work[n, k]
                v = work[r, k]
                work[n, k] = x0 * u + y0 * v
                work[r, k] = bg * u - ag * v
            for k in range(c + 1, n):
                work[n, k] %= moduli[k]
                work[r, k] %= moduli[k]
        total += _logp(p, work[n, c])
    return total


@njit(cache=True)
def _leaf(used, p, alpha, moduli, B, work, logs, counts, cosets, stats, maxlog_free):
    n = alpha.shape[0]
    w = 0
    for i in range(n):
        w += alpha[i]
    logh = w - used
    counts[logh] += 1
    cosets[logh] += p ** used
    top = alpha[0]
    logs[0] = logh
    for j in range(1, top + 1):
        if logs[j - 1] == 0 or j == top:
            logs[j] = 0
        else:
            logs[j] = w - _log_index(p, moduli, B, p ** j, work)
    # conjugate of the subgroup type: rank of p^(j-1)H / p^j H
    bad = False
    prev = n + 1
    nparts = 0
    for j in range(1, top + 1):
        c = logs[j - 1] - logs[j]
        if c < 0 or c > prev:
            bad = True
        prev = c
        if j == 1:
            nparts = c
    if nparts > n:
        bad = True
    free = 0
    if not bad:
        for i in range(1, nparts + 1):
            part = 0
            for j in range(1, top + 1):
                if logs[j - 1] - logs[j] >= i:
                    part += 1
            if part > alpha[i - 1]:
                bad = True
            if part == top:
                free += 1
    if bad:
        stats[0] += 1
    if logh > maxlog_free[free]:
        maxlog_free[free] = logh


@njit(cache=True)
def _walk(p, alpha, moduli, B, RES, work, logs, counts, cosets, stats, maxlog_free):
    """Iterative depth-first walk.

    The decisions form a fixed sequence of slots: for each row i (bottom-up)
    the pivot exponent e_i, then the tail digits B[i, i+1..n-1].  A digit
    slot only offers values t with m_i * t + residual divisible by the pivot
    below it, so every completed assignment is an admissible HNF.
    """
    n = alpha.shape[0]
    nslots = n + n * (n - 1) // 2
    row = np.empty(nslots, dtype=np.int64)
    col = np.empty(nslots, dtype=np.int64)
    s = 0
    for i in range(n - 1, -1, -1):
        row[s] = i
        col[s] = -1
        s += 1
        for k in range(i + 1, n):
            row[s] = i
            col[s] = k
            s += 1
    cur = np.zeros(nslots, dtype=np.int64)
    lim = np.zeros(nslots, dtype=np.int64)
    stp = np.zeros(nslots, dtype=np.int64)
    mult = np.zeros(n, dtype=np.int64)
    expo = np.zeros(n, dtype=np.int64)

    s = 0
    cur[0] = 0
    lim[0] = alpha[n - 1] + 1
    stp[0] = 1
    ok = True
    while s >= 0:
        if ok:
            i = row[s]
            k = col[s]
            if k < 0:
                e = cur[s]
                for j in range(n):
                    B[i, j] = 0
                    RES[i, i + 1, j] = 0
                d = p ** e
                B[i, i] = d
                mult[i] = moduli[i] // d
                expo[i] = e
            else:
                t = cur[s]
                B[i, k] = t
                q = (mult[i] * t + RES[i, k, k]) // B[k, k]
                for j in range(k + 1, n):
                    RES[i, k + 1, j] = RES[i, k, j] - q * B[k, j]
            if s == nslots - 1:
                used = 0
                for j in range(n):
                    used += expo[j]
                _leaf(used, p, alpha, moduli, B, work, logs, counts, cosets,
                      stats, maxlog_free)
                cur[s] += stp[s]
                ok = cur[s] < lim[s]
                continue
            s += 1
            i = row[s]
            k = col[s]
            if k < 0:
                cur[s] = 0
                lim[s] = alpha[i] + 1
                stp[s] = 1
                ok = True
            else:
                dk = B[k, k]
                r = RES[i, k, k]
                m = mult[i]
                g = m if m < dk else dk
                if r % g != 0:
                    ok = False
                else:
                    step = dk // g
                    cur[s] = ((-r) // m) % step if g == m else 0
                    lim[s] = dk
                    stp[s] = step
                    ok = True
        else:
            s -= 1
            if s >= 0:
                cur[s] += stp[s]
                ok = cur[s] < lim[s]
    return 0


@dataclass(frozen=True)
class Census:
    group: GroupSpec
    counts: tuple[int, ...]          # counts[r] = number of subgroups of order p^r
    coset_counts: tuple[int, ...]    # coset_counts[r] = sum over those subgroups of the index
    type_violations: int           # subgroups whose type does not fit the ambient type
    max_log_by_free_rank: tuple[int, ...]  # max log_p #H among H with k summands Z_{p^alpha_1}

    @property
    def total(self) -> int:
        return sum(self.counts)


def census(G: GroupSpec) -> Census:
    n, w = G.rank, G.weight
    if n == 0:
        return Census(G, (1,), (1,), 0, (0,))
    alpha = np.array(G.type.parts, dtype=np.int64)
    moduli = np.array(G.moduli, dtype=np.int64)
    B = np.zeros((n, n), dtype=np.int64)
    RES = np.zeros((n, n + 1, n), dtype=np.int64)
    work = np.zeros((n + 1, n), dtype=np.int64)
    logs = np.zeros(alpha[0] + 1, dtype=np.int64)
    counts = np.zeros(w + 1, dtype=np.int64)
    cosets = np.zeros(w + 1, dtype=np.int64)
    stats = np.zeros(1, dtype=np.int64)
    maxlog = np.full(n + 1, -1, dtype=np.int64)
    _walk(G.p, alpha, moduli, B, RES, work, logs, counts, cosets, stats, maxlog)
    return Census(G, tuple(int(c) for c in counts), tuple(int(c) for c in cosets),
                  int(stats[0]), tuple(int(v) for v in maxlog))

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hill-climbing kernel. Mirrors ``_kernel_py`` move for move."""

from libc.stdlib cimport free, malloc

BACKEND = "cython"


cdef inline int _rel(int i, int j, int m, const int[:] offsets, const int[:] targets,
                     int[:] mapping) nogil:
    cdef int p, x, q, count = 0
    if j < 0:
        return 0
    p = i * m + j
    for x in range(offsets[p], offsets[p + 1]):
        q = targets[x]
        if mapping[q // m] == q % m:
            count += 1
    return count


cdef inline int _link(int i, int a, int i2, int b, int m, const int[:] offsets,
                      const int[:] targets) nogil:
    cdef int p, q, x, count = 0
    if a < 0 or b < 0:
        return 0
    p = i * m + a
    q = i2 * m + b
    for x in range(offsets[p], offsets[p + 1]):
        if targets[x] == q:
            count += 1
    return count


cdef int _score(int n, int m, const int[:] unary, const int[:] offsets,
                const int[:] targets, int[:] mapping) nogil:
    cdef int i, j, single = 0, paired = 0
    for i in range(n):
        j = mapping[i]
        if j >= 0:
            single += unary[i * m + j]
            paired += _rel(i, j, m, offsets, targets, mapping)
    return single + paired // 2


def score_mapping(int n, int m, const int[:] unary, const int[:] offsets,
                  const int[:] targets, int[:] mapping):
    return _score(n, m, unary, offsets, targets, mapping)


def hill_climb(int n, int m, const int[:] unary, const int[:] offsets,
               const int[:] targets, int[:] mapping):
    cdef int i, i2, j, j2, cur, gain, before, after, old
    cdef int best, kind, best_i, best_x, score
    cdef int *owner = <int *> malloc(max(m, 1) * sizeof(int))
    if owner == NULL:
        raise MemoryError()
    try:
        with nogil:
            for j in range(m):
                owner[j] = -1
            for i in range(n):
                if mapping[i] >= 0:
                    owner[mapping[i]] = i
            score = _score(n, m, unary, offsets, targets, mapping)

            while True:
                best = 0
                kind = 0
                best_i = -1
                best_x = -1
                for i in range(n):
                    j = mapping[i]
                    if j >= 0:
                        cur = unary[i * m + j] + _rel(i, j, m, offsets, targets, mapping)
                    else:
                        cur = 0
                    for j2 in range(m):
                        if owner[j2] != -1:
                            continue
                        gain = unary[i * m + j2] + _rel(i, j2, m, offsets, targets, mapping) - cur
                        if gain > best:
                            best = gain
                            kind = 1
                            best_i = i
                            best_x = j2
                for i in range(n):
                    j = mapping[i]
                    for i2 in range(i + 1, n):
                        j2 = mapping[i2]
                        if j < 0 and j2 < 0:
                            continue
                        before = (_rel(i, j, m, offsets, targets, mapping)
                                  + _rel(i2, j2, m, offsets, targets, mapping)
                                  - _link(i, j, i2, j2, m, offsets, targets))
                        if j >= 0:
                            before += unary[i * m + j]
                        if j2 >= 0:
                            before += unary[i2 * m + j2]
                        mapping[i] = j2
                        mapping[i2] = j
                        after = (_rel(i, j2, m, offsets, targets, mapping)
                                 + _rel(i2, j, m, offsets, targets, mapping)
                                 - _link(i, j2, i2, j, m, offsets, targets))
                        mapping[i] = j
                        mapping[i2] = j2
                        if j2 >= 0:
                            after += unary[i * m + j2]
                        if j >= 0:
                            after += unary[i2 * m + j]
                        gain = after - before
                        if gain > best:
                            best = gain
                            kind = 2
                            best_i = i
                            best_x = i2
                if kind == 0:
                    break
                if kind == 1:
                    old = mapping[best_i]
                    if old >= 0:
                        owner[old] = -1
                    mapping[best_i] = best_x
                    owner[best_x] = best_i
                else:
                    j = mapping[best_i]
                    j2 = mapping[best_x]
                    mapping[best_i] = j2
                    mapping[best_x] = j
                    if j2 >= 0:
                        owner[j2] = best_i
                    if j >= 0:
                        owner[j] = best_x
                score += best
    finally:
        free(owner)
    return score

"""Pure-Python hill-climbing kernel; the fallback for ``_kernel.pyx``.

Both implementations take the same compiled problem and must return
identical results.

* ``unary[i * m + j]``: triples that match when hypothesis variable ``i``
  maps to reference variable ``j`` regardless of the rest of the mapping
  (instance, attributes, TOP, self-loops).
* ``targets[offsets[p]:offsets[p + 1]]`` for ``p = i * m + j``: pair
  indices ``q = k * m + l`` such that one relation triple matches when both
  ``i -> j`` and ``k -> l`` hold. Each match is stored under both pairs.
* ``mapping[i]``: reference index for hypothesis variable ``i``, or -1.
"""

BACKEND = "python"


def _rel(i, j, m, offsets, targets, mapping):
    if j < 0:
        return 0
    p = i * m + j
    count = 0
    for x in range(offsets[p], offsets[p + 1]):
        q = targets[x]
        if mapping[q // m] == q % m:
            count += 1
    return count


def _link(i, a, i2, b, m, offsets, targets):
    if a < 0 or b < 0:
        return 0
    p = i * m + a
    q = i2 * m + b
    count = 0
    for x in range(offsets[p], offsets[p + 1]):
        if targets[x] == q:
            count += 1
    return count


def score_mapping(n, m, unary, offsets, targets, mapping):
    """Matched triple count of ``mapping``."""
    single = 0
    paired = 0
    for i in range(n):
        j = mapping[i]
        if j >= 0:
            single += unary[i * m + j]
            paired += _rel(i, j, m, offsets, targets, mapping)
    return single + paired // 2


def hill_climb(n, m, unary, offsets, targets, mapping):
    """Steepest-ascent search over remap and swap moves, in place.

    Returns the matched count of the final mapping. Ties keep the first move
    found (remaps before swaps, lower indices first).
    """
    owner = [-1] * m
    for i in range(n):
        if mapping[i] >= 0:
            owner[mapping[i]] = i
    score = score_mapping(n, m, unary, offsets, targets, mapping)

    while True:
        best = 0
        kind = 0
        best_i = best_x = -1
        for i in range(n):
            j = mapping[i]
            cur = unary[i * m + j] + _rel(i, j, m, offsets, targets, mapping) if j >= 0 else 0
            for j2 in range(m):
                if owner[j2] != -1:
                    continue
                gain = unary[i * m + j2] + _rel(i, j2, m, offsets, targets, mapping) - cur
                if gain > best:
                    best, kind, best_i, best_x = gain, 1, i, j2
        for i in range(n):
            j = mapping[i]
            for i2 in range(i + 1, n):
                j2 = mapping[i2]
                if j < 0 and j2 < 0:
                    continue
                before = _rel(i, j, m, offsets, targets, mapping) + _rel(i2, j2, m, offsets, targets, mapping)
                before -= _link(i, j, i2, j2, m, offsets, targets)
                if j >= 0:
                    before += unary[i * m + j]
                if j2 >= 0:
                    before += unary[i2 * m + j2]
                mapping[i], mapping[i2] = j2, j
                after = _rel(i, j2, m, offsets, targets, mapping) + _rel(i2, j, m, offsets, targets, mapping)
                after -= _link(i, j2, i2, j, m, offsets, targets)
                mapping[i], mapping[i2] = j, j2
                if j2 >= 0:
                    after += unary[i * m + j2]
                if j >= 0:
                    after += unary[i2 * m + j]
                gain = after - before
                if gain > best:
                    best, kind, best_i, best_x = gain, 2, i, i2
        if kind == 0:
            return score
        if kind == 1:
            old = mapping[best_i]
            if old >= 0:
                owner[old] = -1
            mapping[best_i] = best_x
            owner[best_x] = best_i
        else:
            j, j2 = mapping[best_i], mapping[best_x]
            mapping[best_i], mapping[best_x] = j2, j
            if j2 >= 0:
                owner[j2] = best_i
            if j >= 0:
                owner[j] = best_x
        score += best

"""Pure-Python cycle kernels.

Reference implementation of ``_kernels.pyx``. Both must perform the same
floating-point operations in the same order so results are bit-identical;
numpy reductions (pairwise summation) are deliberately avoided here.

Swap kernels take per-transition weights ``up[i]`` and ``down[i]`` (index 0
unused) so one code path serves both the coherent and the incoherent
max-swap: the gain of swapping levels ``i-1, i`` is
``p[i] * up[i] - p[i-1] * down[i]``.
"""
import math
from itertools import permutations


def _insertion_sort_desc(xs):
    for i in range(1, len(xs)):
        x = xs[i]
        j = i - 1
        while j >= 0 and xs[j] < x:
            xs[j + 1] = xs[j]
            j -= 1
        xs[j + 1] = x


def passivize(p):
    """Sort ``p`` in place, largest first (stable)."""
    xs = p.tolist()
    _insertion_sort_desc(xs)
    p[:] = xs


def _max_delta(xs, up, down):
    best_i, best = 1, xs[1] * up[1] - xs[0] * down[1]
    for i in range(2, len(xs)):
        d = xs[i] * up[i] - xs[i - 1] * down[i]
        if d > best:
            best_i, best = i, d
    return best_i, best


def max_delta(p, up, down):
    """Largest swap gain and its (smallest) index, whatever its sign."""
    return _max_delta(p.tolist(), up.tolist(), down.tolist())


def max_swap_step(p, up, down, passive):
    """One max-swap cycle in place; returns ``(chosen_index, delta)``."""
    xs = p.tolist()
    if passive:
        _insertion_sort_desc(xs)
    k, d = _max_delta(xs, up.tolist(), down.tolist())
    if d > 0:
        xs[k - 1] += d
        xs[k] -= d
        if passive:
            _insertion_sort_desc(xs)
    else:
        k, d = 0, 0.0
    p[:] = xs
    return k, d


def _optimal(xs, qs):
    d_m = len(qs)
    joint = [x * q for x in xs for q in qs]
    joint.sort(reverse=True)
    out = []
    for i in range(len(xs)):
        s = 0.0
        for j in range(i * d_m, (i + 1) * d_m):
            s += joint[j]
        out.append(s)
    return out


def optimal_step(p, q, out):
    """Traced target populations after the optimal joint reordering."""
    out[:] = _optimal(p.tolist(), q.tolist())


def _track(xs, sort_first, prev_cs, star_cs, stats):
    # stats = [min partial-sum increment, worst bound margin]
    ys = sorted(xs, reverse=True) if sort_first else xs
    s = 0.0
    for i in range(len(ys)):
        s += ys[i]
        inc = s - prev_cs[i]
        if inc < stats[0]:
            stats[0] = inc
        prev_cs[i] = s
    ys = sorted(xs, reverse=True)
    s = 0.0
    for i in range(len(ys)):
        s += ys[i]
        m = star_cs[i] - s
        if m < stats[1]:
            stats[1] = m


def _cumsum(ys):
    out, s = [], 0.0
    for y in ys:
        s += y
        out.append(s)
    return out


def run_swap(p, up, down, passive, tol, max_cycles, star_cs):
    """Iterate a max-swap map to its fixed point in place.

    Returns ``(cycles, converged, residual, min_increment, worst_margin)``.
    Partial sums are tracked in the order the protocol keeps its state
    (sorted when ``passive``, energy order otherwise).
    """
    xs, ups, downs = p.tolist(), up.tolist(), down.tolist()
    star = star_cs.tolist()
    if passive:
        _insertion_sort_desc(xs)
    prev = _cumsum(xs)
    stats = [math.inf, math.inf]
    cycles, converged = 0, False
    while True:
        k, d = _max_delta(xs, ups, downs)
        residual = d if d > 0 else 0.0
        if residual < tol:
            converged = True
            break
        if cycles >= max_cycles:
            break
        xs[k - 1] += d
        xs[k] -= d
        if passive:
            _insertion_sort_desc(xs)
        cycles += 1
        _track(xs, False, prev, star, stats)
    p[:] = xs
    return cycles, converged, residual, stats[0], stats[1]


def run_optimal(p, q, up, down, tol, max_cycles, star_cs):
    """Iterate the optimal coherent map in place; same return tuple as ``run_swap``."""
    xs, qs, ups, downs = p.tolist(), q.tolist(), up.tolist(), down.tolist()
    star = star_cs.tolist()
    prev = _cumsum(sorted(xs, reverse=True))
    stats = [math.inf, math.inf]
    cycles, converged = 0, False
    while True:
        nxt = _optimal(xs, qs)
        change = 0.0
        for a, b in zip(nxt, xs):
            if abs(a - b) > change:
                change = abs(a - b)
        ys = sorted(xs, reverse=True)
        _, d = _max_delta(ys, ups, downs)
        residual = d if d > 0 else 0.0
        if change > residual:
            residual = change
        if residual < tol:
            converged = True
            break
        if cycles >= max_cycles:
            break
        xs = nxt
        cycles += 1
        _track(xs, True, prev, star, stats)
    p[:] = xs
    return cycles, converged, residual, stats[0], stats[1]


def perm_max_prefix(values, levels, n_levels):
    """Exhaustive maximum, over all placements of ``values`` on positions, of the
    exactly rounded sum over positions whose level is below ``k``, for each
    ``k = 1..n_levels``.
    """
    vals, lv = values.tolist(), levels.tolist()
    n = len(vals)
    best = [-math.inf] * n_levels
    for perm in permutations(range(n)):
        for k in range(1, n_levels + 1):
            s = math.fsum(vals[perm[t]] for t in range(n) if lv[t] < k)
            if s > best[k - 1]:
                best[k - 1] = s
    return best


def exact_sum(xs):
    """Correctly rounded sum (``math.fsum``)."""
    return math.fsum(xs.tolist() if hasattr(xs, "tolist") else xs)

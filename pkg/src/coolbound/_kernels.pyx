# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cycle kernels; mirrors ``_kernels_py`` operation for operation."""
from libc.math cimport INFINITY, fabs
from libc.stdlib cimport free, malloc, qsort

import numpy as np


cdef inline void _sort_desc(double* xs, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double x
    for i in range(1, n):
        x = xs[i]
        j = i - 1
        while j >= 0 and xs[j] < x:
            xs[j + 1] = xs[j]
            j -= 1
        xs[j + 1] = x


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*>a)[0]
    cdef double y = (<const double*>b)[0]
    return (x < y) - (x > y)


cdef inline Py_ssize_t _max_delta(const double* xs, const double* up, const double* down,
                                  Py_ssize_t n, double* best) noexcept nogil:
    cdef Py_ssize_t i, best_i = 1
    cdef double d
    best[0] = xs[1] * up[1] - xs[0] * down[1]
    for i in range(2, n):
        d = xs[i] * up[i] - xs[i - 1] * down[i]
        if d > best[0]:
            best[0] = d
            best_i = i
    return best_i


cdef void _optimal(const double* xs, Py_ssize_t d_s, const double* qs, Py_ssize_t d_m,
                   double* joint, double* out) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s
    for i in range(d_s):
        for j in range(d_m):
            joint[i * d_m + j] = xs[i] * qs[j]
    qsort(joint, d_s * d_m, sizeof(double), _cmp_desc)
    for i in range(d_s):
        s = 0.0
        for j in range(i * d_m, (i + 1) * d_m):
            s += joint[j]
        out[i] = s


cdef void _track(const double* xs, Py_ssize_t n, bint sort_first, double* prev,
                 const double* star, double* scratch, double* stats) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0, inc, m
    for i in range(n):
        scratch[i] = xs[i]
    _sort_desc(scratch, n)
    for i in range(n):
        s += scratch[i] if sort_first else xs[i]
        inc = s - prev[i]
        if inc < stats[0]:
            stats[0] = inc
        prev[i] = s
    s = 0.0
    for i in range(n):
        s += scratch[i]
        m = star[i] - s
        if m < stats[1]:
            stats[1] = m


def passivize(double[::1] p):
    _sort_desc(&p[0], p.shape[0])


def max_delta(const double[::1] p, const double[::1] up, const double[::1] down):
    cdef double best
    cdef Py_ssize_t k = _max_delta(&p[0], &up[0], &down[0], p.shape[0], &best)
    return int(k), best


def max_swap_step(double[::1] p, const double[::1] up, const double[::1] down, bint passive):
    cdef Py_ssize_t n = p.shape[0], k
    cdef double d
    if passive:
        _sort_desc(&p[0], n)
    k = _max_delta(&p[0], &up[0], &down[0], n, &d)
    if d > 0:
        p[k - 1] += d
        p[k] -= d
        if passive:
            _sort_desc(&p[0], n)
        return int(k), d
    return 0, 0.0


def optimal_step(const double[::1] p, const double[::1] q, double[::1] out):
    cdef double* joint = <double*>malloc(p.shape[0] * q.shape[0] * sizeof(double))
    if joint == NULL:
        raise MemoryError()
    try:
        _optimal(&p[0], p.shape[0], &q[0], q.shape[0], joint, &out[0])
    finally:
        free(joint)


cdef void _cumsum(const double* xs, Py_ssize_t n, double* out) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(n):
        s += xs[i]
        out[i] = s


def run_swap(double[::1] p, const double[::1] up, const double[::1] down, bint passive,
             double tol, long max_cycles, const double[::1] star_cs):
    cdef Py_ssize_t n = p.shape[0], k
    cdef double d, residual = 0.0
    cdef long cycles = 0
    cdef bint converged = False
    cdef double stats[2]
    cdef double[::1] prev = np.empty(n)
    cdef double[::1] scratch = np.empty(n)
    stats[0] = INFINITY
    stats[1] = INFINITY
    with nogil:
        if passive:
            _sort_desc(&p[0], n)
        _cumsum(&p[0], n, &prev[0])
        while True:
            k = _max_delta(&p[0], &up[0], &down[0], n, &d)
            residual = d if d > 0 else 0.0
            if residual < tol:
                converged = True
                break
            if cycles >= max_cycles:
                break
            p[k - 1] += d
            p[k] -= d
            if passive:
                _sort_desc(&p[0], n)
            cycles += 1
            _track(&p[0], n, False, &prev[0], &star_cs[0], &scratch[0], stats)
    return int(cycles), bool(converged), residual, stats[0], stats[1]


def run_optimal(double[::1] p, const double[::1] q, const double[::1] up, const double[::1] down,
                double tol, long max_cycles, const double[::1] star_cs):
    cdef Py_ssize_t n = p.shape[0], m = q.shape[0], i
    cdef double d, change, residual = 0.0
    cdef long cycles = 0
    cdef bint converged = False
    cdef double stats[2]
    cdef double[::1] prev = np.empty(n)
    cdef double[::1] scratch = np.empty(n)
    cdef double[::1] nxt = np.empty(n)
    cdef double[::1] joint = np.empty(n * m)
    stats[0] = INFINITY
    stats[1] = INFINITY
    with nogil:
        for i in range(n):
            scratch[i] = p[i]
        _sort_desc(&scratch[0], n)
        _cumsum(&scratch[0], n, &prev[0])
        while True:
            _optimal(&p[0], n, &q[0], m, &joint[0], &nxt[0])
            change = 0.0
            for i in range(n):
                if fabs(nxt[i] - p[i]) > change:
                    change = fabs(nxt[i] - p[i])
                scratch[i] = p[i]
            _sort_desc(&scratch[0], n)
            _max_delta(&scratch[0], &up[0], &down[0], n, &d)
            residual = d if d > 0 else 0.0
            if change > residual:
                residual = change
            if residual < tol:
                converged = True
                break
            if cycles >= max_cycles:
                break
            for i in range(n):
                p[i] = nxt[i]
            cycles += 1
            _track(&p[0], n, True, &prev[0], &star_cs[0], &scratch[0], stats)
    return int(cycles), bool(converged), residual, stats[0], stats[1]


cdef double _exact_sum(const double* xs, Py_ssize_t n, double* partials) noexcept nogil:
    # Shewchuk summation with CPython math.fsum's final rounding step
    cdef Py_ssize_t i, j, t_i, np_ = 0
    cdef double x, y, t, hi, lo = 0.0, yr
    for i in range(n):
        x = xs[i]
        j = 0
        for t_i in range(np_):
            y = partials[t_i]
            if fabs(x) < fabs(y):
                t = x
                x = y
                y = t
            hi = x + y
            lo = y - (hi - x)
            if lo != 0.0:
                partials[j] = lo
                j += 1
            x = hi
        np_ = j
        partials[np_] = x
        np_ += 1
    hi = 0.0
    if np_ > 0:
        np_ -= 1
        hi = partials[np_]
        lo = 0.0
        while np_ > 0:
            x = hi
            np_ -= 1
            y = partials[np_]
            hi = x + y
            yr = hi - x
            lo = y - yr
            if lo != 0.0:
                break
        if np_ > 0 and ((lo < 0.0 and partials[np_ - 1] < 0.0) or
                        (lo > 0.0 and partials[np_ - 1] > 0.0)):
            y = lo * 2.0
            x = hi + y
            yr = x - hi
            if y == yr:
                hi = x
    return hi


def exact_sum(const double[::1] xs):
    cdef double[::1] partials = np.empty(xs.shape[0] + 1)
    if xs.shape[0] == 0:
        return 0.0
    return _exact_sum(&xs[0], xs.shape[0], &partials[0])


def perm_max_prefix(const double[::1] values, const long[::1] levels, long n_levels):
    cdef Py_ssize_t n = values.shape[0], i, k, t, cnt
    cdef long[::1] perm = np.arange(n, dtype=np.int64)
    cdef long[::1] c = np.zeros(n, dtype=np.int64)
    cdef double[::1] best = np.full(n_levels, -INFINITY)
    cdef double[::1] buf = np.empty(n)
    cdef double[::1] partials = np.empty(n + 1)
    cdef long tmp
    cdef double s
    with nogil:
        # Heap's algorithm, iterative form
        i = 0
        while True:
            for k in range(1, n_levels + 1):
                cnt = 0
                for t in range(n):
                    if levels[t] < k:
                        buf[cnt] = values[perm[t]]
                        cnt += 1
                s = _exact_sum(&buf[0], cnt, &partials[0]) if cnt > 0 else 0.0
                if s > best[k - 1]:
                    best[k - 1] = s
            while i < n:
                if c[i] < i:
                    if i % 2 == 0:
                        tmp = perm[0]; perm[0] = perm[i]; perm[i] = tmp
                    else:
                        tmp = perm[c[i]]; perm[c[i]] = perm[i]; perm[i] = tmp
                    c[i] += 1
                    i = 0
                    break
                c[i] = 0
                i += 1
            if i >= n:
                break
    return [best[k] for k in range(n_levels)]

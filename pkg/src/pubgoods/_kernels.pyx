# cython: language_level=3
"""Compiled enumeration kernels; a line-for-line twin of ``_fallback``.

Arithmetic is int64. ``pubgoods.kernels`` only routes a call here after
checking that no intermediate product can overflow.
"""
from libc.stdlib cimport malloc, free


cdef inline bint _node_ok(long long i, long long *k, long long D,
                          const long long[:] offs, const long long[:] idx,
                          long long scale, const long long[:] B,
                          const long long[:] E) nogil:
    cdef long long prod = 1
    cdef long long t, a
    for t in range(offs[i], offs[i + 1]):
        prod *= D - k[idx[t]]
    a = prod * scale - B[i]
    if a > E[i]:
        return k[i] == D
    if a < -E[i]:
        return k[i] == 0
    return True


cdef tuple _as_tuple(long long *k, Py_ssize_t n):
    cdef Py_ssize_t i
    return tuple([k[i] for i in range(n)])


def grid_scan(Py_ssize_t n, long long D, const long long[:] offs, const long long[:] idx,
              const long long[:] ready_offs, const long long[:] ready_nodes,
              long long scale, const long long[:] B, const long long[:] E,
              const long long[:] subtree, bint first_only):
    cdef list accepted = []
    cdef long long covered = 0
    cdef long long *k = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t t = 0, i
    cdef long long r
    cdef bint ok
    if k == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            k[i] = 0
        while True:
            ok = True
            for r in range(ready_offs[t], ready_offs[t + 1]):
                if not _node_ok(ready_nodes[r], k, D, offs, idx, scale, B, E):
                    ok = False
                    break
            if ok and t < n - 1:
                t += 1
                k[t] = 0
                continue
            covered += subtree[t]
            if ok:
                accepted.append(_as_tuple(k, n))
                if first_only:
                    return accepted, covered
            while t >= 0 and k[t] == D:
                t -= 1
            if t < 0:
                return accepted, covered
            k[t] += 1
    finally:
        free(k)


def profile_violation(Py_ssize_t n, long long D, const long long[:] offs,
                      const long long[:] idx, long long scale,
                      const long long[:] B, const long long[:] E, k_in):
    cdef long long *k = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t i
    if k == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            k[i] = k_in[i]
        for i in range(n):
            if not _node_ok(i, k, D, offs, idx, scale, B, E):
                return i
        return -1
    finally:
        free(k)


cdef inline bint _gate_ok(long long g, long long *x, const long long[:] gtype,
                          const long long[:] gu, const long long[:] gv,
                          const long long[:] gw) nogil:
    cdef long long xu = x[gu[g]], xv = x[gv[g]], xw = x[gw[g]]
    if gtype[g] == 0:
        if xu == 0 and xv == 0:
            return xw == 1
        if xu == 1 or xv == 1:
            return xw == 0
        return True
    if xv == 2 and xw == 2:
        return False
    return xu == 2 or (xv == xu and xw == xu)


def circuit_scan(Py_ssize_t n, const long long[:] gtype, const long long[:] gu,
                 const long long[:] gv, const long long[:] gw,
                 const long long[:] ready_offs, const long long[:] ready_gates):
    cdef list found = []
    cdef long long *x = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t t = 0, i
    cdef long long r
    cdef bint ok
    if x == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            x[i] = 0
        while True:
            ok = True
            for r in range(ready_offs[t], ready_offs[t + 1]):
                if not _gate_ok(ready_gates[r], x, gtype, gu, gv, gw):
                    ok = False
                    break
            if ok and t < n - 1:
                t += 1
                x[t] = 0
                continue
            if ok:
                found.append(_as_tuple(x, n))
            while t >= 0 and x[t] == 2:
                t -= 1
            if t < 0:
                return found
            x[t] += 1
    finally:
        free(x)


def pure_scan(Py_ssize_t n, const long long[:] offs, const long long[:] idx,
              const long long[:] ready_offs, const long long[:] ready_nodes):
    cdef list found = []
    cdef long long *a = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t t = 0, i
    cdef long long r, e, node
    cdef bint ok, covered
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            a[i] = 0
        while True:
            ok = True
            for r in range(ready_offs[t], ready_offs[t + 1]):
                node = ready_nodes[r]
                covered = False
                for e in range(offs[node], offs[node + 1]):
                    if a[idx[e]]:
                        covered = True
                        break
                if covered == (a[node] != 0):
                    ok = False
                    break
            if ok and t < n - 1:
                t += 1
                a[t] = 0
                continue
            if ok:
                found.append(_as_tuple(a, n))
            while t >= 0 and a[t] == 1:
                t -= 1
            if t < 0:
                return found
            a[t] += 1
    finally:
        free(a)

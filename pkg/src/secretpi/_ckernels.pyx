# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the graph kernels in ``_pykernels``; same contracts."""

from libc.stdlib cimport malloc, free, qsort, realloc


cdef int _cmp_ll(const void *a, const void *b) noexcept nogil:
    cdef long long x = (<long long *>a)[0]
    cdef long long y = (<long long *>b)[0]
    return (x > y) - (x < y)


cdef struct Buf:
    long long *data
    Py_ssize_t size
    Py_ssize_t cap


cdef int _push(Buf *b, long long v) except -1:
    cdef long long *grown
    if b.size == b.cap:
        b.cap = b.cap * 2 if b.cap else 64
        grown = <long long *>realloc(b.data, sizeof(long long) * b.cap)
        if grown == NULL:
            raise MemoryError()
        b.data = grown
    b.data[b.size] = v
    b.size += 1
    return 0


cdef int _split(Py_ssize_t n, src, lab, dst, long long tau, bint silent,
                long long *off, Buf *tgt, Buf *lbl) except -1:
    """CSR adjacency of the silent (or visible) edges; ``off`` has n+1 slots."""
    cdef Py_ssize_t i, s, m = len(src)
    cdef long long *fill = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef long long a
    if fill == NULL:
        raise MemoryError()
    try:
        for s in range(n + 1):
            off[s] = 0
        for i in range(m):
            a = lab[i]
            if (a == tau) == silent:
                off[<long long>src[i] + 1] += 1
        for s in range(n):
            off[s + 1] += off[s]
        for s in range(n + 1):
            fill[s] = off[s]
        for i in range(off[n]):
            _push(tgt, 0)
            _push(lbl, 0)
        for i in range(m):
            a = lab[i]
            if (a == tau) == silent:
                s = src[i]
                tgt.data[fill[s]] = dst[i]
                lbl.data[fill[s]] = a
                fill[s] += 1
    finally:
        free(fill)
    return 0


cdef int _closures(Py_ssize_t n, long long *off, long long *tgt,
                   long long *coff, Buf *cl) except -1:
    """Silent closure of every state, flattened and sorted per state."""
    cdef long long *seen = <long long *>malloc(sizeof(long long) * (n if n > 0 else 1))
    cdef long long *stack = <long long *>malloc(sizeof(long long) * (n if n > 0 else 1))
    cdef Py_ssize_t s, top, k, start
    cdef long long u, v
    if seen == NULL or stack == NULL:
        free(seen)
        free(stack)
        raise MemoryError()
    try:
        for k in range(n):
            seen[k] = -1
        for s in range(n):
            coff[s] = cl.size
            start = cl.size
            seen[s] = s
            stack[0] = s
            top = 1
            _push(cl, s)
            while top:
                top -= 1
                u = stack[top]
                for k in range(off[u], off[u + 1]):
                    v = tgt[k]
                    if seen[v] != s:
                        seen[v] = s
                        stack[top] = v
                        top += 1
                        _push(cl, v)
            qsort(&cl.data[start], cl.size - start, sizeof(long long), _cmp_ll)
        coff[n] = cl.size
    finally:
        free(seen)
        free(stack)
    return 0


def tau_closure(Py_ssize_t n, src, lab, dst, long long tau):
    cdef long long *off = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef long long *coff = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef Buf tgt, lbl, cl
    cdef Py_ssize_t s, k
    tgt.data = NULL; tgt.size = 0; tgt.cap = 0
    lbl.data = NULL; lbl.size = 0; lbl.cap = 0
    cl.data = NULL; cl.size = 0; cl.cap = 0
    try:
        _split(n, src, lab, dst, tau, True, off, &tgt, &lbl)
        _closures(n, off, tgt.data, coff, &cl)
        return [[cl.data[k] for k in range(coff[s], coff[s + 1])] for s in range(n)]
    finally:
        free(off)
        free(coff)
        free(tgt.data)
        free(lbl.data)
        free(cl.data)


def saturate(Py_ssize_t n, src, lab, dst, long long tau):
    cdef long long *off = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef long long *voff = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef long long *coff = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef Buf tgt, lbl, vtgt, vlbl, cl, row
    cdef Py_ssize_t s, i, j, k, c
    cdef long long t, u, v, a, maxlab = tau, key, width
    cdef long long *mark = NULL
    cdef list osrc = [], olab = [], odst = []
    for a in lab:
        if a > maxlab:
            maxlab = a
    width = maxlab + 1
    tgt.data = NULL; tgt.size = 0; tgt.cap = 0
    lbl.data = NULL; lbl.size = 0; lbl.cap = 0
    vtgt.data = NULL; vtgt.size = 0; vtgt.cap = 0
    vlbl.data = NULL; vlbl.size = 0; vlbl.cap = 0
    cl.data = NULL; cl.size = 0; cl.cap = 0
    row.data = NULL; row.size = 0; row.cap = 0
    try:
        mark = <long long *>malloc(sizeof(long long) * (width * n if n > 0 else 1))
        if mark == NULL:
            raise MemoryError()
        for k in range(width * n):
            mark[k] = -1
        _split(n, src, lab, dst, tau, True, off, &tgt, &lbl)
        _split(n, src, lab, dst, tau, False, voff, &vtgt, &vlbl)
        _closures(n, off, tgt.data, coff, &cl)
        for s in range(n):
            row.size = 0
            for i in range(coff[s], coff[s + 1]):
                t = cl.data[i]
                key = tau * n + t
                if mark[key] != s:
                    mark[key] = s
                    _push(&row, key)
                for j in range(voff[t], voff[t + 1]):
                    a = vlbl.data[j]
                    u = vtgt.data[j]
                    for c in range(coff[u], coff[u + 1]):
                        v = cl.data[c]
                        key = a * n + v
                        if mark[key] != s:
                            mark[key] = s
                            _push(&row, key)
            qsort(row.data, row.size, sizeof(long long), _cmp_ll)
            for k in range(row.size):
                osrc.append(s)
                olab.append(row.data[k] // n)
                odst.append(row.data[k] % n)
        return osrc, olab, odst
    finally:
        free(off)
        free(voff)
        free(coff)
        free(mark)
        free(tgt.data)
        free(lbl.data)
        free(vtgt.data)
        free(vlbl.data)
        free(cl.data)
        free(row.data)


def refine(Py_ssize_t n, src, lab, dst):
    cdef Py_ssize_t m = len(src)
    cdef Py_ssize_t i, s, k, lo, hi, count
    cdef long long *off = <long long *>malloc(sizeof(long long) * (n + 1))
    cdef long long *elab = <long long *>malloc(sizeof(long long) * (m if m > 0 else 1))
    cdef long long *edst = <long long *>malloc(sizeof(long long) * (m if m > 0 else 1))
    cdef long long *buf = <long long *>malloc(sizeof(long long) * (m if m > 0 else 1))
    cdef long long *block = <long long *>malloc(sizeof(long long) * (n if n > 0 else 1))
    cdef long long *fill = <long long *>malloc(sizeof(long long) * (n if n > 0 else 1))
    cdef long long nb
    cdef list rounds, new
    cdef dict ids
    try:
        for s in range(n + 1):
            off[s] = 0
        for i in range(m):
            off[<long long>src[i] + 1] += 1
        for s in range(n):
            off[s + 1] += off[s]
            fill[s] = off[s]
        for i in range(m):
            s = src[i]
            elab[fill[s]] = lab[i]
            edst[fill[s]] = dst[i]
            fill[s] += 1
        for s in range(n):
            block[s] = 0
        rounds = [[0] * n]
        count = 1 if n else 0
        while True:
            nb = count if count > 0 else 1
            ids = {}
            new = []
            for s in range(n):
                lo = off[s]
                hi = off[s + 1]
                for k in range(lo, hi):
                    buf[k] = elab[k] * nb + block[edst[k]]
                qsort(&buf[lo], hi - lo, sizeof(long long), _cmp_ll)
                sig = [block[s]]
                for k in range(lo, hi):
                    if k == lo or buf[k] != buf[k - 1]:
                        sig.append(buf[k])
                new.append(ids.setdefault(tuple(sig), len(ids)))
            if len(ids) == count:
                return rounds
            count = len(ids)
            for s in range(n):
                block[s] = new[s]
            rounds.append(new)
    finally:
        free(off)
        free(elab)
        free(edst)
        free(buf)
        free(block)
        free(fill)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernel (int64 states, open-addressing cycle table).

Same contract as ``_orbit_py.run_orbit`` (``max_bits`` is accepted for
signature parity; int64 states never reach it). Returns status BAIL when a
coordinate would leave the exactly representable range; the caller then
reruns the pure-Python kernel.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.math cimport floor, fabs, llround
from libc.stdint cimport int64_t, uint64_t

cdef enum:
    CYCLE = 0
    CAP = 1
    BAIL = 2

cdef double EPS = 2.0 ** -50
cdef int64_t LIM53 = (<int64_t>1) << 53


cdef inline uint64_t _hash(int64_t *v, int n):
    cdef uint64_t h = 1469598103934665603ULL
    cdef int i
    for i in range(n):
        h ^= <uint64_t>v[i]
        h *= 1099511628211ULL
        h ^= h >> 29
    return h


cdef int _grow_table(int64_t **tab, Py_ssize_t *tsize, int64_t *buf, Py_ssize_t count, int n):
    cdef Py_ssize_t newsize = tsize[0] * 2
    cdef int64_t *t = <int64_t *> malloc(newsize * sizeof(int64_t))
    cdef Py_ssize_t i, k
    cdef uint64_t mask = newsize - 1
    if t == NULL:
        return -1
    for i in range(newsize):
        t[i] = -1
    for k in range(count):
        i = _hash(buf + k * n, n) & mask
        while t[i] != -1:
            i = (i + 1) & mask
        t[i] = k
    free(tab[0])
    tab[0] = t
    tsize[0] = newsize
    return 0


def run_orbit(rows, int sign, shift, D, v0, Py_ssize_t cap, bpow, berr, exact_floor, max_bits=2048):
    cdef int n = len(rows)
    cdef int i, j
    cdef int64_t cD, t, d, k
    cdef double s, mag, slack, err, f, fd, tt
    cdef int64_t rowsmax = 1
    cdef int64_t vlim
    cdef Py_ssize_t count = 0, cap_buf, idx, found
    cdef uint64_t mask
    cdef int ok
    cdef int status = CAP
    cdef Py_ssize_t mu = -1, lam = -1

    for r in rows:
        if abs(r) >= (1 << 20):
            return BAIL, [], [], -1, -1
        rowsmax += abs(r)
    if D >= (1 << 40) or max(abs(x) for x in shift) >= (1 << 50) or max(abs(x) for x in v0) >= (1 << 50):
        return BAIL, [], [], -1, -1
    cD = D
    vlim = (LIM53 // 2) // rowsmax
    for x in v0:
        if abs(x) >= vlim:
            return BAIL, [], [], -1, -1

    cdef int64_t *rw = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *sh = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *w = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *u = <int64_t *> malloc(n * sizeof(int64_t))
    cdef double *bp = <double *> malloc(n * sizeof(double))
    cdef double *be = <double *> malloc(n * sizeof(double))
    cap_buf = 1024
    cdef int64_t *buf = <int64_t *> malloc(cap_buf * n * sizeof(int64_t))
    cdef Py_ssize_t tsize = 2048
    cdef int64_t *tab = <int64_t *> malloc(tsize * sizeof(int64_t))
    cdef int64_t *digs = <int64_t *> malloc(cap_buf * sizeof(int64_t))
    cdef int64_t *v
    try:
        for i in range(n):
            rw[i] = rows[i]
            sh[i] = shift[i]
            bp[i] = bpow[i]
            be[i] = berr[i]
            buf[i] = v0[i]
        for i in range(tsize):
            tab[i] = -1
        mask = tsize - 1
        idx = _hash(buf, n) & mask
        tab[idx] = 0
        count = 1
        while count - 1 < cap:
            v = buf + (count - 1) * n
            t = v[n - 1]
            w[0] = rw[0] * t
            for i in range(1, n):
                w[i] = v[i - 1] + rw[i] * t
            if sign < 0:
                for i in range(n):
                    w[i] = -w[i]
            s = 0.0
            mag = 0.0
            slack = 0.0
            for i in range(n):
                u[i] = w[i] + sh[i]
                tt = (<double>u[i]) * bp[i]
                s += tt
                mag += fabs(tt)
                slack += fabs(<double>u[i]) * be[i]
            err = (n + 3) * EPS * mag + slack
            f = floor(s / <double>cD)
            fd = f * <double>cD
            err += EPS * (fabs(s) + fabs(fd) + <double>cD)
            if s - fd > err and fd + <double>cD - s > err:
                d = <int64_t>f
            else:
                k = llround(s / <double>cD)
                ok = u[0] == k * cD
                for i in range(1, n):
                    if u[i] != 0:
                        ok = 0
                if ok:
                    d = k
                else:
                    d = exact_floor(tuple([u[i] for i in range(n)]))
            w[0] -= d * cD
            for i in range(n):
                if w[i] >= vlim or w[i] <= -vlim:
                    status = BAIL
                    break
            if status == BAIL:
                break
            if count - 1 >= cap_buf:
                cap_buf *= 2
                buf = <int64_t *> realloc(buf, cap_buf * n * sizeof(int64_t))
                digs = <int64_t *> realloc(digs, cap_buf * sizeof(int64_t))
                if buf == NULL or digs == NULL:
                    raise MemoryError()
            digs[count - 1] = d
            idx = _hash(w, n) & mask
            found = -1
            while tab[idx] != -1:
                j = 0
                v = buf + tab[idx] * n
                for i in range(n):
                    if v[i] != w[i]:
                        j = 1
                        break
                if j == 0:
                    found = tab[idx]
                    break
                idx = (idx + 1) & mask
            if found >= 0:
                status = CYCLE
                mu = found
                lam = count - found
                break
            if count >= cap_buf:
                cap_buf *= 2
                buf = <int64_t *> realloc(buf, cap_buf * n * sizeof(int64_t))
                digs = <int64_t *> realloc(digs, cap_buf * sizeof(int64_t))
                if buf == NULL or digs == NULL:
                    raise MemoryError()
            for i in range(n):
                buf[count * n + i] = w[i]
            tab[idx] = count
            count += 1
            if 2 * count > tsize:
                if _grow_table(&tab, &tsize, buf, count, n) != 0:
                    raise MemoryError()
                mask = tsize - 1
        if status == BAIL:
            return BAIL, [], [], -1, -1
        ndig = count - 1 + (1 if status == CYCLE else 0)
        digits = [digs[i] for i in range(ndig)]
        states = [tuple([buf[k * n + i] for i in range(n)]) for k in range(count)]
        return status, digits, states, mu, lam
    finally:
        free(rw); free(sh); free(w); free(u); free(bp); free(be)
        free(buf); free(tab); free(digs)

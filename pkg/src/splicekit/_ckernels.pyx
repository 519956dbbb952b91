# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled free-group kernels; same interface as ``_pykernels``."""

from libc.stdlib cimport malloc, realloc, free

BACKEND = "cython"


cdef struct Buf:
    int *data
    Py_ssize_t len
    Py_ssize_t cap


cdef int buf_init(Buf *b, Py_ssize_t cap) except -1:
    if cap < 16:
        cap = 16
    b.data = <int *> malloc(cap * sizeof(int))
    if b.data == NULL:
        raise MemoryError()
    b.len = 0
    b.cap = cap
    return 0


cdef inline int buf_push_reduce(Buf *b, int m) except -1:
    cdef int *nd
    if b.len > 0 and b.data[b.len - 1] == -m:
        b.len -= 1
        return 0
    if b.len == b.cap:
        nd = <int *> realloc(b.data, 2 * b.cap * sizeof(int))
        if nd == NULL:
            raise MemoryError()
        b.data = nd
        b.cap *= 2
    b.data[b.len] = m
    b.len += 1
    return 0


cdef class _Table:
    """Flattened substitution tables: letter ``g`` of table ``t`` maps to
    ``img[off[t, g]: off[t, g] + ln[t, g]]``."""
    cdef int *img
    cdef Py_ssize_t *off
    cdef Py_ssize_t *ln
    cdef int n
    cdef int ntab

    def __cinit__(self, tables, int n):
        cdef Py_ssize_t total = 0, pos = 0, k
        cdef int t, l
        self.n = n
        self.ntab = len(tables)
        for tab in tables:
            for l in range(-n, n + 1):
                if l != 0:
                    total += len(tab[n + l])
        self.img = <int *> malloc((total + 1) * sizeof(int))
        self.off = <Py_ssize_t *> malloc(self.ntab * (2 * n + 1) * sizeof(Py_ssize_t))
        self.ln = <Py_ssize_t *> malloc(self.ntab * (2 * n + 1) * sizeof(Py_ssize_t))
        if self.img == NULL or self.off == NULL or self.ln == NULL:
            raise MemoryError()
        for t in range(self.ntab):
            tab = tables[t]
            for l in range(-n, n + 1):
                k = t * (2 * n + 1) + n + l
                self.off[k] = pos
                if l == 0:
                    self.ln[k] = 0
                    continue
                w = tab[n + l]
                self.ln[k] = len(w)
                for m in w:
                    self.img[pos] = m
                    pos += 1

    def __dealloc__(self):
        free(self.img)
        free(self.off)
        free(self.ln)

    cdef int apply(self, int t, Buf *src, Buf *dst) except -1:
        cdef Py_ssize_t i, j, k, o, L
        cdef int n = self.n
        dst.len = 0
        for i in range(src.len):
            k = t * (2 * n + 1) + n + src.data[i]
            o = self.off[k]
            L = self.ln[k]
            for j in range(L):
                buf_push_reduce(dst, self.img[o + j])
        return 0


def free_reduce(word):
    cdef Buf b
    buf_init(&b, len(word))
    try:
        for l in word:
            buf_push_reduce(&b, l)
        return [b.data[i] for i in range(b.len)]
    finally:
        free(b.data)


def substitute(word, tab, int n):
    cdef _Table T = _Table([tab], n)
    cdef Buf src, dst
    buf_init(&src, len(word))
    buf_init(&dst, 4 * len(word))
    try:
        for l in word:
            src.data[src.len] = l
            src.len += 1
        T.apply(0, &src, &dst)
        return [dst.data[i] for i in range(dst.len)]
    finally:
        free(src.data)
        free(dst.data)


def probe(tables, int m, int n, int maxlen, start):
    cdef _Table T = _Table(tables, n)
    cdef Buf *bufs = <Buf *> malloc((maxlen + 1) * sizeof(Buf))
    cdef int *choice = <int *> malloc((maxlen + 1) * sizeof(int))
    cdef int d, g, k, i
    cdef long long count = 0
    cdef int nstart = len(start)
    cdef int match
    if bufs == NULL or choice == NULL:
        raise MemoryError()
    for d in range(maxlen + 1):
        buf_init(&bufs[d], 64)
    found = []
    try:
        for l in start:
            buf_push_reduce(&bufs[0], l)
        startc = [bufs[0].data[i] for i in range(bufs[0].len)]
        # choice[d] indexes the letter used at depth d (0..2m-1): +1..+m, -1..-m
        d = 1
        choice[1] = -1
        while d >= 1:
            choice[d] += 1
            if choice[d] >= 2 * m or maxlen == 0:
                d -= 1
                continue
            k = choice[d]
            g = k + 1 if k < m else -(k - m + 1)
            if d > 1:
                k = choice[d - 1]
                if (k + 1 if k < m else -(k - m + 1)) == -g:
                    continue
            T.apply(m + g, &bufs[d - 1], &bufs[d])
            count += 1
            if bufs[d].len == bufs[0].len:
                match = 1
                for i in range(bufs[d].len):
                    if bufs[d].data[i] != bufs[0].data[i]:
                        match = 0
                        break
                if match:
                    found.append(tuple(
                        (choice[i] + 1 if choice[i] < m else -(choice[i] - m + 1))
                        for i in range(1, d + 1)))
            if d < maxlen:
                d += 1
                choice[d] = -1
        found.sort(key=lambda w: (len(w), w))
        return count, found
    finally:
        for d in range(maxlen + 1):
            free(bufs[d].data)
        free(bufs)
        free(choice)

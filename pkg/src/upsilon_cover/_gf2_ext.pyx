# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) elimination on multi-word bitsets.

Same contract as the pure-Python kernel: vectors are Python ints, and the
results are Python ints, but elimination runs on packed uint64 words.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_clzll(unsigned long long) noexcept nogil

cdef uint64_t MASK = 0xFFFFFFFFFFFFFFFF


cdef inline int _top_bit(uint64_t* v, int nw) noexcept nogil:
    cdef int w
    for w in range(nw - 1, -1, -1):
        if v[w]:
            return w * 64 + 63 - __builtin_clzll(v[w])
    return -1


cdef inline void _xor(uint64_t* dst, uint64_t* src, int nw) noexcept nogil:
    cdef int w
    for w in range(nw):
        dst[w] ^= src[w]


cdef void _load(object value, uint64_t* dst, int nw):
    cdef int w
    for w in range(nw):
        dst[w] = <uint64_t>(value & MASK)
        value >>= 64


cdef object _store(uint64_t* src, int nw):
    cdef int w
    out = 0
    for w in range(nw - 1, -1, -1):
        out = (out << 64) | src[w]
    return out


cdef class _Eliminator:
    """Incremental echelon basis over packed words with combination tracking."""

    cdef int nv, nc, nbits
    cdef uint64_t* rows
    cdef uint64_t* combos
    cdef int* pivot_of
    cdef int count

    def __cinit__(self, int nbits, int ncombo, int capacity):
        self.nbits = nbits if nbits > 0 else 1
        self.nv = (self.nbits + 63) // 64
        self.nc = (ncombo + 63) // 64 if ncombo > 0 else 1
        cap = capacity if capacity > 0 else 1
        self.rows = <uint64_t*>calloc(cap * self.nv, sizeof(uint64_t))
        self.combos = <uint64_t*>calloc(cap * self.nc, sizeof(uint64_t))
        self.pivot_of = <int*>calloc(self.nv * 64, sizeof(int))
        if not self.rows or not self.combos or not self.pivot_of:
            raise MemoryError()
        for i in range(self.nv * 64):
            self.pivot_of[i] = -1
        self.count = 0

    def __dealloc__(self):
        free(self.rows)
        free(self.combos)
        free(self.pivot_of)

    cdef int reduce(self, uint64_t* v, uint64_t* c) noexcept nogil:
        # Returns the pivot bit left in v, or -1 if v reduced to zero.
        cdef int h, r
        while True:
            h = _top_bit(v, self.nv)
            if h < 0:
                return -1
            r = self.pivot_of[h]
            if r < 0:
                return h
            _xor(v, self.rows + r * self.nv, self.nv)
            _xor(c, self.combos + r * self.nc, self.nc)

    cdef void insert(self, uint64_t* v, uint64_t* c, int h) noexcept nogil:
        memcpy(self.rows + self.count * self.nv, v, self.nv * sizeof(uint64_t))
        memcpy(self.combos + self.count * self.nc, c, self.nc * sizeof(uint64_t))
        self.pivot_of[h] = self.count
        self.count += 1


def _width(vectors):
    top = 0
    for x in vectors:
        b = x.bit_length()
        if b > top:
            top = b
    return top


def rank(vectors):
    """Rank over GF(2) of a family of bitset vectors."""
    vecs = [int(x) for x in vectors if x]
    if not vecs:
        return 0
    cdef _Eliminator el = _Eliminator(_width(vecs), 1, len(vecs))
    cdef uint64_t* v = <uint64_t*>calloc(el.nv, sizeof(uint64_t))
    cdef uint64_t* c = <uint64_t*>calloc(el.nc, sizeof(uint64_t))
    cdef int h
    try:
        for value in vecs:
            _load(value, v, el.nv)
            h = el.reduce(v, c)
            if h >= 0:
                el.insert(v, c, h)
        return el.count
    finally:
        free(v)
        free(c)


def nullspace(columns):
    """Basis of the kernel of the column map, as bitsets over column indices."""
    cols = [int(x) for x in columns]
    n = len(cols)
    if n == 0:
        return []
    cdef _Eliminator el = _Eliminator(_width(cols), n, n)
    cdef uint64_t* v = <uint64_t*>calloc(el.nv, sizeof(uint64_t))
    cdef uint64_t* c = <uint64_t*>calloc(el.nc, sizeof(uint64_t))
    cdef int h, i
    out = []
    try:
        for i in range(n):
            _load(cols[i], v, el.nv)
            _load(1 << i, c, el.nc)
            h = el.reduce(v, c)
            if h >= 0:
                el.insert(v, c, h)
            else:
                out.append(_store(c, el.nc))
        return out
    finally:
        free(v)
        free(c)


def solve(columns, rhs):
    """Some combination c with XOR of the selected columns equal to rhs, or None."""
    cols = [int(x) for x in columns]
    rhs = int(rhs)
    n = len(cols)
    width = max(_width(cols), rhs.bit_length())
    cdef _Eliminator el = _Eliminator(width, n, n)
    cdef uint64_t* v = <uint64_t*>calloc(el.nv, sizeof(uint64_t))
    cdef uint64_t* c = <uint64_t*>calloc(el.nc, sizeof(uint64_t))
    cdef int h, i
    try:
        for i in range(n):
            _load(cols[i], v, el.nv)
            _load(1 << i, c, el.nc)
            h = el.reduce(v, c)
            if h >= 0:
                el.insert(v, c, h)
        _load(rhs, v, el.nv)
        _load(0, c, el.nc)
        h = el.reduce(v, c)
        if h >= 0:
            return None
        return _store(c, el.nc)
    finally:
        free(v)
        free(c)

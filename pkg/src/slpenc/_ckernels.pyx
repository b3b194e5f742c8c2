# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank/select, excess search and packed-integer kernels.

Same interface and conventions as ``_pykernels``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int8_t

cnp.import_array()

BACKEND = "cython"

cdef enum:
    WORD = 64
    BLOCK_WORDS = 8
    BLOCK_BITS = 512
    SAMPLE = 512


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _select_in_word(uint64_t w, int64_t j) nogil:
    cdef int64_t k
    for k in range(j - 1):
        w &= w - 1
    return __builtin_ctzll(w)


cdef class RankSelect:
    cdef readonly int64_t nbits, ones, zeros
    cdef uint64_t[::1] _words
    cdef int64_t[::1] _blocks
    cdef int64_t[::1] _sample1
    cdef int64_t[::1] _sample0
    cdef int8_t[::1] _minpref
    cdef int8_t[::1] _tot
    cdef int64_t _nblocks
    cdef bint _has_excess
    cdef object _words_arr

    def __init__(self, words, int64_t nbits):
        cdef int64_t nwords = (nbits + WORD - 1) // WORD
        arr = np.zeros(nwords + 1, dtype=np.uint64)
        src = np.asarray(words, dtype=np.uint64)
        if src.shape[0] < nwords:
            raise ValueError("word array too short for %d bits" % nbits)
        arr[:nwords] = src[:nwords]
        if nwords and nbits % WORD:
            arr[nwords - 1] &= np.uint64((1 << int(nbits % WORD)) - 1)
        self._words_arr = arr
        self._words = arr
        self.nbits = nbits
        self._nblocks = (nwords + BLOCK_WORDS - 1) // BLOCK_WORDS
        blocks = np.zeros(self._nblocks + 1, dtype=np.int64)
        self._blocks = blocks
        cdef int64_t acc = 0, wi
        for wi in range(nwords):
            if wi % BLOCK_WORDS == 0:
                self._blocks[wi // BLOCK_WORDS] = acc
            acc += __builtin_popcountll(self._words[wi])
        self._blocks[self._nblocks] = acc
        self.ones = acc
        self.zeros = nbits - acc
        self._sample1 = self._samples(1)
        self._sample0 = self._samples(0)
        self._has_excess = False

    @property
    def words(self):
        return self._words_arr[:-1]

    cdef inline int64_t _zeros_before(self, int64_t b):
        cdef int64_t lim = b * BLOCK_BITS
        if lim > self.nbits:
            lim = self.nbits
        return lim - self._blocks[b]

    cdef inline int64_t _count_before(self, int bit, int64_t b):
        if bit:
            return self._blocks[b]
        return self._zeros_before(b)

    def _samples(self, int bit):
        cdef int64_t total = self.ones if bit else self.zeros
        cdef int64_t ns = (total + SAMPLE - 1) // SAMPLE
        out = np.zeros(ns, dtype=np.int64)
        cdef int64_t[::1] o = out
        cdef int64_t b = 0, k, target
        for k in range(ns):
            target = k * SAMPLE + 1
            while b + 1 < self._nblocks and self._count_before(bit, b + 1) < target:
                b += 1
            o[k] = b
        return out

    cpdef int access(self, int64_t i):
        if i < 1 or i > self.nbits:
            raise IndexError("bit position %d outside [1..%d]" % (i, self.nbits))
        cdef int64_t k = i - 1
        return (self._words[k >> 6] >> (k & 63)) & 1

    cpdef int64_t rank0(self, int64_t i):
        if i <= 0:
            return 0
        if i >= self.nbits:
            return self.zeros
        return i - self.rank1(i)

    cpdef int64_t rank1(self, int64_t i):
        if i <= 0:
            return 0
        if i >= self.nbits:
            return self.ones
        cdef int64_t wi = (i - 1) >> 6
        cdef int64_t b = wi // BLOCK_WORDS
        cdef int64_t r = self._blocks[b]
        cdef int64_t k
        for k in range(b * BLOCK_WORDS, wi):
            r += __builtin_popcountll(self._words[k])
        cdef int off = ((i - 1) & 63) + 1
        cdef uint64_t mask = (<uint64_t>0xFFFFFFFFFFFFFFFF) >> (64 - off)
        return r + __builtin_popcountll(self._words[wi] & mask)

    cpdef int64_t select1(self, int64_t j):
        if j <= 0:
            return 0
        if j > self.ones:
            return self.nbits + 1
        cdef int64_t s = (j - 1) // SAMPLE
        cdef int64_t lo = self._sample1[s]
        cdef int64_t hi
        if s + 1 < self._sample1.shape[0]:
            hi = self._sample1[s + 1]
        else:
            hi = self._nblocks - 1
        cdef int64_t mid
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._blocks[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        cdef int64_t r = j - self._blocks[lo]
        cdef int64_t wi = lo * BLOCK_WORDS
        cdef int c
        while True:
            c = __builtin_popcountll(self._words[wi])
            if c >= r:
                return wi * WORD + _select_in_word(self._words[wi], r) + 1
            r -= c
            wi += 1

    cpdef int64_t select0(self, int64_t j):
        if j <= 0:
            return 0
        if j > self.zeros:
            return self.nbits + 1
        cdef int64_t s = (j - 1) // SAMPLE
        cdef int64_t lo = self._sample0[s]
        cdef int64_t hi
        if s + 1 < self._sample0.shape[0]:
            hi = self._sample0[s + 1]
        else:
            hi = self._nblocks - 1
        cdef int64_t mid
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._zeros_before(mid) < j:
                lo = mid
            else:
                hi = mid - 1
        cdef int64_t r = j - self._zeros_before(lo)
        cdef int64_t wi = lo * BLOCK_WORDS
        cdef uint64_t w
        cdef int c
        while True:
            w = ~self._words[wi]
            c = __builtin_popcountll(w)
            if c >= r:
                return wi * WORD + _select_in_word(w, r) + 1
            r -= c
            wi += 1

    cdef void _build_excess(self):
        cdef int64_t nwords = self._words.shape[0] - 1
        mp = np.zeros(nwords, dtype=np.int8)
        tt = np.zeros(nwords, dtype=np.int8)
        self._minpref = mp
        self._tot = tt
        cdef int64_t wi
        cdef int k, e, m
        cdef uint64_t w
        for wi in range(nwords):
            w = self._words[wi]
            e = 0
            m = 0
            for k in range(WORD):
                if (w >> k) & 1:
                    e -= 1
                else:
                    e += 1
                if e < m:
                    m = e
            self._minpref[wi] = m
            self._tot[wi] = e
        self._has_excess = True

    cpdef int64_t bwdsearch(self, int64_t i, int64_t d):
        if d >= 0:
            raise ValueError("bwdsearch supports negative d only")
        if not self._has_excess:
            self._build_excess()
        cdef int64_t cur = i - 2 * self.rank1(i)
        cdef int64_t target = cur + d
        cdef int64_t j = i, w
        cdef int k
        cdef uint64_t word
        while (j & 63) and j > 0:
            if (self._words[(j - 1) >> 6] >> ((j - 1) & 63)) & 1:
                cur += 1
            else:
                cur -= 1
            j -= 1
            if cur == target:
                return j
        while j > 0:
            w = (j - 1) >> 6
            if cur + self._minpref[w] - self._tot[w] <= target:
                word = self._words[w]
                for k in range(63, -1, -1):
                    if (word >> k) & 1:
                        cur += 1
                    else:
                        cur -= 1
                    if cur == target:
                        return w * WORD + k
                raise AssertionError("excess summary inconsistent")
            cur -= self._tot[w]
            j -= WORD
        return -1


cdef class PackedInts:
    cdef readonly int width
    cdef readonly int64_t length
    cdef uint64_t[::1] _words
    cdef uint64_t _mask
    cdef object _words_arr

    def __init__(self, words, int width, int64_t length):
        src = np.asarray(words, dtype=np.uint64)
        arr = np.zeros(src.shape[0] + 1, dtype=np.uint64)
        arr[:src.shape[0]] = src
        self._words_arr = arr
        self._words = arr
        self.width = width
        self.length = length
        if width >= 64:
            self._mask = <uint64_t>0xFFFFFFFFFFFFFFFF
        else:
            self._mask = ((<uint64_t>1) << width) - 1

    @property
    def words(self):
        return self._words_arr[:-1]

    cpdef uint64_t get(self, int64_t i):
        if self.width == 0:
            return 0
        cdef int64_t pos = i * self.width
        cdef int64_t wi = pos >> 6
        cdef int off = pos & 63
        cdef uint64_t v = self._words[wi] >> off
        if off + self.width > 64:
            v |= self._words[wi + 1] << (64 - off)
        return v & self._mask

"""Pure-Python rank/select, excess search and packed-integer kernels.

This module mirrors ``_ckernels.pyx`` function for function; the compiled
version is preferred at import time (see ``_backend``).  Positions follow the
1-based convention used throughout the package: bit ``k`` (1-based) lives in
word ``(k - 1) // 64`` at bit offset ``(k - 1) % 64``.
"""

from bisect import bisect_right

BACKEND = "python"

WORD = 64
BLOCK_WORDS = 8  # 512-bit blocks
BLOCK_BITS = WORD * BLOCK_WORDS
SAMPLE = 512
_MASK64 = (1 << 64) - 1


def _select_in_word(w, j):
    """Offset (0-based) of the j-th set bit of ``w``, j >= 1."""
    for _ in range(j - 1):
        w &= w - 1
    return (w & -w).bit_length() - 1


class RankSelect:
    """Static bit string with a two-level rank directory and select samples."""

    def __init__(self, words, nbits):
        self.words = [int(w) & _MASK64 for w in words]
        self.nbits = nbits
        nwords = (nbits + WORD - 1) // WORD
        if len(self.words) < nwords:
            raise ValueError("word array too short for %d bits" % nbits)
        del self.words[nwords:]
        if nwords and nbits % WORD:
            self.words[-1] &= (1 << (nbits % WORD)) - 1
        # ones strictly before each block, plus a trailing total
        blocks = []
        acc = 0
        for wi, w in enumerate(self.words):
            if wi % BLOCK_WORDS == 0:
                blocks.append(acc)
            acc += w.bit_count()
        blocks.append(acc)
        self.blocks = blocks
        self.ones = acc
        self.zeros = nbits - acc
        self.sample1 = self._samples(1)
        self.sample0 = self._samples(0)
        self._minpref = None
        self._tot = None

    def _zeros_before(self, b):
        return min(b * BLOCK_BITS, self.nbits) - self.blocks[b]

    def _samples(self, bit):
        # block index holding the (k*SAMPLE + 1)-th occurrence of ``bit``
        out = []
        total = self.ones if bit else self.zeros
        nb = len(self.blocks) - 1
        b = 0
        for k in range(0, total, SAMPLE):
            target = k + 1
            while b + 1 < nb and self._count_before(bit, b + 1) < target:
                b += 1
            out.append(b)
        return out

    def _count_before(self, bit, b):
        return self.blocks[b] if bit else self._zeros_before(b)

    def access(self, i):
        if not 1 <= i <= self.nbits:
            raise IndexError(f"bit position {i} outside [1..{self.nbits}]")
        k = i - 1
        return (self.words[k >> 6] >> (k & 63)) & 1

    def rank0(self, i):
        if i <= 0:
            return 0
        if i >= self.nbits:
            return self.zeros
        return i - self.rank1(i)

    def rank1(self, i):
        """Ones in positions 1..i; clamps i to [0..nbits]."""
        if i <= 0:
            return 0
        if i >= self.nbits:
            return self.ones
        wi = (i - 1) >> 6
        b = wi // BLOCK_WORDS
        r = self.blocks[b]
        words = self.words
        for k in range(b * BLOCK_WORDS, wi):
            r += words[k].bit_count()
        off = ((i - 1) & 63) + 1
        return r + (words[wi] & (_MASK64 >> (64 - off))).bit_count()

    def select1(self, j):
        """Position of the j-th one; 0 if j <= 0, nbits + 1 if j > ones."""
        if j <= 0:
            return 0
        if j > self.ones:
            return self.nbits + 1
        s = (j - 1) // SAMPLE
        lo = self.sample1[s]
        hi = self.sample1[s + 1] + 1 if s + 1 < len(self.sample1) else len(self.blocks) - 1
        b = bisect_right(self.blocks, j - 1, lo, hi) - 1
        r = j - self.blocks[b]
        words = self.words
        wi = b * BLOCK_WORDS
        while True:
            c = words[wi].bit_count()
            if c >= r:
                return wi * WORD + _select_in_word(words[wi], r) + 1
            r -= c
            wi += 1

    def select0(self, j):
        """Position of the j-th zero; 0 if j <= 0, nbits + 1 if j > zeros."""
        if j <= 0:
            return 0
        if j > self.zeros:
            return self.nbits + 1
        s = (j - 1) // SAMPLE
        lo = self.sample0[s]
        hi = self.sample0[s + 1] if s + 1 < len(self.sample0) else len(self.blocks) - 2
        # last block b in [lo, hi] with zeros_before(b) < j
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._zeros_before(mid) < j:
                lo = mid
            else:
                hi = mid - 1
        b = lo
        r = j - self._zeros_before(b)
        words = self.words
        wi = b * BLOCK_WORDS
        while True:
            w = ~words[wi] & _MASK64
            c = w.bit_count()
            if c >= r:
                return wi * WORD + _select_in_word(w, r) + 1
            r -= c
            wi += 1

    def _build_excess(self):
        minpref = []
        tot = []
        for w in self.words:
            e = 0
            m = 0
            for k in range(WORD):
                e += -1 if (w >> k) & 1 else 1
                if e < m:
                    m = e
            minpref.append(m)
            tot.append(e)
        self._minpref = minpref
        self._tot = tot

    def bwdsearch(self, i, d):
        """Largest j <= i with excess(j) == excess(i) + d, or -1.

        Excess is ``rank0(j) - rank1(j)`` with excess(0) == 0; only d < 0 is
        supported.
        """
        if d >= 0:
            raise ValueError("bwdsearch supports negative d only")
        if self._minpref is None:
            self._build_excess()
        cur = i - 2 * self.rank1(i)
        target = cur + d
        words = self.words
        j = i
        # bit-by-bit down to a word boundary
        while j & 63 and j > 0:
            cur += 1 if (words[(j - 1) >> 6] >> ((j - 1) & 63)) & 1 else -1
            j -= 1
            if cur == target:
                return j
        minpref = self._minpref
        tot = self._tot
        while j > 0:
            w = (j - 1) >> 6
            if cur + minpref[w] - tot[w] <= target:
                word = words[w]
                for k in range(63, -1, -1):
                    cur += 1 if (word >> k) & 1 else -1
                    if cur == target:
                        return w * WORD + k
                raise AssertionError("excess summary inconsistent")
            cur -= tot[w]
            j -= WORD
        return -1


class PackedInts:
    """Read-only view of ``length`` fixed-width unsigned integers."""

    def __init__(self, words, width, length):
        self.words = [int(w) & _MASK64 for w in words]
        self.width = width
        self.length = length
        self.mask = (1 << width) - 1

    def get(self, i):
        """Value at 0-based index i."""
        w = self.width
        if w == 0:
            return 0
        pos = i * w
        wi = pos >> 6
        off = pos & 63
        v = self.words[wi] >> off
        if off + w > 64:
            v |= self.words[wi + 1] << (64 - off)
        return v & self.mask

"""Bit sequences with rank/select, static and dynamic.

`BitSequence` is immutable and answers rank in O(1) through a per-word
cumulative directory. `DynBitSequence` supports positional insert/remove by
keeping the payload in bounded-size integer chunks indexed by Fenwick trees.
`DynSequence` is a wavelet tree over dynamic bitmaps, giving access/rank/select
over a small integer alphabet.

All public positions and ordinals are 1-based: ``rank1(i)`` counts ones in
positions ``1..i`` (so ``rank1(0) == 0``) and ``select1(j)`` returns the
position of the j-th one.
"""

from __future__ import annotations

import struct
from typing import Iterable

from .errors import CorruptFileError, NotFoundError

_FULL64 = (1 << 64) - 1


def _pack_bits(bits) -> tuple[list[int], int]:
    """Pack an iterable of 0/1 (or a '01' string) into 64-bit words, LSB first."""
    words = []
    cur = 0
    shift = 0
    n = 0
    for b in bits:
        if isinstance(b, str):
            if b == "1":
                b = 1
            elif b == "0":
                b = 0
            else:
                raise ValueError("bit strings may only contain '0' and '1'")
        if b:
            cur |= 1 << shift
        shift += 1
        n += 1
        if shift == 64:
            words.append(cur)
            cur = 0
            shift = 0
    if shift:
        words.append(cur)
    return words, n


class BitSequence:
    """Immutable bit array with O(1) rank1 and O(log n) select1."""

    __slots__ = ("n", "ones", "_words", "_cum")

    def __init__(self, bits: Iterable = ()):
        self._words, self.n = _pack_bits(bits)
        self._build_directory()

    @classmethod
    def from_words(cls, words: list[int], n: int) -> "BitSequence":
        """Wrap pre-packed 64-bit words holding n bits (unused high bits zero)."""
        bs = cls.__new__(cls)
        bs._words = list(words)
        bs.n = n
        bs._build_directory()
        return bs

    def _build_directory(self):
        cum = [0] * (len(self._words) + 1)
        total = 0
        for i, w in enumerate(self._words):
            total += w.bit_count()
            cum[i + 1] = total
        self._cum = cum
        self.ones = total

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        """Bit at position i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"bit position {i} out of range 1..{self.n}")
        i -= 1
        return (self._words[i >> 6] >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of ones in positions 1..i; rank1(0) == 0."""
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} out of range 0..{self.n}")
        w, r = divmod(i, 64)
        if r:
            return self._cum[w] + (self._words[w] & ((1 << r) - 1)).bit_count()
        return self._cum[w]

    def select1(self, j: int) -> int:
        """Position of the j-th one (1-based)."""
        if j < 1 or j > self.ones:
            raise NotFoundError(f"select1({j}): sequence has {self.ones} ones")
        # binary search the per-word directory
        cum = self._cum
        lo, hi = 0, len(self._words) - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if cum[mid + 1] >= j:
                hi = mid
            else:
                lo = mid + 1
        word = self._words[lo]
        for _ in range(j - cum[lo] - 1):
            word &= word - 1
        return (lo << 6) + (word & -word).bit_length()

    def to_bits(self) -> list[int]:
        words = self._words
        return [(words[i >> 6] >> (i & 63)) & 1 for i in range(self.n)]

    def to_bytes(self) -> bytes:
        """Wire form: u64 LE bit count, then the packed words as u64 LE."""
        return struct.pack("<Q", self.n) + struct.pack(
            f"<{len(self._words)}Q", *self._words
        )

    @classmethod
    def from_bytes(cls, buf: bytes, offset: int = 0) -> tuple["BitSequence", int]:
        """Parse the wire form; returns (sequence, next offset)."""
        if offset + 8 > len(buf):
            raise CorruptFileError("truncated bit sequence header")
        (n,) = struct.unpack_from("<Q", buf, offset)
        offset += 8
        nwords = (n + 63) // 64
        if offset + 8 * nwords > len(buf):
            raise CorruptFileError("truncated bit sequence payload")
        words = list(struct.unpack_from(f"<{nwords}Q", buf, offset))
        if n % 64 and words and words[-1] >> (n % 64):
            raise CorruptFileError("bit sequence has nonzero padding bits")
        return cls.from_words(words, n), offset + 8 * nwords


class _Fenwick:
    """Fenwick tree over a fixed number of leaves, supporting prefix sums and
    a descent that finds the leaf containing a running total."""

    __slots__ = ("size", "_tree", "_log")

    def __init__(self, values: list[int]):
        size = len(values)
        tree = [0] * (size + 1)
        for i, v in enumerate(values):
            tree[i + 1] += v
            parent = i + 1 + ((i + 1) & -(i + 1))
            if parent <= size:
                tree[parent] += tree[i + 1]
        self.size = size
        self._tree = tree
        self._log = max(1, size.bit_length())

    def add(self, i: int, delta: int):
        """Add delta to leaf i (0-based)."""
        i += 1
        tree = self._tree
        size = self.size
        while i <= size:
            tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Sum of leaves 0..i-1."""
        tree = self._tree
        total = 0
        while i:
            total += tree[i]
            i -= i & -i
        return total

    def find(self, target: int) -> tuple[int, int]:
        """Smallest leaf index i with prefix(i+1) >= target, plus prefix(i).

        target must satisfy 1 <= target <= total.
        """
        pos = 0
        acc = 0
        tree = self._tree
        size = self.size
        step = 1 << self._log
        while step:
            nxt = pos + step
            if nxt <= size and acc + tree[nxt] < target:
                pos = nxt
                acc += tree[nxt]
            step >>= 1
        return pos, acc


_CHUNK_BITS = 2048  # target chunk size; chunks split when they exceed twice this


class DynBitSequence:
    """Bit array with positional insert/remove plus rank/select (1-based).

    Single-writer: no concurrent readers during mutation.
    """

    __slots__ = ("n", "ones", "_chunks", "_lens", "_ones", "_flen", "_fones")

    def __init__(self, bits: Iterable = ()):
        words, n = _pack_bits(bits)
        payload = 0
        for i, w in enumerate(words):
            payload |= w << (64 * i)
        self._chunks = []
        self._lens = []
        self._ones = []
        pos = 0
        while pos < n:
            take = min(_CHUNK_BITS, n - pos)
            piece = (payload >> pos) & ((1 << take) - 1)
            self._chunks.append(piece)
            self._lens.append(take)
            self._ones.append(piece.bit_count())
            pos += take
        if not self._chunks:
            self._chunks = [0]
            self._lens = [0]
            self._ones = [0]
        self.n = n
        self.ones = sum(self._ones)
        self._reindex()

    def _reindex(self):
        self._flen = _Fenwick(self._lens)
        self._fones = _Fenwick(self._ones)

    def _locate(self, p: int) -> tuple[int, int, int]:
        """Chunk index, 0-based offset inside it, and bits before it, for
        position p in 1..n."""
        ci, before = self._flen.find(p)
        return ci, p - before - 1, before

    def _split_if_needed(self, ci: int):
        length = self._lens[ci]
        if length <= 2 * _CHUNK_BITS:
            return
        chunk = self._chunks[ci]
        pieces = []
        sizes = []
        pos = 0
        while pos < length:
            take = min(_CHUNK_BITS, length - pos)
            pieces.append((chunk >> pos) & ((1 << take) - 1))
            sizes.append(take)
            pos += take
        self._chunks[ci : ci + 1] = pieces
        self._lens[ci : ci + 1] = sizes
        self._ones[ci : ci + 1] = [p.bit_count() for p in pieces]
        self._reindex()

    def insert(self, p: int, b: int):
        """Insert bit b at position p (1 <= p <= n+1); later bits shift up."""
        if not 1 <= p <= self.n + 1:
            raise IndexError(f"insert position {p} out of range 1..{self.n + 1}")
        if p == self.n + 1:
            ci = len(self._chunks) - 1
            q = self._lens[ci]
        else:
            ci, q, _ = self._locate(p)
        chunk = self._chunks[ci]
        lo = chunk & ((1 << q) - 1)
        hi = chunk >> q
        self._chunks[ci] = lo | ((hi << 1) | (1 if b else 0)) << q
        self._lens[ci] += 1
        self._flen.add(ci, 1)
        self.n += 1
        if b:
            self._ones[ci] += 1
            self._fones.add(ci, 1)
            self.ones += 1
        self._split_if_needed(ci)

    def insert_zeros(self, p: int, count: int):
        """Insert a run of `count` zero bits starting at position p."""
        if count <= 0:
            return
        if not 1 <= p <= self.n + 1:
            raise IndexError(f"insert position {p} out of range 1..{self.n + 1}")
        if p == self.n + 1:
            ci = len(self._chunks) - 1
            q = self._lens[ci]
        else:
            ci, q, _ = self._locate(p)
        chunk = self._chunks[ci]
        lo = chunk & ((1 << q) - 1)
        hi = chunk >> q
        self._chunks[ci] = lo | hi << (q + count)
        self._lens[ci] += count
        self._flen.add(ci, count)
        self.n += count
        self._split_if_needed(ci)

    def remove(self, p: int) -> int:
        """Remove and return the bit at position p."""
        if not 1 <= p <= self.n:
            raise IndexError(f"remove position {p} out of range 1..{self.n}")
        ci, q, _ = self._locate(p)
        chunk = self._chunks[ci]
        bit = (chunk >> q) & 1
        lo = chunk & ((1 << q) - 1)
        hi = chunk >> (q + 1)
        self._chunks[ci] = lo | hi << q
        self._lens[ci] -= 1
        self._flen.add(ci, -1)
        self.n -= 1
        if bit:
            self._ones[ci] -= 1
            self._fones.add(ci, -1)
            self.ones -= 1
        self._drop_if_empty(ci)
        return bit

    def remove_run(self, p: int, count: int):
        """Remove bits at positions p..p+count-1."""
        if count < 0 or p < 1 or p + count - 1 > self.n:
            raise IndexError(f"remove run {p}..{p + count - 1} out of range")
        while count:
            ci, q, _ = self._locate(p)
            take = min(count, self._lens[ci] - q)
            chunk = self._chunks[ci]
            removed = (chunk >> q) & ((1 << take) - 1)
            lo = chunk & ((1 << q) - 1)
            hi = chunk >> (q + take)
            self._chunks[ci] = lo | hi << q
            self._lens[ci] -= take
            self._flen.add(ci, -take)
            gone = removed.bit_count()
            if gone:
                self._ones[ci] -= gone
                self._fones.add(ci, -gone)
                self.ones -= gone
            self.n -= take
            count -= take
            self._drop_if_empty(ci)

    def _drop_if_empty(self, ci: int):
        if self._lens[ci] == 0 and len(self._chunks) > 1:
            del self._chunks[ci]
            del self._lens[ci]
            del self._ones[ci]
            self._reindex()

    def set_bit(self, p: int, b: int):
        """Assign bit b to position p in place."""
        if not 1 <= p <= self.n:
            raise IndexError(f"bit position {p} out of range 1..{self.n}")
        ci, q, _ = self._locate(p)
        old = (self._chunks[ci] >> q) & 1
        if old == (1 if b else 0):
            return
        self._chunks[ci] ^= 1 << q
        delta = 1 if b else -1
        self._ones[ci] += delta
        self._fones.add(ci, delta)
        self.ones += delta

    def access(self, p: int) -> int:
        if not 1 <= p <= self.n:
            raise IndexError(f"bit position {p} out of range 1..{self.n}")
        ci, q, _ = self._locate(p)
        return (self._chunks[ci] >> q) & 1

    def rank1(self, i: int) -> int:
        """Number of ones in positions 1..i."""
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} out of range 0..{self.n}")
        if i == 0:
            return 0
        ci, q, _ = self._locate(i)
        return self._fones.prefix(ci) + (
            self._chunks[ci] & ((1 << (q + 1)) - 1)
        ).bit_count()

    def select1(self, j: int) -> int:
        if j < 1 or j > self.ones:
            raise NotFoundError(f"select1({j}): sequence has {self.ones} ones")
        ci, before = self._fones.find(j)
        return self._flen.prefix(ci) + self._nth_bit(self._chunks[ci], j - before)

    def select0(self, j: int) -> int:
        zeros = self.n - self.ones
        if j < 1 or j > zeros:
            raise NotFoundError(f"select0({j}): sequence has {zeros} zeros")
        # joint descent: zeros in a Fenwick node = stored length minus stored ones
        pos = 0
        acc = 0
        ltree = self._flen._tree
        otree = self._fones._tree
        size = self._flen.size
        step = 1 << self._flen._log
        while step:
            nxt = pos + step
            if nxt <= size and acc + (ltree[nxt] - otree[nxt]) < j:
                pos = nxt
                acc += ltree[nxt] - otree[nxt]
            step >>= 1
        mask = (1 << self._lens[pos]) - 1
        return self._flen.prefix(pos) + self._nth_bit(~self._chunks[pos] & mask, j - acc)

    @staticmethod
    def _nth_bit(chunk: int, j: int) -> int:
        """1-based offset of the j-th set bit of chunk, scanning 64-bit words."""
        base = 0
        while True:
            word = chunk & _FULL64
            cnt = word.bit_count()
            if cnt >= j:
                for _ in range(j - 1):
                    word &= word - 1
                return base + (word & -word).bit_length()
            j -= cnt
            chunk >>= 64
            base += 64

    def to_bits(self) -> list[int]:
        out = []
        for chunk, length in zip(self._chunks, self._lens):
            out.extend((chunk >> i) & 1 for i in range(length))
        return out

    def __len__(self) -> int:
        return self.n


class _WaveletNode:
    __slots__ = ("bits", "left", "right")

    def __init__(self):
        self.bits = DynBitSequence()
        self.left = None
        self.right = None


class DynSequence:
    """Dynamic sequence of small non-negative integers with access, per-symbol
    rank/select, and positional insert (wavelet tree over dynamic bitmaps).

    The alphabet capacity doubles transparently when a larger symbol arrives;
    the rebuild cost is amortized over the rare capacity growths.
    """

    __slots__ = ("n", "_cap", "_root")

    def __init__(self, capacity: int = 2):
        cap = 2
        while cap < capacity:
            cap *= 2
        self.n = 0
        self._cap = cap
        self._root = _WaveletNode()

    def insert(self, p: int, c: int):
        """Insert symbol c at position p (1 <= p <= n+1)."""
        if not 1 <= p <= self.n + 1:
            raise IndexError(f"insert position {p} out of range 1..{self.n + 1}")
        if c < 0:
            raise ValueError("symbols must be non-negative")
        while c >= self._cap:
            self._grow()
        node = self._root
        lo, hi = 0, self._cap
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            bits = node.bits
            before = bits.rank1(p - 1)
            if c >= mid:
                bits.insert(p, 1)
                p = before + 1
                if node.right is None:
                    node.right = _WaveletNode()
                node = node.right
                lo = mid
            else:
                bits.insert(p, 0)
                p = p - before  # zeros before p, plus one
                if node.left is None:
                    node.left = _WaveletNode()
                node = node.left
                hi = mid
        self.n += 1

    def _grow(self):
        symbols = [self.access(i) for i in range(1, self.n + 1)]
        self._cap *= 2
        self._root = _WaveletNode()
        self.n = 0
        for i, c in enumerate(symbols):
            self.insert(i + 1, c)

    def access(self, p: int) -> int:
        if not 1 <= p <= self.n:
            raise IndexError(f"position {p} out of range 1..{self.n}")
        node = self._root
        lo, hi = 0, self._cap
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            ones = node.bits.rank1(p)
            if node.bits.access(p):
                p = ones
                node = node.right
                lo = mid
            else:
                p = p - ones
                node = node.left
                hi = mid
        return lo

    def rank(self, c: int, i: int) -> int:
        """Occurrences of symbol c in positions 1..i; unknown symbols count 0."""
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} out of range 0..{self.n}")
        if c < 0 or c >= self._cap:
            return 0
        node = self._root
        lo, hi = 0, self._cap
        while hi - lo > 1:
            if node is None or i == 0:
                return 0
            mid = (lo + hi) >> 1
            ones = node.bits.rank1(i)
            if c >= mid:
                i = ones
                node = node.right
                lo = mid
            else:
                i = i - ones
                node = node.left
                hi = mid
        return i if node is not None else 0

    def select(self, c: int, j: int) -> int:
        """Position of the j-th occurrence of symbol c."""
        if j < 1:
            raise NotFoundError(f"select ordinal {j} must be positive")
        if c < 0 or c >= self._cap:
            raise NotFoundError(f"symbol {c} does not occur")
        return self._select(self._root, 0, self._cap, c, j)

    def _select(self, node, lo: int, hi: int, c: int, j: int) -> int:
        if node is None:
            raise NotFoundError(f"symbol {c} does not occur")
        if hi - lo == 1:
            return j
        mid = (lo + hi) >> 1
        if c >= mid:
            jj = self._select(node.right, mid, hi, c, j)
            return node.bits.select1(jj)
        jj = self._select(node.left, lo, mid, c, j)
        return node.bits.select0(jj)

    def to_list(self) -> list[int]:
        return [self.access(i) for i in range(1, self.n + 1)]

    def __len__(self) -> int:
        return self.n

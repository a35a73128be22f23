"""Per-run random substreams shared by the compiled and pure-Python kernels.

Run ``i`` of a campaign seeded with ``seed`` owns a xoshiro256** generator
whose four state words are SplitMix64 outputs at counters ``4i+1 .. 4i+4``
of the SplitMix64 sequence started at ``mix64(seed)``.  Streams therefore
depend only on ``(seed, i)``, never on execution order or worker count.

Python's ``random`` and numpy generators are not used here because the C
kernel has to reproduce the exact same bits without calling back into
Python.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_52 = 1.0 / (1 << 52)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream_state(seed: int, run_index: int) -> tuple[int, int, int, int]:
    base = mix64(seed)
    first = 4 * run_index
    return tuple(mix64(base + GOLDEN * (first + k)) for k in range(1, 5))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Substream:
    """xoshiro256** generator for one simulation run."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int, run_index: int):
        self.s0, self.s1, self.s2, self.s3 = substream_state(seed, run_index)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, _rotl(s3, 45)
        return result

    def uniform(self) -> float:
        """Uniform draw strictly inside (0, 1)."""
        return ((self.next_u64() >> 12) + 0.5) * _INV_2_52

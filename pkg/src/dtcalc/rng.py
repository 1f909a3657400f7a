"""Deterministic 64-bit linear congruential generator.

The state update is ``s <- (6364136223846793005 * s + 1442695040888963407) mod 2**64``
(Knuth's MMIX constants). Draws use the high 32 bits of the new state, so a
seed reproduces the same stream in any language with 64-bit wraparound.
"""

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state * MULTIPLIER + INCREMENT) & MASK
        return self.state

    def below(self, n: int) -> int:
        """Uniform-ish integer in ``[0, n)`` for ``0 < n < 2**32`` (multiply-shift)."""
        if not 0 < n < (1 << 32):
            raise ValueError(f"bound out of range: {n}")
        return ((self.next_u64() >> 32) * n) >> 32

    def integer(self, lo: int, hi: int) -> int:
        """Integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def sample(self, seq, k: int) -> list:
        pool = list(seq)
        out = []
        for _ in range(min(k, len(pool))):
            out.append(pool.pop(self.below(len(pool))))
        return out

    def fork(self) -> "Lcg64":
        return Lcg64(self.next_u64())

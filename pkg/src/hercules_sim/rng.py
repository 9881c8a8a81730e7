"""Seeded counter-based random number generation.

Crash points and workload streams must be replayable from (seed, index)
alone, so everything here is a pure function of its inputs (splitmix64).
"""

_MASK64 = (1 << 64) - 1


def splitmix64(state):
    """Advance a splitmix64 state; returns (new_state, value)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed, purpose):
    """Derive an independent stream seed from a base seed and a label."""
    h = 0xCBF29CE484222325
    for b in purpose.encode():
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    _, v = splitmix64((seed ^ h) & _MASK64)
    return v


class Stream:
    """A deterministic random stream (counter-based, O(1) state)."""

    def __init__(self, seed, purpose=""):
        self._state = derive_seed(seed, purpose) if purpose else seed & _MASK64

    def next_u64(self):
        self._state, v = splitmix64(self._state)
        return v

    def randrange(self, n):
        """Uniform integer in [0, n). n must be positive."""
        # Modulo bias is irrelevant for simulation workloads; determinism is not.
        return self.next_u64() % n

    def random(self):
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def getstate(self):
        return self._state

    def setstate(self, state):
        self._state = state & _MASK64

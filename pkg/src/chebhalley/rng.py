"""SplitMix64: a tiny, dependency-free, reproducible PRNG for sampling."""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1

DEFAULT_SEED = 20260809


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u

    def angle(self) -> float:
        return self.uniform(0.0, 2.0 * math.pi)

    def on_circle(self, radius: float) -> complex:
        t = self.angle()
        return complex(radius * math.cos(t), radius * math.sin(t))

    def in_annulus_open_closed(self, r_in: float, r_out: float) -> complex:
        """Uniform-in-radius sample with modulus in (r_in, r_out]."""
        u = 1.0 - self.uniform()  # (0, 1]
        return self.on_circle(r_in + (r_out - r_in) * u)

    def complex_in_box(self, re_lo: float, re_hi: float, im_lo: float, im_hi: float) -> complex:
        return complex(self.uniform(re_lo, re_hi), self.uniform(im_lo, im_hi))

"""Seeded 64-bit linear congruential generator.

``state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64``
and each draw is the top 53 bits of the new state divided by ``2**53``.
The initial state is the seed itself (reduced mod ``2**64``).  The
generator is tiny on purpose, so point sets can be reproduced in any
language from the seed alone.
"""

from __future__ import annotations

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def random(self) -> float:
        """Uniform float in ``[0, 1)``."""
        self.state = (MULTIPLIER * self.state + INCREMENT) & _MASK
        return (self.state >> 11) / 9007199254740992.0

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

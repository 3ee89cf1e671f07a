"""Counter-based random streams.

Every random quantity in the package comes from numpy's Philox4x64-10
generator.  A stream is identified by a 128-bit key ``(seed, stream)`` and
its k-th uniform variate (k >= 1) is a pure function of that key and k:

    u_k = (x_{k-1} >> 11) * 2**-53

where ``x_i`` is the i-th 64-bit output and block ``c`` of four outputs is
the Philox bijection applied to counter ``c``.  This is exactly what
``numpy.random.Generator(Philox(key)).random()`` produces, so bulk draws and
random-access draws agree.  Monte Carlo run j uses key ``(master_seed, j)``,
hence results do not depend on the order in which runs execute.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1
_TO_UNIT = 2.0 ** -53


def _key(seed: int, stream: int) -> list[int]:
    return [int(seed) & _MASK64, int(stream) & _MASK64]


def generator(seed: int, stream: int = 0) -> Generator:
    return Generator(Philox(key=_key(seed, stream)))


def uniforms(seed: int, n: int, stream: int = 0) -> np.ndarray:
    """The first ``n`` variates u_1..u_n of stream ``(seed, stream)``."""
    return generator(seed, stream).random(n)


@lru_cache(maxsize=4096)
def _block(seed: int, stream: int, counter: int) -> tuple[int, ...]:
    bg = Philox(key=_key(seed, stream), counter=[counter, 0, 0, 0])
    return tuple(int(x) for x in bg.random_raw(4))


def uniform_at(seed: int, k: int, stream: int = 0) -> float:
    """The k-th variate (1-indexed) of stream ``(seed, stream)`` without generating the ones before it."""
    if k < 1:
        raise ValueError("variates are 1-indexed")
    q, r = divmod(k - 1, 4)
    return (_block(int(seed) & _MASK64, int(stream) & _MASK64, q)[r] >> 11) * _TO_UNIT

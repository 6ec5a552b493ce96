"""Seedable, splittable uniform streams.

Streams come from numpy's Philox4x64-10 counter-based generator keyed
directly (no seed hashing) with ``key = (seed, stream)`` and the counter
starting at zero. Worker ``k`` of a partitioned computation uses stream ``k``.
A raw 64-bit output ``r`` becomes the double ``(r >> 11) * 2**-53`` in [0, 1);
uniform pairs take consecutive raw outputs as ``(u1, u2)``.

Reference: ``raw_stream(0, 4)`` is
``0x02f4ba6408e4d89b, 0x3dd62b0b9ca8c5b2, 0x1c8667a55d902e79, 0x907d7a052fd5b4dc``.
"""

import numpy as np

from projcauchy.errors import InvalidArgumentError

_U64 = 1 << 64


def _check_u64(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if not 0 <= value < _U64:
        raise InvalidArgumentError(f"{name} must be an unsigned 64-bit integer, got {value}")
    return value


def bit_generator(seed, stream=0):
    seed = _check_u64(seed, "seed")
    stream = _check_u64(stream, "stream")
    return np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))


def raw_stream(seed, n, stream=0):
    return bit_generator(seed, stream).random_raw(n)


def to_unit_interval(raw):
    return (np.asarray(raw, dtype=np.uint64) >> np.uint64(11)).astype(float) * 2.0**-53


def uniform_pairs(seed, n, stream=0):
    """``n`` uniform pairs in [0, 1)^2 from stream ``stream`` of ``seed``, shape (n, 2)."""
    return to_unit_interval(raw_stream(seed, 2 * n, stream)).reshape(n, 2)


def generator(seed, stream=0):
    """A ``numpy.random.Generator`` on the same keyed stream, for non-pair draws."""
    return np.random.Generator(bit_generator(seed, stream))


def split_counts(n, workers):
    """Contiguous chunk sizes for ``workers`` streams; earlier chunks take the remainder."""
    base, extra = divmod(n, workers)
    return [base + (1 if k < extra else 0) for k in range(workers)]

"""Seeded, platform-stable random streams.

"""

import zlib

import numpy as np


class RngStream:
    """Deterministic random stream built on the Philox counter-based generator.

    Parameters
    ----------
    seed : int
        Non-negative 64-bit seed.
    spawn_key : tuple of int
        Path of derived-stream keys below ``seed``; empty for a root stream.

    Notes
    -----
    Philox-4x64 (Salmon et al., 2011) maps a 256-bit counter through ten rounds
    of a keyed bijection, so a given (seed, spawn_key) pair yields the same
    sequence on every platform numpy supports. Seeds are expanded with
    :py:class:`numpy.random.SeedSequence`.

    >>> rng = seeded_rng(42)
    >>> search_rng = rng.derive('search')
    """

    def __init__(self, seed, spawn_key=()):
        seed = int(seed)
        if seed < 0 or seed >= 2 ** 64:
            raise ValueError("seed must be a 64-bit non-negative integer, got {0}".format(seed))
        self.seed = seed
        self.spawn_key = tuple(spawn_key)
        self._seq = np.random.SeedSequence(seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.Philox(self._seq))

    def __repr__(self):
        return "RngStream(seed={0}, spawn_key={1})".format(self.seed, self.spawn_key)

    def derive(self, name):
        """Return an independent child stream named ``name``.

        Children depend only on the parent's seed, key path and ``name``, not
        on how many draws the parent has made.
        """
        key = zlib.crc32(str(name).encode('utf-8'))
        return RngStream(self.seed, self.spawn_key + (key,))

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, x):
        """Permuted copy of ``x`` (or of ``arange(x)`` for an int)."""
        return self._gen.permutation(x)

    def shuffle(self, x):
        """Shuffle a mutable sequence in place."""
        self._gen.shuffle(x)
        return x

    def sklearn_seed(self):
        """Draw an int seed for libraries that take ``random_state``."""
        return int(self._gen.integers(0, 2 ** 31 - 1))


def seeded_rng(seed):
    """Create a root :py:class:`RngStream` from an integer seed."""
    return RngStream(seed)

"""Seeded random streams and uniform tuple sampling."""
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import ExhaustedSamplerError, InvalidInputError

RNG_ALGORITHM = "Philox4x64-10"
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Handle on an independent random stream.

    The stream is a Philox counter-based generator keyed by the pair
    ``(master_seed, stream_id)``, so two handles with the same pair always
    produce the same numbers and distinct ``stream_id`` values give
    independent streams.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) <= _MASK64:
                raise InvalidInputError(f"{name} must be an unsigned 64-bit integer, got {v}")

    def generator(self):
        key = (int(self.stream_id) << 64) | int(self.master_seed)
        return np.random.Generator(np.random.Philox(key=key))


def as_generator(rng):
    """Accept an :class:`RngStream`, a numpy ``Generator`` or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator()
    raise InvalidInputError(f"cannot build a random generator from {type(rng).__name__}")


def _check_nq(n, q):
    if not 1 <= q <= n:
        raise InvalidInputError(f"need 1 <= q <= n, got q={q}, n={n}")


def sample_tuples(n, q, size, rng):
    """Draw ``size`` independent uniform ``q``-subsets of ``range(n)``.

    Vectorized form of Floyd's algorithm; each row is sorted.
    """
    _check_nq(n, q)
    gen = as_generator(rng)
    out = np.empty((size, q), dtype=np.intp)
    for col, j in enumerate(range(n - q, n)):
        t = gen.integers(0, j + 1, size=size)
        dup = (out[:, :col] == t[:, None]).any(axis=1)
        out[:, col] = np.where(dup, j, t)
    out.sort(axis=1)
    return out


def sample_tuple(n, q, rng):
    """A uniform random ``q``-subset of ``range(n)`` as a sorted tuple."""
    return tuple(int(i) for i in sample_tuples(n, q, 1, rng)[0])


def sample_tuple_without_replacement(n, q, seen, rng):
    """A uniform random ``q``-subset that is not already in ``seen``.

    ``seen`` holds sorted index tuples; the caller adds the returned draw.
    Rejection sampling is used while at least half the subsets are unseen,
    after that the unseen subsets are enumerated directly.
    """
    _check_nq(n, q)
    total = comb(n, q)
    if len(seen) >= total:
        raise ExhaustedSamplerError(f"all {total} subsets of size {q} from {n} points were drawn")
    gen = as_generator(rng)
    if 2 * len(seen) <= total:
        while True:
            draw = sample_tuple(n, q, gen)
            if draw not in seen:
                return draw
    unseen = [t for t in itertools.combinations(range(n), q) if t not in seen]
    return unseen[int(gen.integers(len(unseen)))]

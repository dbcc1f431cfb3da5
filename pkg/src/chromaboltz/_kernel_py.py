"""Pure-Python random kernel: the fallback twin of _speedups.

xoshiro256** seeded through splitmix64, uniforms taken as the top 53
bits.  Every variate consumes exactly one uniform and the CDF loops use
the same double-precision arithmetic as the compiled kernel, so both
backends produce identical draw sequences from the same seed.  Keep the
two files in lockstep when changing anything here.
"""

from math import exp, expm1, log1p

from .errors import InvalidParameterError

_M64 = (1 << 64) - 1
_INV53 = 2.0 ** -53


class RandomStream:
    """Seeded deterministic generator with CDF-inversion variates."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        z = seed & _M64
        state = []
        for _ in range(4):
            z = (z + 0x9E3779B97F4A7C15) & _M64
            w = z
            w = ((w ^ (w >> 30)) * 0xBF58476D1CE4E5B9) & _M64
            w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & _M64
            state.append(w ^ (w >> 31))
        self._s0, self._s1, self._s2, self._s3 = state
        if not (self._s0 | self._s1 | self._s2 | self._s3):
            self._s0 = 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        x = (s1 * 5) & _M64
        result = (((x << 7) | (x >> 57)) & _M64) * 9 & _M64
        t = (s1 << 17) & _M64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _M64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV53

    # -- variates (sequential CDF inversion; one uniform each) ----------

    def bern(self, p: float) -> int:
        if not 0.0 <= p <= 1.0:
            raise InvalidParameterError(f"Bernoulli parameter {p!r}")
        return 1 if self.uniform() < p else 0

    def geom(self, lam: float) -> int:
        if not 0.0 <= lam < 1.0:
            raise InvalidParameterError(f"geometric parameter {lam!r}")
        u = self.uniform()
        p = 1.0 - lam
        cdf = p
        k = 0
        while u >= cdf:
            p *= lam
            if p <= 0.0:
                break
            cdf += p
            k += 1
        return k

    def pois(self, lam: float) -> int:
        if not lam >= 0.0:
            raise InvalidParameterError(f"Poisson parameter {lam!r}")
        u = self.uniform()
        if lam == 0.0:
            return 0
        p = exp(-lam)
        if p <= 0.0:
            raise InvalidParameterError(
                f"Poisson parameter {lam!r} too large for CDF inversion")
        cdf = p
        k = 0
        while u >= cdf:
            k += 1
            p *= lam / k
            cdf += p
            if p <= 0.0:
                break
        return k

    def pois_pos(self, lam: float) -> int:
        if not lam >= 0.0:
            raise InvalidParameterError(
                f"positive-Poisson parameter {lam!r}")
        u = self.uniform()
        if lam <= 0.0:
            return 1
        denom = expm1(lam)
        if denom >= 1e308:
            raise InvalidParameterError(
                f"positive-Poisson parameter {lam!r} too large")
        p = lam / denom
        cdf = p
        k = 1
        while u >= cdf:
            k += 1
            p *= lam / k
            cdf += p
            if p <= 0.0:
                break
        return k

    def log_law(self, lam: float) -> int:
        """P(l) = lam^l / (l * log(1/(1-lam))), l >= 1."""
        if not lam < 1.0:
            raise InvalidParameterError(f"log-law parameter {lam!r}")
        u = self.uniform()
        if lam <= 0.0:
            return 1
        total = -log1p(-lam)
        p = lam / total
        cdf = p
        k = 1
        while u >= cdf:
            p *= lam * k / (k + 1)
            k += 1
            cdf += p
            if p <= 0.0:
                break
        return k

    def index_cdf(self, cdf) -> int:
        """Smallest index i with u <= cdf[i]; cdf ends at 1.0."""
        u = self.uniform()
        last = len(cdf) - 1
        i = 0
        while i < last and u > cdf[i]:
            i += 1
        return i

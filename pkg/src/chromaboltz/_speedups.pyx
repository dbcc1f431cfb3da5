# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled random kernel: the hot twin of _kernel_py.

Same xoshiro256** stream and CDF loops, in C doubles.  Keep in lockstep
with _kernel_py so both backends emit identical draw sequences.
"""

from libc.math cimport exp, expm1, log1p
from libc.stdint cimport uint64_t

from .errors import InvalidParameterError

cdef double _INV53 = 1.0 / 9007199254740992.0   # 2^-53


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef class RandomStream:
    """Seeded deterministic generator with CDF-inversion variates."""

    cdef uint64_t s0, s1, s2, s3

    def __init__(self, seed):
        cdef uint64_t z = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
        cdef uint64_t w
        cdef uint64_t state[4]
        cdef int i
        for i in range(4):
            z = z + <uint64_t> 0x9E3779B97F4A7C15
            w = z
            w = (w ^ (w >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
            w = (w ^ (w >> 27)) * <uint64_t> 0x94D049BB133111EB
            state[i] = w ^ (w >> 31)
        self.s0, self.s1, self.s2, self.s3 = \
            state[0], state[1], state[2], state[3]
        if not (self.s0 | self.s1 | self.s2 | self.s3):
            self.s0 = <uint64_t> 0x9E3779B97F4A7C15

    cdef inline uint64_t _next(self) nogil:
        cdef uint64_t result = _rotl(self.s1 * 5, 7) * 9
        cdef uint64_t t = self.s1 << 17
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl(self.s3, 45)
        return result

    cdef inline double _uniform(self) nogil:
        return <double> (self._next() >> 11) * _INV53

    def next_u64(self):
        return self._next()

    def uniform(self):
        """Uniform double in [0, 1)."""
        return self._uniform()

    def bern(self, double p):
        if not (0.0 <= p <= 1.0):
            raise InvalidParameterError(f"Bernoulli parameter {p!r}")
        return 1 if self._uniform() < p else 0

    def geom(self, double lam):
        if not (0.0 <= lam < 1.0):
            raise InvalidParameterError(f"geometric parameter {lam!r}")
        cdef double u = self._uniform()
        cdef double p = 1.0 - lam
        cdef double cdf = p
        cdef long k = 0
        while u >= cdf:
            p *= lam
            if p <= 0.0:
                break
            cdf += p
            k += 1
        return k

    def pois(self, double lam):
        if not (lam >= 0.0):
            raise InvalidParameterError(f"Poisson parameter {lam!r}")
        cdef double u = self._uniform()
        if lam == 0.0:
            return 0
        cdef double p = exp(-lam)
        if p <= 0.0:
            raise InvalidParameterError(
                f"Poisson parameter {lam!r} too large for CDF inversion")
        cdef double cdf = p
        cdef long k = 0
        while u >= cdf:
            k += 1
            p *= lam / k
            cdf += p
            if p <= 0.0:
                break
        return k

    def pois_pos(self, double lam):
        if not (lam >= 0.0):
            raise InvalidParameterError(
                f"positive-Poisson parameter {lam!r}")
        cdef double u = self._uniform()
        if lam <= 0.0:
            return 1
        cdef double denom = expm1(lam)
        if denom >= 1e308:
            raise InvalidParameterError(
                f"positive-Poisson parameter {lam!r} too large")
        cdef double p = lam / denom
        cdef double cdf = p
        cdef long k = 1
        while u >= cdf:
            k += 1
            p *= lam / k
            cdf += p
            if p <= 0.0:
                break
        return k

    def log_law(self, double lam):
        """P(l) = lam^l / (l * log(1/(1-lam))), l >= 1."""
        if not (lam < 1.0):
            raise InvalidParameterError(f"log-law parameter {lam!r}")
        cdef double u = self._uniform()
        if lam <= 0.0:
            return 1
        cdef double total = -log1p(-lam)
        cdef double p = lam / total
        cdef double cdf = p
        cdef long k = 1
        while u >= cdf:
            p *= lam * k / (k + 1)
            k += 1
            cdf += p
            if p <= 0.0:
                break
        return k

    def index_cdf(self, cdf):
        """Smallest index i with u <= cdf[i]; cdf ends at 1.0."""
        cdef double[:] view = cdf
        cdef double u = self._uniform()
        cdef Py_ssize_t last = view.shape[0] - 1
        cdef Py_ssize_t i = 0
        while i < last and u > view[i]:
            i += 1
        return i

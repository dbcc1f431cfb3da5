"""Boltzmann samplers for profiled objects.

One sampler per constructor, threaded through a diagonal scale k0: all
generating-function lookups inside the k-th diagonal use f(x^(k*k0), t),
matching the substitution s_i -> s_{i*k0}.  The resulting profiled
object carries a profile whose probability is s^n [s^n]F / F under
s_i = t*x^i.

Multiset: the element count with diagonal index j is Poisson((1/j)F_j)
with F_j the inner value at scale j*k0; the law of the largest occupied
index K has P(K <= k) = prod_{j>k} exp(-(1/j)F_j).  The sign in the
exponent follows from the CDF having to increase to 1 (the printed rule
with a positive exponent exceeds one).  K = 0 gives the empty multiset.

Cycle: the repetition index k is drawn with weight phi(k)/k *
log(1/(1 - F_k)), then the segment length from the logarithmic law; the
cycle is the segment repeated k times with copies fused.

Index laws are truncated at the oracle's K_max with the residual mass
lumped onto the last index; per-context law tables are cached, so a
SamplerContext must not be shared between threads (the immutable
OracleTable can be).
"""

from __future__ import annotations

from array import array
from math import exp, log1p

from ._flat import ATOM, CYC, EPS, MSET, PROD, SEQ, UNION
from .cycle_index import totient
from .errors import DepthExceededError, InvalidParameterError
from .kernel import RandomStream
from .objects import AtomNode, CycNode, DiagNode, MSetNode, TupleNode
from .oracle import OracleTable

__all__ = ["SamplerContext", "SizeCeilingHit", "sample",
           "sample_seq", "sample_mset", "sample_cyc",
           "bern", "geom", "pois", "pois_pos"]

DEPTH_CAP = 10 ** 7


class SizeCeilingHit(Exception):
    """Internal control flow: a draw exceeded ctx.max_size atoms.

    Only raised when a ceiling is armed; rejection loops catch it and
    count the attempt as rejected (an aborted object is one that would
    have been rejected on size anyway, so the accepted law is intact).
    """


class SamplerContext:
    """Owns the random stream and per-run bookkeeping for one sampler.

    Contexts are single-threaded; any number of them may share one
    OracleTable.
    """

    def __init__(self, oracle: OracleTable, seed: int = 0,
                 rng: RandomStream | None = None,
                 depth_cap: int = DEPTH_CAP,
                 max_size: int | None = None):
        self.oracle = oracle
        self.flat = oracle.flat
        self.rng = rng if rng is not None else RandomStream(seed)
        self.depth_cap = depth_cap
        self.max_size = max_size
        self._calls = 0
        self._atoms = 0
        self._law_cache: dict[tuple[int, int], tuple] = {}

    def sample(self, target=None, diag_scale: int = 1):
        name = target if target is not None else self.flat.system.root
        return sample(self, name, diag_scale)


# -- distribution surface (delegates to the kernel backend) ---------------

def bern(ctx: SamplerContext, p: float) -> int:
    return ctx.rng.bern(p)


def geom(ctx: SamplerContext, lam: float) -> int:
    return ctx.rng.geom(lam)


def pois(ctx: SamplerContext, lam: float) -> int:
    return ctx.rng.pois(lam)


def pois_pos(ctx: SamplerContext, lam: float) -> int:
    return ctx.rng.pois_pos(lam)


# -- constructor samplers --------------------------------------------------

def sample(ctx: SamplerContext, target=None, diag_scale: int = 1):
    """Draw one profiled object of a class (by name or subexpression).

    Raises DepthExceededError past ctx.depth_cap constructor calls
    (untuned or critical parameters) and SizeCeilingHit when a ceiling
    is armed and exceeded.
    """
    idx = ctx.flat.node_for(target if target is not None
                            else ctx.flat.system.root)
    ctx._calls = 0
    ctx._atoms = 0
    return _sample_node(ctx, idx, diag_scale)


def _sample_node(ctx: SamplerContext, idx: int, k0: int):
    ctx._calls += 1
    if ctx._calls > ctx.depth_cap:
        raise DepthExceededError(
            f"draw exceeded {ctx.depth_cap} constructor calls; "
            f"parameters at or above the singularity?")
    flat = ctx.flat
    op = flat.ops[idx]
    if op == ATOM:
        ctx._atoms += k0
        if ctx.max_size is not None and ctx._atoms > ctx.max_size:
            raise SizeCeilingHit
        return AtomNode()
    if op == EPS:
        return TupleNode(())
    if op == UNION:
        a, b = flat.left[idx], flat.right[idx]
        va = ctx.oracle.value_node(a, k0)
        vb = ctx.oracle.value_node(b, k0)
        total = va + vb
        if total <= 0.0:
            # Below the oracle's resolution (tail scales); fall back to
            # the branch that terminates fastest.
            branch = a if flat.min_sizes[a] <= flat.min_sizes[b] else b
            return _sample_node(ctx, branch, k0)
        p = va / total
        assert 0.0 <= p <= 1.0
        return _sample_node(ctx, a if ctx.rng.bern(p) else b, k0)
    if op == PROD:
        left = _sample_node(ctx, flat.left[idx], k0)
        right = _sample_node(ctx, flat.right[idx], k0)
        return TupleNode((left, right))
    if op == SEQ:
        return sample_seq(ctx, flat.left[idx], k0)
    if op == MSET:
        return sample_mset(ctx, flat.left[idx], k0)
    if op == CYC:
        return sample_cyc(ctx, flat.left[idx], k0)
    raise AssertionError(f"bad op {op}")


def sample_seq(ctx: SamplerContext, inner: int, k0: int = 1) -> TupleNode:
    """Geometric number of independent inner draws."""
    lam = ctx.oracle.value_node(inner, k0)
    if lam >= 1.0:
        raise InvalidParameterError(
            f"Seq argument value {lam:.6g} >= 1 at scale {k0}")
    k = ctx.rng.geom(lam)
    return TupleNode([_sample_node(ctx, inner, k0) for _ in range(k)])


def _mset_law(ctx: SamplerContext, inner: int, k0: int):
    """(masses, cdf of the largest-index law), cached per (inner, k0)."""
    key = (inner, k0)
    law = ctx._law_cache.get(key)
    if law is None:
        k_max = ctx.oracle.k_max
        masses = [0.0]
        j = 1
        while j * k0 <= k_max:
            masses.append(ctx.oracle.value_node(inner, j * k0) / j)
            j += 1
        suffix = 0.0
        cdf = array("d", bytes(8 * len(masses)))
        for k in range(len(masses) - 1, -1, -1):
            cdf[k] = exp(-suffix)
            suffix += masses[k]
        cdf[len(masses) - 1] = 1.0
        assert all(0.0 <= c <= 1.0 for c in cdf)
        law = (masses, cdf)
        ctx._law_cache[key] = law
    return law


def sample_mset(ctx: SamplerContext, inner: int, k0: int = 1) -> MSetNode:
    """Largest diagonal index K, then Poisson counts per index."""
    masses, cdf = _mset_law(ctx, inner, k0)
    k = ctx.rng.index_cdf(cdf)
    if k == 0:
        return MSetNode(())
    children = []
    for j in range(1, k):
        for _ in range(ctx.rng.pois(masses[j])):
            child = _sample_node(ctx, inner, j * k0)
            children.append(child if j == 1 else DiagNode(j, child))
    for _ in range(ctx.rng.pois_pos(masses[k])):
        child = _sample_node(ctx, inner, k * k0)
        children.append(child if k == 1 else DiagNode(k, child))
    return MSetNode(children)


def _cyc_law(ctx: SamplerContext, inner: int, k0: int):
    """(indices, cdf of the totient-weighted repetition law)."""
    key = (inner, k0, "cyc")
    law = ctx._law_cache.get(key)
    if law is None:
        k_max = ctx.oracle.k_max
        weights = []
        k = 1
        while k * k0 <= k_max:
            f = ctx.oracle.value_node(inner, k * k0)
            if f >= 1.0:
                raise InvalidParameterError(
                    f"Cyc argument value {f:.6g} >= 1 at scale {k * k0}")
            weights.append(-totient(k) / k * log1p(-f))
            k += 1
        total = sum(weights)
        if total <= 0.0:
            law = (None, None)
        else:
            cdf = array("d", bytes(8 * len(weights)))
            acc = 0.0
            for i, w in enumerate(weights):
                acc += w
                cdf[i] = acc / total
            cdf[len(weights) - 1] = 1.0
            assert all(0.0 <= c <= 1.0 for c in cdf)
            law = (weights, cdf)
        ctx._law_cache[key] = law
    return law


def sample_cyc(ctx: SamplerContext, inner: int, k0: int = 1) -> CycNode:
    """Totient-weighted repetition index, logarithmic segment length."""
    weights, cdf = _cyc_law(ctx, inner, k0)
    if weights is None:
        # All masses below the oracle's resolution; smallest cycle.
        k, length = 1, 1
    else:
        k = 1 + ctx.rng.index_cdf(cdf)
        lam = ctx.oracle.value_node(inner, k * k0)
        length = ctx.rng.log_law(lam)
    children = [_sample_node(ctx, inner, k * k0) for _ in range(length)]
    if k == 1:
        return CycNode(children)
    return CycNode([DiagNode(k, TupleNode(children))])

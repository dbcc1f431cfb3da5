"""Coloring of profiled samples and the size-colored rejection sampler.

A profiled object drawn at s_i = t*x^i becomes a t-colored Boltzmann
sample by giving every partition part one uniform color: the part
structure already carries exactly the right multiplicities, and the
colors can wait until after all size rejection (coloring rejected
attempts would be wasted work).

For size-colored output (palette size = object size), the profiled
sampler is tuned at t = n and filtered: a drawn size n~ inside the
acceptance window passes a Bernoulli whose parameter retargets the
profile law from palette n to palette n~,

    n~ = n   accept,
    n~ < n   accept with (n~/n)^(parts - alpha(n~)),
    n~ > n   accept with (n~/n)^(parts - n~),

where alpha(w) is the minimum part count among profiles of weight w
with nonzero cycle-index coefficient (the maximum is always w, the
all-singleton profile).  Both exponents keep the parameter in (0, 1].
Accepted objects get an n~-coloration, so the palette size varies with
the drawn size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError, SampleTimeoutError
from .objects import (AtomNode, canonicalize, expand, profile,
                      profile_parts)
from .oracle import eval_f, min_parts_table
from .samplers import SamplerContext, SizeCeilingHit, sample

__all__ = ["ColoringParams", "RejectionStats", "color_profiled",
           "filter_sampler", "gamma_colored", "sample_kcolored_exact",
           "window_sizes", "expected_attempts_bound"]

DEFAULT_ATTEMPT_CAP = 10 ** 6


@dataclass
class ColoringParams:
    """CLI-facing bundle of coloring options."""

    t: int = 1
    mode: str = "k_colored"            # or "size_colored"
    n: int | None = None
    epsilon: float = 0.1
    window: str = "upper_only"         # or "two_sided"

    def check(self) -> None:
        if self.mode not in ("k_colored", "size_colored"):
            raise InvalidParameterError(f"unknown mode {self.mode!r}")
        if self.window not in ("upper_only", "two_sided"):
            raise InvalidParameterError(f"unknown window {self.window!r}")
        if self.mode == "k_colored":
            if self.t < 1:
                raise InvalidParameterError("need at least one color")
        else:
            if self.n is None or self.n < 1:
                raise InvalidParameterError(
                    "size_colored mode needs a target size n >= 1")
            if not 0.0 <= self.epsilon < 1.0:
                raise InvalidParameterError("epsilon must be in [0, 1)")


@dataclass
class RejectionStats:
    """Telemetry of one rejection pipeline.

    attempts = accepted + rejected_window + rejected_bernoulli holds at
    all times; the Bernoulli parameter range backs the invariant that
    every acceptance probability stays in (0, 1].
    """

    attempts: int = 0
    accepted: int = 0
    rejected_window: int = 0
    rejected_bernoulli: int = 0
    accepted_size_histogram: dict[int, int] = field(default_factory=dict)
    min_bernoulli: float = math.inf
    max_bernoulli: float = -math.inf

    def record_param(self, p: float) -> None:
        if p < self.min_bernoulli:
            self.min_bernoulli = p
        if p > self.max_bernoulli:
            self.max_bernoulli = p

    def record_accept(self, size: int) -> None:
        self.accepted += 1
        h = self.accepted_size_histogram
        h[size] = h.get(size, 0) + 1

    def mean_attempts(self) -> float:
        return self.attempts / self.accepted if self.accepted else math.inf

    def to_dict(self) -> dict:
        d = {
            "attempts": self.attempts,
            "accepted": self.accepted,
            "rejected_window": self.rejected_window,
            "rejected_bernoulli": self.rejected_bernoulli,
            "accepted_size_histogram": {
                str(k): v
                for k, v in sorted(self.accepted_size_histogram.items())},
        }
        if self.accepted:
            d["mean_attempts"] = self.mean_attempts()
        if self.max_bernoulli >= self.min_bernoulli:
            d["min_bernoulli"] = self.min_bernoulli
            d["max_bernoulli"] = self.max_bernoulli
        return d


# ---------------------------------------------------------------------------
# Consistent coloration
# ---------------------------------------------------------------------------

def color_profiled(obj, t: int, rng) -> object:
    """Expand and color: one uniform color in {1..t} per partition part.

    Every atom of a part shares its color, so the coloration is
    consistent with the profile; the result is canonical.
    """
    if t < 1:
        raise InvalidParameterError("need at least one color")
    tree, parts = expand(obj)
    colors = [0] * tree.size
    for part in parts:
        c = 1 + int(rng.uniform() * t)
        for a in part:
            colors[a] = c

    pos = 0

    def rebuild(node):
        nonlocal pos
        if isinstance(node, AtomNode):
            atom = AtomNode(colors[pos])
            pos += 1
            return atom
        kind = type(node)
        return kind([rebuild(c) for c in node.children])

    return canonicalize(rebuild(tree))


# ---------------------------------------------------------------------------
# Generic Bernoulli filter
# ---------------------------------------------------------------------------

def filter_sampler(base, p, p_prime, outcomes=None, max_ratio=None,
                   max_attempts: int = 10 ** 7):
    """Retarget a sampler from law p to law p_prime by rejection.

    `base(rng)` draws an outcome, `p`/`p_prime` map outcomes to their
    probabilities.  The acceptance parameter for outcome o is
    (p_prime(o)/p(o)) / R with R the maximal ratio; pass the finite
    outcome set (first element attaining the maximum) or R directly.
    A computed parameter outside [0, 1] means the maximality
    precondition is violated and raises InvalidParameterError.
    """
    if outcomes is not None:
        outcomes = list(outcomes)
        if not outcomes:
            raise InvalidParameterError("empty outcome set")
        ratios = []
        for o in outcomes:
            po = p(o)
            if po <= 0.0:
                raise InvalidParameterError(
                    f"outcome {o!r} has base probability {po!r}")
            ratios.append(p_prime(o) / po)
        ratio_max = ratios[0]
        if any(r > ratio_max * (1.0 + 1e-12) for r in ratios):
            raise InvalidParameterError(
                "ratio sequence is not maximal at the first outcome "
                "(it must be nonincreasing)")
    elif max_ratio is not None:
        ratio_max = max_ratio
    else:
        raise InvalidParameterError("need either outcomes or max_ratio")
    if ratio_max <= 0.0:
        raise InvalidParameterError(f"maximal ratio {ratio_max!r}")

    def sampler(rng):
        for _ in range(max_attempts):
            o = base(rng)
            po = p(o)
            if po <= 0.0:
                raise InvalidParameterError(
                    f"outcome {o!r} has base probability {po!r}")
            param = p_prime(o) / po / ratio_max
            if not -1e-12 <= param <= 1.0 + 1e-9:
                raise InvalidParameterError(
                    f"acceptance parameter {param!r} outside [0, 1]; "
                    f"ratio precondition violated")
            if rng.bern(min(max(param, 0.0), 1.0)):
                return o
        raise SampleTimeoutError(
            f"filter made no acceptance in {max_attempts} attempts")

    return sampler


# ---------------------------------------------------------------------------
# Size-colored approximate-size sampler
# ---------------------------------------------------------------------------

def window_sizes(n: int, epsilon: float, window: str) -> tuple[int, int]:
    """Integer size window: [n, (1+eps)n] or [(1-eps)n, (1+eps)n]."""
    hi = math.floor((1.0 + epsilon) * n + 1e-9)
    if window == "upper_only":
        return n, hi
    if window == "two_sided":
        return max(1, math.ceil((1.0 - epsilon) * n - 1e-9)), hi
    raise InvalidParameterError(f"unknown window {window!r}")


def gamma_colored(ctx: SamplerContext, n: int, epsilon: float,
                  window: str = "upper_only", class_name: str | None = None,
                  stats: RejectionStats | None = None,
                  max_attempts: int = DEFAULT_ATTEMPT_CAP):
    """Approximate-size sampler for size-colored objects.

    Requires ctx built at t = n and x from tune(class, n, n).  Returns
    an n~-coloration of an accepted object of size n~ in the window;
    conditioned on its size, the output follows the exact Boltzmann law
    over n~-colored objects.
    """
    if ctx.oracle.t != n:
        raise InvalidParameterError(
            f"oracle was built with t={ctx.oracle.t!r}, need t={n}")
    lo, hi = window_sizes(n, epsilon, window)
    target = class_name if class_name is not None \
        else ctx.flat.system.root
    node = ctx.flat.node_for(target)
    alphas = min_parts_table(ctx.flat, hi) if lo < n else None
    if stats is None:
        stats = RejectionStats()

    old_ceiling = ctx.max_size
    if old_ceiling is None:
        ctx.max_size = hi
    try:
        for _ in range(max_attempts):
            stats.attempts += 1
            try:
                obj = sample(ctx, target)
            except SizeCeilingHit:
                stats.rejected_window += 1
                continue
            n_drawn = obj.size
            if not lo <= n_drawn <= hi:
                stats.rejected_window += 1
                continue
            if n_drawn != n:
                parts = profile_parts(profile(obj))
                if n_drawn < n:
                    exponent = parts - alphas.alpha_node(node, n_drawn)
                else:
                    exponent = parts - n_drawn
                param = (n_drawn / n) ** exponent
                assert 0.0 < param <= 1.0
                stats.record_param(param)
                if not ctx.rng.bern(param):
                    stats.rejected_bernoulli += 1
                    continue
            stats.record_accept(n_drawn)
            return color_profiled(obj, n_drawn, ctx.rng)
    finally:
        ctx.max_size = old_ceiling
    raise SampleTimeoutError(
        f"no acceptance in {max_attempts} attempts (window "
        f"[{lo}, {hi}])")


def sample_kcolored_exact(ctx: SamplerContext, class_name: str | None,
                          n: int, stats: RejectionStats | None = None,
                          ceiling: bool = True,
                          max_attempts: int = DEFAULT_ATTEMPT_CAP):
    """Uniform sample over the t-colored objects of size exactly n.

    t comes from the context's oracle; plain size rejection around the
    t-colored sampler, with an optional early abort above n.
    """
    t = ctx.oracle.t
    if t != int(t) or t < 1:
        raise InvalidParameterError(
            f"exact k-colored sampling needs integer t, got {t!r}")
    target = class_name if class_name is not None \
        else ctx.flat.system.root
    node = ctx.flat.node_for(target)
    if n < ctx.flat.min_sizes[node]:
        raise SampleTimeoutError(
            f"the class has no object of size {n} "
            f"(minimum is {ctx.flat.min_sizes[node]:g})")
    if stats is None:
        stats = RejectionStats()

    old_ceiling = ctx.max_size
    if ceiling and old_ceiling is None:
        ctx.max_size = n
    try:
        for _ in range(max_attempts):
            stats.attempts += 1
            try:
                obj = sample(ctx, target)
            except SizeCeilingHit:
                stats.rejected_window += 1
                continue
            if obj.size != n:
                stats.rejected_window += 1
                continue
            stats.record_accept(n)
            return color_profiled(obj, int(t), ctx.rng)
    finally:
        ctx.max_size = old_ceiling
    raise SampleTimeoutError(
        f"no object of size {n} in {max_attempts} attempts")


def expected_attempts_bound(system, class_name: str, x0: float, n: int,
                            epsilon: float, window: str = "upper_only",
                            tau: float = 1e-12) -> float:
    """Loop-count scale of the rejection phase, from the cost theorem.

    (1+eps)^((1+eps)n) * f(x,n)/f(x,(1+eps)n) for the upper window,
    plus (1-eps) * f(x,n)/f(x,(1-eps)n) when the window is two-sided.
    An order-of-magnitude yardstick, not a sharp bound.
    """
    f_n = eval_f(system, class_name, x0, float(n), tau=tau)
    up = (1.0 + epsilon) ** ((1.0 + epsilon) * n) * f_n / \
        eval_f(system, class_name, x0, (1.0 + epsilon) * n, tau=tau)
    if window == "upper_only":
        return up
    low = (1.0 - epsilon) * f_n / \
        eval_f(system, class_name, x0, (1.0 - epsilon) * n, tau=tau)
    return up + low

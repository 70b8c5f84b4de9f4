"""Polyblock outer approximation for the per-pair extraction-ratio problem.

With the class split fixed, the pair objective is a fraction
gamma(xi) = rate * (S_I * eps(xi) + B_I) / (a * xi + b) with a nondecreasing
numerator, subject to a delay budget on xi and the accuracy bound
xi >= xi_th. An auxiliary variable eta absorbs the decreasing denominator,
turning the problem into maximizing a componentwise-increasing function of
v = (xi, eta) over a normal (downward-closed) feasible set, which the
polyblock vertex-refinement loop solves to a relative tolerance o1.

Soundness note: the delay constraint is not downward-closed in xi (compute
time grows as xi shrinks), so the box is first restricted to the
delay-feasible xi interval, which convexity of the time budget makes an
interval. Inside that box the only remaining constraint is the eta cap,
which is downward-closed, so projections behave as the algorithm assumes.

The objective handed to the polyblock loop is kept in the original rate
domain (the exponential of the usual log form); it is monotone either way,
and the multiplicative stopping rule UB <= (1+o1)*LB then bounds the
relative gap of gamma itself.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import (AccuracyUnreachable, BadAnchor, DegenerateConstant, Infeasible,
                     InfeasibleBudget, IterationLimit)
from .ratetime import sum_attr

try:
    from ._kernels import polyblock_reduced_kernel as _reduced_kernel
except ImportError:  # pragma: no cover - numba is optional at runtime
    _reduced_kernel = None

_ROOT_TOL = 1e-9     # bisection tolerance for the delay-interval endpoints
_POINT_TOL = 1e-12   # below this width the xi interval is a single point


@dataclass(frozen=True)
class ReducedProblem:
    """Coefficients of the one-variable pair problem for a fixed class split."""
    a: float               # semantic-route task bits, sum over k_cu
    b: float               # bit-route task bits, sum over k_bit
    info_semantic: float   # suts over k_cu
    info_bit: float        # suts over k_bit
    cycles_semantic: float
    cycles_bit: float
    d_upload: float        # knowledge bits over k_up
    rate: float
    cpu_speed: float
    rho: float
    t_budget: float        # t_max minus the fixed (xi-independent) times
    xi_th: float
    accuracy: object       # AccuracyModel

    def gamma(self, xi):
        """Objective value at xi (scalar or array)."""
        eps = self.accuracy.accuracy(xi)
        return self.rate * (self.info_semantic * eps + self.info_bit) / (self.a * xi + self.b)


def transform_reduced(ctx, partition):
    """Collapse a pair context and class split into a ReducedProblem.

    Raises DegenerateConstant (carrying the constant objective value) when no
    class goes the semantic route, and InfeasibleBudget when the fixed time
    components alone exceed the delay tolerance.
    """
    p = ctx.profiles
    a = sum_attr(p, partition.k_cu, "d_task")
    b = sum_attr(p, partition.k_bit, "d_task")
    info_semantic = sum_attr(p, partition.k_cu, "info")
    info_bit = sum_attr(p, partition.k_bit, "info")
    d_upload = sum_attr(p, partition.k_up, "d_knowledge")
    if not partition.k_cu:
        raise DegenerateConstant(ctx.rate * info_bit / b)
    if ctx.xi_th is None:
        raise AccuracyUnreachable(
            f"accuracy requirement {ctx.eps_min} unreachable for this model")
    t_fixed = (d_upload + b) / ctx.rate + sum_attr(p, partition.k_bit, "cycles") / ctx.cpu_speed
    t_budget = ctx.t_max - t_fixed
    if t_budget < 0:
        raise InfeasibleBudget(
            f"fixed times {t_fixed:.6g}s exceed tolerance {ctx.t_max:.6g}s")
    return ReducedProblem(
        a=a, b=b, info_semantic=info_semantic, info_bit=info_bit,
        cycles_semantic=sum_attr(p, partition.k_cu, "cycles"),
        cycles_bit=sum_attr(p, partition.k_bit, "cycles"),
        d_upload=d_upload, rate=ctx.rate, cpu_speed=ctx.cpu_speed, rho=ctx.rho,
        t_budget=t_budget, xi_th=ctx.xi_th, accuracy=ctx.accuracy)


def _bisect_root(g, lo, hi, target, increasing):
    # g is monotone on [lo, hi] and crosses target exactly once; returns the
    # endpoint of the final bracket on the feasible (g <= target) side.
    for _ in range(200):
        if hi - lo <= _ROOT_TOL:
            break
        mid = 0.5 * (lo + hi)
        ok = g(mid) <= target
        if increasing:
            if ok:
                lo = mid
            else:
                hi = mid
        else:
            if ok:
                hi = mid
            else:
                lo = mid
    return lo if increasing else hi


def feasible_xi_interval(rp):
    """Delay-feasible extraction ratios: {xi in [xi_th, 1] : g(xi) <= budget}.

    g(xi) = a*xi/rate + C_S*xi^(-rho)/cpu is convex on (0, 1], so the sublevel
    set is an interval; its endpoints are found by bisection from the
    minimizer. Returns (lo, hi) with g feasible at both ends, or None.
    """
    if rp.t_budget < 0:
        return None
    lo_box, hi_box = rp.xi_th, 1.0
    if lo_box > hi_box:
        return None
    a_over_rate = rp.a / rp.rate
    c_over_cpu = rp.cycles_semantic / rp.cpu_speed

    def g(xi):
        if xi <= 0.0:
            return math.inf
        return a_over_rate * xi + c_over_cpu * xi ** (-rp.rho)

    if c_over_cpu == 0.0 and a_over_rate == 0.0:
        return (lo_box, hi_box)
    if c_over_cpu == 0.0:
        hi = min(hi_box, rp.t_budget / a_over_rate)
        return (lo_box, hi) if hi >= lo_box else None
    if a_over_rate == 0.0:
        if rp.t_budget == 0.0:
            return None
        lo = max(lo_box, (c_over_cpu / rp.t_budget) ** (1.0 / rp.rho))
        return (lo, hi_box) if lo <= hi_box else None

    xi0 = (rp.rho * c_over_cpu / a_over_rate) ** (1.0 / (1.0 + rp.rho))
    xi0 = min(max(xi0, lo_box), hi_box)
    if g(xi0) > rp.t_budget:
        return None
    lo = lo_box if g(lo_box) <= rp.t_budget else _bisect_root(
        g, lo_box, xi0, rp.t_budget, increasing=False)
    hi = hi_box if g(hi_box) <= rp.t_budget else _bisect_root(
        g, xi0, hi_box, rp.t_budget, increasing=True)
    return (lo, hi)


def grid_oracle(rp, step):
    """Exhaustive scan of gamma over the delay-feasible interval.

    Independent check for the polyblock path: no transformation, no
    projections, just the fractional objective on a uniform grid (both
    endpoints included). Ties go to the smallest xi.
    """
    interval = feasible_xi_interval(rp)
    if interval is None:
        raise Infeasible("empty delay-feasible interval")
    lo, hi = interval
    if hi - lo <= step:
        xs = np.array([lo, hi])
    else:
        xs = np.append(np.arange(lo, hi, step), hi)
    gammas = rp.gamma(xs)
    i = int(np.argmax(gammas))
    return float(xs[i]), float(gammas[i])


@dataclass(frozen=True)
class PolyblockState:
    """One iteration snapshot, for bound-nesting assertions."""
    iteration: int
    ub: float
    lb: float
    n_vertices: int


@dataclass(frozen=True)
class PolyblockResult:
    v: tuple
    value: float
    iterations: int
    ub: float
    lb: float


def project_to_boundary(v, v_min, feasible, o2):
    """Farthest feasible point from v_min toward v, by bisection on delta.

    Requires feasible(v_min); along the ray feasibility must flip at most
    once (true for downward-closed sets). Returns (point, delta) with the
    point guaranteed feasible and delta within o2 of the true boundary.
    """
    v = tuple(map(float, v))
    v_min = tuple(map(float, v_min))
    if not feasible(v_min):
        raise BadAnchor("projection anchor v_min is not feasible")
    if feasible(v):
        return v, 1.0
    d_lo, d_hi = 0.0, 1.0
    diff = [a - b for a, b in zip(v, v_min)]
    while d_hi - d_lo > o2:
        mid = 0.5 * (d_lo + d_hi)
        point = tuple(m + mid * d for m, d in zip(v_min, diff))
        if feasible(point):
            d_lo = mid
        else:
            d_hi = mid
    phi = tuple(m + d_lo * d for m, d in zip(v_min, diff))
    return phi, d_lo


def polyblock_maximize(gamma_fn, feasible, v_min, v_max, o1=1e-3, o2=1e-6,
                       max_iter=10000, trace=None):
    """Maximize a componentwise-nondecreasing gamma_fn over a normal set.

    The feasible set must be a downward-closed subset of [v_min, v_max]
    containing v_min, and gamma_fn must be nonnegative on the box (the
    stopping rule UB <= (1+o1)*LB is multiplicative). Each round removes the
    best vertex, projects it onto the feasible boundary along the ray from
    v_min, and replaces it with one child per coordinate; the best projection
    found so far is the incumbent lower bound. Ties in the vertex argmax go
    to the oldest vertex. Vertices that cannot beat the incumbent are never
    expanded, and dominated vertices are swept out whenever the set grows
    past a threshold, which bounds memory.

    Returns the incumbent feasible point, whose value is within a factor
    (1+o1) of the optimum. Raises Infeasible when v_min itself fails the
    oracle and IterationLimit (carrying the incumbent) past max_iter.
    """
    v_min = tuple(map(float, v_min))
    v_max = tuple(map(float, v_max))
    n_dim = len(v_min)
    if not feasible(v_min):
        raise Infeasible("anchor v_min violates the feasibility oracle")

    # Max-heap of (-value, insertion counter, vertex); the counter makes
    # equal-value pops deterministic (oldest first) and never compares
    # vertices themselves.
    heap = [(-gamma_fn(v_max), 0, v_max)]
    counter = 1
    best_v = v_min
    best_val = gamma_fn(v_min)
    iterations = 0
    threshold = 1.0 + o1
    point = [0.0] * n_dim
    sweep_at = 4096

    while heap:
        neg_val, _, v_star = heap[0]
        ub = -neg_val
        if trace is not None:
            trace.append(PolyblockState(iteration=iterations, ub=max(ub, best_val),
                                        lb=best_val, n_vertices=len(heap)))
        if ub <= threshold * best_val:
            break
        if iterations >= max_iter:
            raise IterationLimit(PolyblockResult(
                v=best_v, value=best_val, iterations=iterations,
                ub=max(ub, best_val), lb=best_val))
        iterations += 1
        heapq.heappop(heap)

        # Projection onto the boundary (bisection along the anchor ray),
        # inlined to avoid per-step allocations.
        if feasible(v_star):
            if ub > best_val:
                best_val, best_v = ub, v_star
            continue  # feasible vertex: nothing above it survives anyway
        diff = [v_star[i] - v_min[i] for i in range(n_dim)]
        d_lo, d_hi = 0.0, 1.0
        while d_hi - d_lo > o2:
            mid = 0.5 * (d_lo + d_hi)
            for i in range(n_dim):
                point[i] = v_min[i] + mid * diff[i]
            if feasible(point):
                d_lo = mid
            else:
                d_hi = mid
        phi = tuple(v_min[i] + d_lo * diff[i] for i in range(n_dim))
        phi_val = gamma_fn(phi)
        if phi_val > best_val:
            best_val, best_v = phi_val, phi

        for axis in range(n_dim):
            if phi[axis] >= v_star[axis]:
                continue  # degenerate child identical to v_star
            child = v_star[:axis] + (phi[axis],) + v_star[axis + 1:]
            child_val = gamma_fn(child)
            if child_val <= best_val:
                continue  # its box cannot contain a better point
            heapq.heappush(heap, (-child_val, counter, child))
            counter += 1

        if len(heap) > sweep_at:
            heap = _sweep(heap, best_val)
            sweep_at = max(4096, 2 * len(heap))

    final_ub = -heap[0][0] if heap else best_val
    return PolyblockResult(v=best_v, value=best_val, iterations=iterations,
                           ub=max(final_ub, best_val), lb=best_val)


def _sweep(heap, best_val):
    # Drop vertices that cannot beat the incumbent or are dominated by
    # another survivor, then rebuild the heap.
    entries = [e for e in heap if -e[0] > best_val]
    entries.sort()  # best value first; a dominated vertex has a lower value
    kept = []
    for e in entries:
        v = e[2]
        if any(all(a <= b for a, b in zip(v, k[2])) for k in kept):
            continue
        kept.append(e)
    heapq.heapify(kept)
    return kept


def maximize_reduced(rp, o1=1e-3, o2=1e-6, max_iter=10000):
    """Solve one ReducedProblem: box restriction, then polyblock refinement.

    Returns (xi_star, gamma_star, iterations) with gamma_star recomputed
    exactly at xi_star (within (1+o1) of the optimum). Raises Infeasible
    when the delay-feasible interval is empty. Uses the jitted kernel when
    numba is importable; otherwise the generic loop below does the same work.
    """
    interval = feasible_xi_interval(rp)
    if interval is None:
        raise Infeasible("empty delay-feasible interval")
    lo, hi = interval
    if hi - lo <= _POINT_TOL:
        return lo, float(rp.gamma(lo)), 0
    a, b = rp.a, rp.b
    log_cap = math.log(a * hi + b)
    eta_max = log_cap - math.log(a * lo + b)
    if eta_max <= 0.0:
        return lo, float(rp.gamma(lo)), 0

    if _reduced_kernel is not None:
        status, best_x, best_y, best_val, iterations, ub = _reduced_kernel(
            lo, hi, a, b, rp.rate / (a * hi + b), rp.info_semantic, rp.info_bit,
            eta_max, log_cap, rp.accuracy._env, o1, o2, max_iter)
        if status == 1:
            raise IterationLimit(PolyblockResult(
                v=(best_x, best_y), value=best_val, iterations=iterations,
                ub=ub, lb=best_val))
        xi_star = min(max(best_x, lo), hi)
        return xi_star, float(rp.gamma(xi_star)), iterations

    # Hot path: bind the envelope table and all coefficients into locals so
    # the closures stay allocation-free (these run tens of thousands of times
    # per network solve).
    env = rp.accuracy._env_list
    n_env = rp.accuracy._n
    scale = rp.rate / (a * hi + b)
    s_info, b_info = rp.info_semantic, rp.info_bit
    exp, log = math.exp, math.log

    def gamma_fn(v):
        pos = v[0] * n_env
        i = int(pos)
        if i >= n_env:
            eps = env[n_env]
        else:
            e0 = env[i]
            eps = e0 + (env[i + 1] - e0) * (pos - i)
        return scale * (s_info * eps + b_info) * exp(v[1])

    def feasible(v):
        return v[1] + log(a * v[0] + b) <= log_cap

    res = polyblock_maximize(gamma_fn, feasible, (lo, 0.0), (hi, eta_max),
                             o1=o1, o2=o2, max_iter=max_iter)
    xi_star = min(max(res.v[0], lo), hi)
    return xi_star, float(rp.gamma(xi_star)), res.iterations

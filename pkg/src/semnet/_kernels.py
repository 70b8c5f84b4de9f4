"""Jitted inner loop for the two-variable reduced-problem polyblock solve.

Mirrors the generic loop in monoopt.polyblock_maximize exactly (same vertex
refinement, same projection bisection, same tie rule of oldest-vertex-first)
but specialized to v = (xi, eta), the tabulated accuracy envelope, and the
eta-cap feasibility test, so one iteration costs nanoseconds instead of
microseconds. The heap is preallocated: each iteration pops one vertex and
pushes at most two, so 2*max_iter + 2 slots always suffice.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def polyblock_reduced_kernel(lo, hi, a, b, scale, s_info, b_info, eta_max,
                             log_cap, env, o1, o2, max_iter):
    """Returns (status, best_x, best_y, best_val, iterations, ub).

    status 0: converged (ub <= (1+o1)*best_val); status 1: iteration limit.
    """
    n_env = env.shape[0] - 1

    cap = 2 * max_iter + 2
    hx = np.empty(cap, np.float64)
    hy = np.empty(cap, np.float64)
    hv = np.empty(cap, np.float64)
    hc = np.empty(cap, np.int64)
    size = 0
    counter = 0

    # Incumbent starts at v_min = (lo, 0), which is always feasible.
    pos = lo * n_env
    i0 = int(pos)
    if i0 >= n_env:
        eps = env[n_env]
    else:
        eps = env[i0] + (env[i0 + 1] - env[i0]) * (pos - i0)
    best_val = scale * (s_info * eps + b_info)
    best_x = lo
    best_y = 0.0

    # Push v_max = (hi, eta_max).
    pos = hi * n_env
    i0 = int(pos)
    if i0 >= n_env:
        eps = env[n_env]
    else:
        eps = env[i0] + (env[i0 + 1] - env[i0]) * (pos - i0)
    hx[0] = hi
    hy[0] = eta_max
    hv[0] = scale * (s_info * eps + b_info) * math.exp(eta_max)
    hc[0] = counter
    counter += 1
    size = 1

    iterations = 0
    status = 0
    threshold = 1.0 + o1

    while size > 0:
        ub = hv[0]
        if ub <= threshold * best_val:
            break
        if iterations >= max_iter:
            status = 1
            break
        iterations += 1

        vx = hx[0]
        vy = hy[0]
        # Pop the root, sift the last entry down.
        size -= 1
        hx[0] = hx[size]
        hy[0] = hy[size]
        hv[0] = hv[size]
        hc[0] = hc[size]
        i = 0
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            right = left + 1
            j = left
            if right < size and (hv[right] > hv[left] or
                                 (hv[right] == hv[left] and hc[right] < hc[left])):
                j = right
            if hv[j] > hv[i] or (hv[j] == hv[i] and hc[j] < hc[i]):
                tx, ty, tv, tc = hx[i], hy[i], hv[i], hc[i]
                hx[i], hy[i], hv[i], hc[i] = hx[j], hy[j], hv[j], hc[j]
                hx[j], hy[j], hv[j], hc[j] = tx, ty, tv, tc
                i = j
            else:
                break

        if vy + math.log(a * vx + b) <= log_cap:
            # Feasible vertex: it is the best point of its own box.
            if ub > best_val:
                best_val = ub
                best_x = vx
                best_y = vy
            continue

        # Projection: bisection along the ray from v_min = (lo, 0).
        dx = vx - lo
        dy = vy
        d_lo = 0.0
        d_hi = 1.0
        while d_hi - d_lo > o2:
            mid = 0.5 * (d_lo + d_hi)
            if mid * dy + math.log(a * (lo + mid * dx) + b) <= log_cap:
                d_lo = mid
            else:
                d_hi = mid
        phi_x = lo + d_lo * dx
        phi_y = d_lo * dy

        pos = phi_x * n_env
        i0 = int(pos)
        if i0 >= n_env:
            eps_phi = env[n_env]
        else:
            eps_phi = env[i0] + (env[i0 + 1] - env[i0]) * (pos - i0)
        phi_val = scale * (s_info * eps_phi + b_info) * math.exp(phi_y)
        if phi_val > best_val:
            best_val = phi_val
            best_x = phi_x
            best_y = phi_y

        # Child 1: xi lowered to the projection (same envelope value as phi).
        if phi_x < vx:
            val = scale * (s_info * eps_phi + b_info) * math.exp(vy)
            if val > best_val:
                i = size
                hx[i] = phi_x
                hy[i] = vy
                hv[i] = val
                hc[i] = counter
                counter += 1
                size += 1
                while i > 0:
                    p = (i - 1) >> 1
                    if hv[i] > hv[p] or (hv[i] == hv[p] and hc[i] < hc[p]):
                        tx, ty, tv, tc = hx[i], hy[i], hv[i], hc[i]
                        hx[i], hy[i], hv[i], hc[i] = hx[p], hy[p], hv[p], hc[p]
                        hx[p], hy[p], hv[p], hc[p] = tx, ty, tv, tc
                        i = p
                    else:
                        break

        # Child 2: eta lowered to the projection.
        if phi_y < vy:
            pos = vx * n_env
            i0 = int(pos)
            if i0 >= n_env:
                eps = env[n_env]
            else:
                eps = env[i0] + (env[i0 + 1] - env[i0]) * (pos - i0)
            val = scale * (s_info * eps + b_info) * math.exp(phi_y)
            if val > best_val:
                i = size
                hx[i] = vx
                hy[i] = phi_y
                hv[i] = val
                hc[i] = counter
                counter += 1
                size += 1
                while i > 0:
                    p = (i - 1) >> 1
                    if hv[i] > hv[p] or (hv[i] == hv[p] and hc[i] < hc[p]):
                        tx, ty, tv, tc = hx[i], hy[i], hv[i], hc[i]
                        hx[i], hy[i], hv[i], hc[i] = hx[p], hy[p], hv[p], hc[p]
                        hx[p], hy[p], hv[p], hc[p] = tx, ty, tv, tc
                        i = p
                    else:
                        break

    ub = hv[0] if size > 0 else best_val
    if ub < best_val:
        ub = best_val
    return status, best_x, best_y, best_val, iterations, ub

"""Pure-Python layout kernels: penalized objective and simplex minimizer.

This module and the compiled twin in _fast.pyx implement the same
arithmetic in the same order, so either backend produces bit-identical
results for identical inputs. Keep every expression in sync between the
two when editing.

Node layout: 0, 1, 2 are the terminals; 3, 4, 5 are anchors as the kind
requires. Kinds:
  1  three anchors, one per terminal, pairwise connected (6 variables)
  2  two anchors sharing the pinned terminal `aux`, each serving one of
     the remaining terminals (4 variables)
  3  one anchor serving all three terminals, with the side opposite the
     free terminal `aux` kept as an edge (2 variables)
"""

import math

INF = math.inf

# Disconnection penalty factor; mirrors the network module's default.
PENALTY_FACTOR = 1e9


def _fill_layout(kind, aux, tri, x, xs, ys):
    """Populate node coordinates and return (n_nodes, edges)."""
    xs[0] = tri[0]
    ys[0] = tri[1]
    xs[1] = tri[2]
    ys[1] = tri[3]
    xs[2] = tri[4]
    ys[2] = tri[5]
    if kind == 1:
        xs[3] = x[0]
        ys[3] = x[1]
        xs[4] = x[2]
        ys[4] = x[3]
        xs[5] = x[4]
        ys[5] = x[5]
        return 6, ((0, 3), (1, 4), (2, 5), (3, 4), (4, 5), (3, 5))
    if kind == 2:
        xs[3] = x[0]
        ys[3] = x[1]
        xs[4] = x[2]
        ys[4] = x[3]
        if aux == 0:
            q1, q2 = 1, 2
        elif aux == 1:
            q1, q2 = 0, 2
        else:
            q1, q2 = 0, 1
        return 5, ((aux, 3), (aux, 4), (3, 4), (q1, 3), (q2, 4))
    xs[3] = x[0]
    ys[3] = x[1]
    if aux == 0:
        b1, b2 = 1, 2
    elif aux == 1:
        b1, b2 = 0, 2
    else:
        b1, b2 = 0, 1
    return 4, ((b1, b2), (b1, 3), (b2, 3), (aux, 3))


def _edge_len(xs, ys, u, v):
    dx = xs[v] - xs[u]
    dy = ys[v] - ys[u]
    return math.sqrt(dx * dx + dy * dy)


def _shortest(w, n, src, d):
    """Single-source shortest paths over the dense 6x6 weight matrix."""
    for i in range(6):
        d[i] = INF
    d[src] = 0.0
    done = [False] * 6
    for _ in range(n):
        u = -1
        best = INF
        for i in range(n):
            if not done[i] and d[i] < best:
                best = d[i]
                u = i
        if u < 0:
            break
        done[u] = True
        base = d[u]
        row = w[u]
        for v in range(n):
            wv = row[v]
            if wv < INF:
                nd = base + wv
                if nd < d[v]:
                    d[v] = nd


def layout_objective(kind, aux, tri, budget, mu, x):
    """Penalized connection cost of one anchor layout.

    tri is (ax, ay, bx, by, cx, cy); x holds the anchor coordinates the
    kind requires. Returns (f, j, total) where j is the sum of the three
    terminal-pair shortest-path distances (disconnected pairs cost
    PENALTY_FACTOR times the perimeter each), total is the summed edge
    length, and f = j + mu * max(0, total - budget)^2.
    """
    xs = [0.0] * 6
    ys = [0.0] * 6
    n, edges = _fill_layout(kind, aux, tri, x, xs, ys)

    w = [[INF] * 6 for _ in range(6)]
    total = 0.0
    for u, v in edges:
        l = _edge_len(xs, ys, u, v)
        total += l
        if l < w[u][v]:
            w[u][v] = l
            w[v][u] = l

    d = [0.0] * 6
    _shortest(w, n, 0, d)
    d_ab = d[1]
    d_ac = d[2]
    _shortest(w, n, 1, d)
    d_bc = d[2]

    pen = PENALTY_FACTOR * (
        _edge_len(xs, ys, 0, 1) + _edge_len(xs, ys, 1, 2) + _edge_len(xs, ys, 0, 2)
    )
    if d_ab == INF:
        d_ab = pen
    if d_bc == INF:
        d_bc = pen
    if d_ac == INF:
        d_ac = pen
    j = d_ab + d_bc + d_ac

    viol = total - budget
    if viol > 0.0:
        f = j + mu * viol * viol
    else:
        f = j
    return f, j, total


def minimize_layout(kind, aux, tri, budget, mu, x0, step, xatol, fatol, maxiter):
    """Nelder-Mead on layout_objective; returns (x_best, f_best, n_eval).

    Deterministic: ordering is a stable sort and the standard reflect /
    expand / contract / shrink moves use fixed coefficients 1, 2, 0.5, 0.5.
    Terminates when both the objective spread and the coordinate spread of
    the simplex fall under fatol / xatol (scaled by the incumbent), or
    after maxiter iterations.

    The first two simplex directions translate every anchor together in x
    and then in y; the rest step single coordinates. Near an anchor merge,
    moving one coordinate grows two inter-anchor edges while shrinking at
    most one stub, so every single-coordinate direction points uphill and
    an axis-seeded simplex stalls; the translation directions keep the
    coordinated descent visible. With one anchor this reduces to the plain
    axis seeding.
    """
    dim = len(x0)
    npts = dim + 1
    pts = [list(x0)]
    for axis in range(2):
        p = list(x0)
        for k in range(axis, dim, 2):
            p[k] = p[k] + step
        pts.append(p)
    for i in range(dim - 2):
        p = list(x0)
        p[i] = p[i] + step
        pts.append(p)
    fs = [layout_objective(kind, aux, tri, budget, mu, p)[0] for p in pts]
    n_eval = npts

    cen = [0.0] * dim
    for _ in range(maxiter):
        # stable insertion sort by objective
        for i in range(1, npts):
            pi = pts[i]
            fi = fs[i]
            k = i - 1
            while k >= 0 and fs[k] > fi:
                pts[k + 1] = pts[k]
                fs[k + 1] = fs[k]
                k -= 1
            pts[k + 1] = pi
            fs[k + 1] = fi

        f_best = fs[0]
        f_worst = fs[npts - 1]
        spread_x = 0.0
        scale_x = 1.0
        best = pts[0]
        for dd in range(dim):
            bd = best[dd]
            ab = abs(bd)
            if ab > scale_x:
                scale_x = ab
            for i in range(1, npts):
                diff = abs(pts[i][dd] - bd)
                if diff > spread_x:
                    spread_x = diff
        if (
            f_worst - f_best <= fatol * (1.0 + abs(f_best))
            and spread_x <= xatol * scale_x
        ):
            break

        worst = pts[npts - 1]
        for dd in range(dim):
            s = 0.0
            for i in range(npts - 1):
                s += pts[i][dd]
            cen[dd] = s / (npts - 1)

        xr = [cen[dd] + (cen[dd] - worst[dd]) for dd in range(dim)]
        fr = layout_objective(kind, aux, tri, budget, mu, xr)[0]
        n_eval += 1

        if fr < fs[0]:
            xe = [cen[dd] + 2.0 * (cen[dd] - worst[dd]) for dd in range(dim)]
            fe = layout_objective(kind, aux, tri, budget, mu, xe)[0]
            n_eval += 1
            if fe < fr:
                pts[npts - 1] = xe
                fs[npts - 1] = fe
            else:
                pts[npts - 1] = xr
                fs[npts - 1] = fr
            continue
        if fr < fs[npts - 2]:
            pts[npts - 1] = xr
            fs[npts - 1] = fr
            continue
        if fr < fs[npts - 1]:
            xc = [cen[dd] + 0.5 * (xr[dd] - cen[dd]) for dd in range(dim)]
            fc = layout_objective(kind, aux, tri, budget, mu, xc)[0]
            n_eval += 1
            if fc <= fr:
                pts[npts - 1] = xc
                fs[npts - 1] = fc
                continue
        else:
            xc = [cen[dd] + 0.5 * (worst[dd] - cen[dd]) for dd in range(dim)]
            fc = layout_objective(kind, aux, tri, budget, mu, xc)[0]
            n_eval += 1
            if fc < fs[npts - 1]:
                pts[npts - 1] = xc
                fs[npts - 1] = fc
                continue
        # shrink toward the incumbent
        x_best = pts[0]
        for i in range(1, npts):
            pi = pts[i]
            for dd in range(dim):
                pi[dd] = x_best[dd] + 0.5 * (pi[dd] - x_best[dd])
            fs[i] = layout_objective(kind, aux, tri, budget, mu, pi)[0]
            n_eval += 1

    # final stable sort so index 0 is the incumbent
    for i in range(1, npts):
        pi = pts[i]
        fi = fs[i]
        k = i - 1
        while k >= 0 and fs[k] > fi:
            pts[k + 1] = pts[k]
            fs[k + 1] = fs[k]
            k -= 1
        pts[k + 1] = pi
        fs[k + 1] = fi
    return list(pts[0]), fs[0], n_eval

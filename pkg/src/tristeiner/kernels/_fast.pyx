# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled layout kernels; the arithmetic twin of pure.py.

Every expression here matches the pure module in operation and order, and
the extension is built without contraction or fast-math rewrites, so both
backends return bit-identical results. Keep them in sync when editing.
"""

from libc.math cimport INFINITY, sqrt

PENALTY_FACTOR = 1e9


cdef int _fill_layout(int kind, int aux, double* tri, double* x,
                      double* xs, double* ys, int* eu, int* ev, int* n_edges) noexcept:
    cdef int q1, q2, b1, b2
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
        eu[0] = 0; ev[0] = 3
        eu[1] = 1; ev[1] = 4
        eu[2] = 2; ev[2] = 5
        eu[3] = 3; ev[3] = 4
        eu[4] = 4; ev[4] = 5
        eu[5] = 3; ev[5] = 5
        n_edges[0] = 6
        return 6
    if kind == 2:
        xs[3] = x[0]
        ys[3] = x[1]
        xs[4] = x[2]
        ys[4] = x[3]
        if aux == 0:
            q1 = 1; q2 = 2
        elif aux == 1:
            q1 = 0; q2 = 2
        else:
            q1 = 0; q2 = 1
        eu[0] = aux; ev[0] = 3
        eu[1] = aux; ev[1] = 4
        eu[2] = 3; ev[2] = 4
        eu[3] = q1; ev[3] = 3
        eu[4] = q2; ev[4] = 4
        n_edges[0] = 5
        return 5
    xs[3] = x[0]
    ys[3] = x[1]
    if aux == 0:
        b1 = 1; b2 = 2
    elif aux == 1:
        b1 = 0; b2 = 2
    else:
        b1 = 0; b2 = 1
    eu[0] = b1; ev[0] = b2
    eu[1] = b1; ev[1] = 3
    eu[2] = b2; ev[2] = 3
    eu[3] = aux; ev[3] = 3
    n_edges[0] = 4
    return 4


cdef inline double _edge_len(double* xs, double* ys, int u, int v) noexcept:
    cdef double dx = xs[v] - xs[u]
    cdef double dy = ys[v] - ys[u]
    return sqrt(dx * dx + dy * dy)


cdef void _shortest(double* w, int n, int src, double* d) noexcept:
    cdef int i, v, u, it
    cdef double best, base, wv, nd
    cdef bint done[6]
    for i in range(6):
        d[i] = INFINITY
    d[src] = 0.0
    for i in range(6):
        done[i] = 0
    for it in range(n):
        u = -1
        best = INFINITY
        for i in range(n):
            if not done[i] and d[i] < best:
                best = d[i]
                u = i
        if u < 0:
            break
        done[u] = 1
        base = d[u]
        for v in range(n):
            wv = w[6 * u + v]
            if wv < INFINITY:
                nd = base + wv
                if nd < d[v]:
                    d[v] = nd


cdef double _objective(int kind, int aux, double* tri, double budget, double mu,
                       double* x, double* j_out, double* total_out) noexcept:
    cdef double xs[6]
    cdef double ys[6]
    cdef int eu[6]
    cdef int ev[6]
    cdef int n_edges
    cdef int n = _fill_layout(kind, aux, tri, x, xs, ys, eu, ev, &n_edges)

    cdef double w[36]
    cdef int i, u, v
    for i in range(36):
        w[i] = INFINITY
    cdef double total = 0.0
    cdef double l
    for i in range(n_edges):
        u = eu[i]
        v = ev[i]
        l = _edge_len(xs, ys, u, v)
        total += l
        if l < w[6 * u + v]:
            w[6 * u + v] = l
            w[6 * v + u] = l

    cdef double d[6]
    _shortest(w, n, 0, d)
    cdef double d_ab = d[1]
    cdef double d_ac = d[2]
    _shortest(w, n, 1, d)
    cdef double d_bc = d[2]

    cdef double pen = PENALTY_FACTOR * (
        _edge_len(xs, ys, 0, 1) + _edge_len(xs, ys, 1, 2) + _edge_len(xs, ys, 0, 2)
    )
    if d_ab == INFINITY:
        d_ab = pen
    if d_bc == INFINITY:
        d_bc = pen
    if d_ac == INFINITY:
        d_ac = pen
    cdef double j = d_ab + d_bc + d_ac

    cdef double viol = total - budget
    cdef double f
    if viol > 0.0:
        f = j + mu * viol * viol
    else:
        f = j
    j_out[0] = j
    total_out[0] = total
    return f


cdef int _unpack6(object seq, double* out) except -1:
    cdef int i = 0
    for item in seq:
        if i >= 6:
            raise ValueError("expected at most 6 coordinates")
        out[i] = item
        i += 1
    return i


def layout_objective(int kind, int aux, tri, double budget, double mu, x):
    """Penalized connection cost of one anchor layout; see the pure twin."""
    cdef double ctri[6]
    cdef double cx[6]
    cdef double j, total, f
    _unpack6(tri, ctri)
    _unpack6(x, cx)
    f = _objective(kind, aux, ctri, budget, mu, cx, &j, &total)
    return f, j, total


def minimize_layout(int kind, int aux, tri, double budget, double mu, x0,
                    double step, double xatol, double fatol, int maxiter):
    """Nelder-Mead on layout_objective; returns (x_best, f_best, n_eval)."""
    cdef double ctri[6]
    cdef double pts[7][6]
    cdef double fs[7]
    cdef double tmp[6]
    cdef double cen[6]
    cdef double xr[6]
    cdef double xe[6]
    cdef double xc[6]
    cdef double j, total, fi, fr, fe, fc
    cdef double f_best, f_worst, spread_x, scale_x, bd, ab, diff, s
    cdef int dim, npts, i, k, dd, it, n_eval

    _unpack6(tri, ctri)
    dim = _unpack6(x0, tmp)
    npts = dim + 1
    for dd in range(dim):
        pts[0][dd] = tmp[dd]
    # translation-led seeding; see the pure twin for why axis-only stalls
    for i in range(2):
        for dd in range(dim):
            pts[i + 1][dd] = tmp[dd]
        for k in range(i, dim, 2):
            pts[i + 1][k] = pts[i + 1][k] + step
    for i in range(dim - 2):
        for dd in range(dim):
            pts[i + 3][dd] = tmp[dd]
        pts[i + 3][i] = pts[i + 3][i] + step
    for i in range(npts):
        fs[i] = _objective(kind, aux, ctri, budget, mu, pts[i], &j, &total)
    n_eval = npts

    for it in range(maxiter):
        # stable insertion sort by objective
        for i in range(1, npts):
            for dd in range(dim):
                tmp[dd] = pts[i][dd]
            fi = fs[i]
            k = i - 1
            while k >= 0 and fs[k] > fi:
                for dd in range(dim):
                    pts[k + 1][dd] = pts[k][dd]
                fs[k + 1] = fs[k]
                k -= 1
            for dd in range(dim):
                pts[k + 1][dd] = tmp[dd]
            fs[k + 1] = fi

        f_best = fs[0]
        f_worst = fs[npts - 1]
        spread_x = 0.0
        scale_x = 1.0
        for dd in range(dim):
            bd = pts[0][dd]
            ab = bd if bd >= 0.0 else -bd
            if ab > scale_x:
                scale_x = ab
            for i in range(1, npts):
                diff = pts[i][dd] - bd
                if diff < 0.0:
                    diff = -diff
                if diff > spread_x:
                    spread_x = diff
        ab = f_best if f_best >= 0.0 else -f_best
        if (
            f_worst - f_best <= fatol * (1.0 + ab)
            and spread_x <= xatol * scale_x
        ):
            break

        for dd in range(dim):
            s = 0.0
            for i in range(npts - 1):
                s += pts[i][dd]
            cen[dd] = s / (npts - 1)

        for dd in range(dim):
            xr[dd] = cen[dd] + (cen[dd] - pts[npts - 1][dd])
        fr = _objective(kind, aux, ctri, budget, mu, xr, &j, &total)
        n_eval += 1

        if fr < fs[0]:
            for dd in range(dim):
                xe[dd] = cen[dd] + 2.0 * (cen[dd] - pts[npts - 1][dd])
            fe = _objective(kind, aux, ctri, budget, mu, xe, &j, &total)
            n_eval += 1
            if fe < fr:
                for dd in range(dim):
                    pts[npts - 1][dd] = xe[dd]
                fs[npts - 1] = fe
            else:
                for dd in range(dim):
                    pts[npts - 1][dd] = xr[dd]
                fs[npts - 1] = fr
            continue
        if fr < fs[npts - 2]:
            for dd in range(dim):
                pts[npts - 1][dd] = xr[dd]
            fs[npts - 1] = fr
            continue
        if fr < fs[npts - 1]:
            for dd in range(dim):
                xc[dd] = cen[dd] + 0.5 * (xr[dd] - cen[dd])
            fc = _objective(kind, aux, ctri, budget, mu, xc, &j, &total)
            n_eval += 1
            if fc <= fr:
                for dd in range(dim):
                    pts[npts - 1][dd] = xc[dd]
                fs[npts - 1] = fc
                continue
        else:
            for dd in range(dim):
                xc[dd] = cen[dd] + 0.5 * (pts[npts - 1][dd] - cen[dd])
            fc = _objective(kind, aux, ctri, budget, mu, xc, &j, &total)
            n_eval += 1
            if fc < fs[npts - 1]:
                for dd in range(dim):
                    pts[npts - 1][dd] = xc[dd]
                fs[npts - 1] = fc
                continue
        # shrink toward the incumbent
        for i in range(1, npts):
            for dd in range(dim):
                pts[i][dd] = pts[0][dd] + 0.5 * (pts[i][dd] - pts[0][dd])
            fs[i] = _objective(kind, aux, ctri, budget, mu, pts[i], &j, &total)
            n_eval += 1

    for i in range(1, npts):
        for dd in range(dim):
            tmp[dd] = pts[i][dd]
        fi = fs[i]
        k = i - 1
        while k >= 0 and fs[k] > fi:
            for dd in range(dim):
                pts[k + 1][dd] = pts[k][dd]
            fs[k + 1] = fs[k]
            k -= 1
        for dd in range(dim):
            pts[k + 1][dd] = tmp[dd]
        fs[k + 1] = fi
    return [pts[0][dd] for dd in range(dim)], fs[0], n_eval

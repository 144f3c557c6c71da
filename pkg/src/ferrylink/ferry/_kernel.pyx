# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled ferry-loop kernel.

Mirrors the pure-Python reference in ``sim.step`` operation for operation so
that both kernels produce bit-identical traces; any semantic change must be
made in both places (the test suite compares them on a scenario matrix).
"""

from libc.math cimport floor

cdef double ARRIVE_EPS = 1e-9
cdef double HOVER_CAP = 1e15


cdef struct Resolved:
    int sid
    long long hover


cdef inline double rate_at(const double[::1] thresholds, const double[::1] rates,
                           double d) nogil:
    cdef Py_ssize_t q
    if d >= thresholds[0]:
        return 0.0
    for q in range(1, thresholds.shape[0]):
        if d >= thresholds[q]:
            return rates[q]
    return rates[thresholds.shape[0] - 1]


cdef inline long long hover_steps(double amount, double rate, double dt) nogil:
    cdef double ratio
    if amount <= 0.0:
        return 0
    if rate <= 0.0:
        return -1
    ratio = amount / (rate * dt)
    if ratio >= HOVER_CAP:
        return -1
    return <long long> floor(ratio)


cdef Resolved resolve_entry(int sid, double x, double buffered,
                            const double[::1] thresholds, const double[::1] rates,
                            double big_d, double d_load, double d_offload,
                            double x_off, double d_max,
                            double alpha_tb, double beta_tb, double dt) nogil:
    cdef Resolved out
    cdef long long hover
    cdef double rate
    cdef int seen_load_hover = 0
    while True:
        if sid == 1:
            rate = rate_at(thresholds, rates, d_load)
            hover = hover_steps(alpha_tb - buffered, rate, dt)
            if seen_load_hover and hover == 0:
                hover = 1  # degenerate zero-length cycle; force progress
            if hover != 0:
                out.sid = 1
                out.hover = hover
                return out
            seen_load_hover = 1
            sid = 2
        elif sid == 2:
            if x >= x_off - ARRIVE_EPS:
                sid = 5
            elif x >= d_max:
                sid = 3
            else:
                out.sid = 2
                out.hover = 0
                return out
        elif sid == 3:
            if big_d - x <= d_max:
                sid = 4
            else:
                out.sid = 3
                out.hover = 0
                return out
        elif sid == 4:
            if x >= x_off - ARRIVE_EPS:
                sid = 5
            else:
                out.sid = 4
                out.hover = 0
                return out
        elif sid == 5:
            rate = rate_at(thresholds, rates, d_offload)
            hover = hover_steps(buffered - beta_tb, rate, dt)
            if hover != 0:
                out.sid = 5
                out.hover = hover
                return out
            sid = 6
        elif sid == 6:
            if x <= d_load + ARRIVE_EPS:
                sid = 1
            elif big_d - x >= d_max:
                sid = 7
            else:
                out.sid = 6
                out.hover = 0
                return out
        elif sid == 7:
            if x <= d_max:
                sid = 8
            else:
                out.sid = 7
                out.hover = 0
                return out
        else:  # sid == 8
            if x <= d_load + ARRIVE_EPS:
                sid = 1
            else:
                out.sid = 8
                out.hover = 0
                return out


def run_loop(long long n_steps, double dt, double speed, double big_d,
             double d_load, double d_offload, double d_max,
             double buffer_bits, double alpha_tb, double beta_tb,
             bint passthrough, const double[::1] thresholds,
             const double[::1] rates, int init_sid, long long init_hover,
             int[::1] state_col, double[::1] x_col, double[::1] td_col,
             double[::1] tr_col, double[::1] loaded_col, double[::1] load_col,
             double[::1] off_col, double[::1] pt_col):
    """Fill trace columns for ``n_steps`` steps after the initial row."""
    cdef double x = d_load
    cdef double x_off = big_d - d_offload
    cdef double buffered = 0.0, delivered = 0.0, loaded = 0.0
    cdef double v_dt = speed * dt
    cdef double d_rg, load, off, m, inflow, outflow, room
    cdef double load_flow, off_flow
    cdef long long i, hover = init_hover
    cdef int sid = init_sid, applied
    cdef Resolved res

    state_col[0] = sid
    x_col[0] = x
    with nogil:
        for i in range(1, n_steps + 1):
            applied = sid
            if sid == 2 or sid == 3 or sid == 4:
                x = x + v_dt
            elif sid == 6 or sid == 7 or sid == 8:
                x = x - v_dt
            d_rg = big_d - x

            load = rate_at(thresholds, rates, x)
            off = rate_at(thresholds, rates, d_rg)
            if passthrough and load > 0.0 and off > 0.0:
                m = load if load < off else off
            else:
                m = 0.0

            if sid == 1 or sid == 2 or sid == 8:
                inflow = load * dt
                room = buffer_bits - buffered
                if inflow > room:
                    inflow = room
                buffered += inflow
                delivered += m * dt
                loaded += inflow + m * dt
                load_flow = inflow / dt + m
                off_flow = m
            elif sid == 4 or sid == 5 or sid == 6:
                outflow = off * dt
                if outflow > buffered:
                    outflow = buffered
                buffered -= outflow
                delivered += outflow + m * dt
                loaded += m * dt
                load_flow = m
                off_flow = outflow / dt + m
            else:
                m = 0.0
                load_flow = 0.0
                off_flow = 0.0

            if sid == 1 or sid == 5:
                if hover > 0:
                    hover -= 1
                if hover == 0:
                    res = resolve_entry(2 if sid == 1 else 6, x, buffered,
                                        thresholds, rates, big_d, d_load,
                                        d_offload, x_off, d_max,
                                        alpha_tb, beta_tb, dt)
                    sid = res.sid
                    hover = res.hover
            else:
                res = resolve_entry(sid, x, buffered, thresholds, rates,
                                    big_d, d_load, d_offload, x_off, d_max,
                                    alpha_tb, beta_tb, dt)
                sid = res.sid
                hover = res.hover

            state_col[i] = applied
            x_col[i] = x
            td_col[i] = buffered
            tr_col[i] = delivered
            loaded_col[i] = loaded
            load_col[i] = load_flow
            off_col[i] = off_flow
            pt_col[i] = m

"""Compiled integration loop for problems that ship a fused energy kernel.

A fused kernel has signature ``kernel(w, beta, lam, grad_out) -> energy`` and
must be numba-jitted. The loop below is the same Dormand-Prince 5(4) / PI
policy as ``flow._integrate_generic``; the two are cross-checked by tests.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from . import flow as _flow
from .energy import EnergyParams

__all__ = ["integrate_fused"]

_RUNNERS: dict = {}

# Local copies of the stepper constants keep the jitted closure free of
# module-attribute lookups.
_A21 = _flow.A21
_A31, _A32 = _flow.A31, _flow.A32
_A41, _A42, _A43 = _flow.A41, _flow.A42, _flow.A43
_A51, _A52, _A53, _A54 = _flow.A51, _flow.A52, _flow.A53, _flow.A54
_A61, _A62, _A63, _A64, _A65 = _flow.A61, _flow.A62, _flow.A63, _flow.A64, _flow.A65
_B1, _B3, _B4, _B5, _B6 = _flow.B1, _flow.B3, _flow.B4, _flow.B5, _flow.B6
_E1, _E3, _E4, _E5, _E6, _E7 = _flow.E1, _flow.E3, _flow.E4, _flow.E5, _flow.E6, _flow.E7
_SAFETY, _EXPO1, _BETA_PI = _flow.SAFETY, _flow.EXPO1, _flow.BETA_PI
_FAC_MIN, _FAC_MAX = _flow.FAC_MIN, _flow.FAC_MAX


def _make_runner(kernel):
    @njit(cache=False)
    def run(w0, beta, lam, t_end, rtol, atol, grad_tol, stall_window, stall_eps,
            max_steps, record_every, h_init, h_min):
        n = w0.shape[0]
        y = w0.copy()
        y_new = np.empty(n)
        ys = np.empty(n)
        grad = np.empty(n)
        k1 = np.empty(n)
        k2 = np.empty(n)
        k3 = np.empty(n)
        k4 = np.empty(n)
        k5 = np.empty(n)
        k6 = np.empty(n)
        k7 = np.empty(n)

        e_val = kernel(y, beta, lam, grad)
        gn = 0.0
        finite = np.isfinite(e_val)
        for i in range(n):
            k1[i] = -grad[i]
            if not np.isfinite(grad[i]):
                finite = False
            a = abs(grad[i])
            if a > gn:
                gn = a

        cap = 1024
        ts = np.empty(cap)
        ws = np.empty((cap, n))
        es = np.empty(cap)
        gs = np.empty(cap)
        ts[0] = 0.0
        es[0] = e_val
        gs[0] = gn
        for i in range(n):
            ws[0, i] = y[i]
        rows = 1

        reason = -1
        if not finite:
            reason = 4
        elif gn <= grad_tol:
            reason = 0

        e_hist = np.empty(stall_window + 1)
        e_hist[0] = e_val

        t = 0.0
        h = h_init
        facold = 1e-4
        naccept = 0
        nreject = 0
        last_rejected = False
        recorded_final = True

        while reason < 0:
            if naccept + nreject >= max_steps:
                reason = 3
                break
            last = False
            if t + h >= t_end:
                h = t_end - t
                last = True
            if h < h_min:
                h = h_min

            for i in range(n):
                ys[i] = y[i] + h * (_A21 * k1[i])
            kernel(ys, beta, lam, grad)
            for i in range(n):
                k2[i] = -grad[i]
                ys[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
            kernel(ys, beta, lam, grad)
            for i in range(n):
                k3[i] = -grad[i]
                ys[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            kernel(ys, beta, lam, grad)
            for i in range(n):
                k4[i] = -grad[i]
                ys[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
            kernel(ys, beta, lam, grad)
            for i in range(n):
                k5[i] = -grad[i]
                ys[i] = y[i] + h * (
                    _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
                )
            kernel(ys, beta, lam, grad)
            for i in range(n):
                k6[i] = -grad[i]
                y_new[i] = y[i] + h * (
                    _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
                )
            e_new = kernel(y_new, beta, lam, grad)

            bad = not np.isfinite(e_new)
            gn_new = 0.0
            acc = 0.0
            for i in range(n):
                k7[i] = -grad[i]
                if not (np.isfinite(y_new[i]) and np.isfinite(k7[i])):
                    bad = True
                a = abs(grad[i])
                if a > gn_new:
                    gn_new = a
                ei = h * (
                    _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                    + _E6 * k6[i] + _E7 * k7[i]
                )
                ay = abs(y[i])
                an = abs(y_new[i])
                sc = atol + rtol * (ay if ay > an else an)
                r = ei / sc
                acc += r * r
            err = np.sqrt(acc / n)
            if not np.isfinite(err):
                bad = True

            at_floor = h <= h_min * (1.0 + 1e-12)
            if bad:
                if at_floor:
                    reason = 4
                    break
                nreject += 1
                last_rejected = True
                h = h * _FAC_MIN
                if h < h_min:
                    h = h_min
                continue

            if err <= 1.0 or at_floor:
                t = t_end if last else t + h
                tmp = y
                y = y_new
                y_new = tmp
                tmp = k1
                k1 = k7
                k7 = tmp
                e_val = e_new
                gn = gn_new
                naccept += 1
                recorded_final = naccept % record_every == 0
                if recorded_final:
                    if rows == cap:
                        cap2 = 2 * cap
                        ts2 = np.empty(cap2)
                        ws2 = np.empty((cap2, n))
                        es2 = np.empty(cap2)
                        gs2 = np.empty(cap2)
                        ts2[:cap] = ts
                        ws2[:cap] = ws
                        es2[:cap] = es
                        gs2[:cap] = gs
                        ts = ts2
                        ws = ws2
                        es = es2
                        gs = gs2
                        cap = cap2
                    ts[rows] = t
                    es[rows] = e_val
                    gs[rows] = gn
                    for i in range(n):
                        ws[rows, i] = y[i]
                    rows += 1
                e_hist[naccept % (stall_window + 1)] = e_val
                if gn <= grad_tol:
                    reason = 0
                elif naccept >= stall_window and (
                    e_hist[(naccept - stall_window) % (stall_window + 1)] - e_val
                    < stall_eps * max(1.0, abs(e_val))
                ):
                    reason = 1
                elif last:
                    reason = 2
                else:
                    if err == 0.0:
                        fac = _FAC_MAX
                    else:
                        fac = _SAFETY * err ** (-_EXPO1) * facold ** _BETA_PI
                        if fac > _FAC_MAX:
                            fac = _FAC_MAX
                        elif fac < _FAC_MIN:
                            fac = _FAC_MIN
                    if last_rejected and fac > 1.0:
                        fac = 1.0
                    facold = max(err, 1e-4)
                    last_rejected = False
                    h *= fac
            else:
                nreject += 1
                last_rejected = True
                fac = _SAFETY * err ** (-0.2)
                if fac < _FAC_MIN:
                    fac = _FAC_MIN
                h *= fac

        if not recorded_final:
            if rows == cap:
                cap2 = cap + 1
                ts2 = np.empty(cap2)
                ws2 = np.empty((cap2, n))
                es2 = np.empty(cap2)
                gs2 = np.empty(cap2)
                ts2[:cap] = ts
                ws2[:cap] = ws
                es2[:cap] = es
                gs2[:cap] = gs
                ts = ts2
                ws = ws2
                es = es2
                gs = gs2
                cap = cap2
            ts[rows] = t
            es[rows] = e_val
            gs[rows] = gn
            for i in range(n):
                ws[rows, i] = y[i]
            rows += 1

        return ts[:rows].copy(), ws[:rows].copy(), es[:rows].copy(), gs[:rows].copy(), reason, naccept, nreject

    return run


def integrate_fused(kernel, w0, params: EnergyParams, cfg: "_flow.FlowConfig") -> "_flow.Trajectory":
    """Run the compiled loop and package the result as a Trajectory."""
    runner = _RUNNERS.get(kernel)
    if runner is None:
        runner = _make_runner(kernel)
        _RUNNERS[kernel] = runner
    grad_tol = _flow.resolve_grad_tol(cfg, params)
    ts, ws, es, gs, reason, naccept, nreject = runner(
        np.asarray(w0, dtype=np.float64),
        float(params.beta),
        float(params.lam),
        float(cfg.t_end),
        float(cfg.rtol),
        float(cfg.atol),
        float(grad_tol),
        int(cfg.stall_window),
        float(cfg.stall_eps),
        int(cfg.max_steps),
        int(cfg.record_every),
        float(cfg.h_init),
        float(cfg.h_min),
    )
    return _flow.Trajectory(
        t=ts,
        w=ws,
        energy=es,
        grad_norm=gs,
        terminal_reason=_flow.REASONS[reason],
        n_accepted=int(naccept),
        n_rejected=int(nreject),
    )

"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``FERRYLINK_FORCE_PYTHON=1`` to ignore the extension (used by the
benchmark and by the cross-kernel equivalence tests). Both kernels produce
bit-identical traces.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import ConfigInvalid

try:
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on the build environment
    _compiled = None


def _run_compiled(params):
    from .params import initial_state

    n = params.n_steps
    state_col = np.zeros(n + 1, dtype=np.int32)
    x_col = np.zeros(n + 1)
    td_col = np.zeros(n + 1)
    tr_col = np.zeros(n + 1)
    loaded_col = np.zeros(n + 1)
    load_col = np.zeros(n + 1)
    off_col = np.zeros(n + 1)
    pt_col = np.zeros(n + 1)

    init = initial_state(params)
    thresholds, rates = params.rate_profile()
    _compiled.run_loop(
        n, params.dt_s, params.speed_mps, params.big_d, params.d_load,
        params.d_offload, params.table.d_max, params.buffer_bits,
        params.alpha * params.buffer_bits, params.beta * params.buffer_bits,
        params.passthrough, np.asarray(thresholds), np.asarray(rates),
        init.state_id, init.hover_remaining,
        state_col, x_col, td_col, tr_col, loaded_col, load_col, off_col, pt_col,
    )
    return state_col, x_col, td_col, tr_col, loaded_col, load_col, off_col, pt_col


def _forced_python() -> bool:
    return os.environ.get("FERRYLINK_FORCE_PYTHON", "") not in ("", "0")


def available_engines() -> tuple[str, ...]:
    if _compiled is not None:
        return ("compiled", "python")
    return ("python",)


def active_engine_name(engine: str = "auto") -> str:
    if engine == "auto":
        if _compiled is not None and not _forced_python():
            return "compiled"
        return "python"
    if engine not in ("compiled", "python"):
        raise ConfigInvalid(f"unknown engine {engine!r}")
    if engine == "compiled" and _compiled is None:
        raise ConfigInvalid("compiled kernel is not available in this install")
    return engine


def get_kernel(engine: str = "auto"):
    from .sim import _run_python

    name = active_engine_name(engine)
    return _run_compiled if name == "compiled" else _run_python

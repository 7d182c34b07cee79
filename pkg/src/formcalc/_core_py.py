"""Pure-Python (numpy) evaluator for compiled expression programs.

Fallback used when the compiled extension is unavailable.  Semantics
match _core.pyx: IEEE arithmetic with non-finite results passed through
(callers decide whether those are errors).
"""

from __future__ import annotations

import numpy as np

from . import _ops

# Points are processed in chunks so scratch slots stay cache-sized.
CHUNK = 1 << 16


def _powi(base, exponent):
    if exponent == 0:
        return np.ones_like(base)
    acc = base.copy()
    for _ in range(abs(exponent) - 1):
        acc *= base
    if exponent < 0:
        with np.errstate(all="ignore"):
            acc = 1.0 / acc
    return acc


def run(code, consts, n_slots, outputs, points, out):
    n, nvars = points.shape
    rows = code.tolist()
    outs = outputs.tolist()
    for start in range(0, max(n, 1), CHUNK):
        stop = min(start + CHUNK, n)
        if stop <= start:
            break
        m = stop - start
        slots: list = [None] * n_slots
        for j in range(nvars):
            slots[j] = points[start:stop, j]
        with np.errstate(all="ignore"):
            for op, dst, a, b in rows:
                if op == _ops.CONST:
                    slots[dst] = np.full(m, consts[b])
                elif op == _ops.ADD:
                    slots[dst] = slots[a] + slots[b]
                elif op == _ops.SUB:
                    slots[dst] = slots[a] - slots[b]
                elif op == _ops.MUL:
                    slots[dst] = slots[a] * slots[b]
                elif op == _ops.DIV:
                    slots[dst] = slots[a] / slots[b]
                elif op == _ops.NEG:
                    slots[dst] = -slots[a]
                elif op == _ops.POW:
                    slots[dst] = np.power(slots[a], slots[b])
                elif op == _ops.POWI:
                    slots[dst] = _powi(slots[a], b)
                elif op == _ops.SQRT:
                    slots[dst] = np.sqrt(slots[a])
                elif op == _ops.SIN:
                    slots[dst] = np.sin(slots[a])
                elif op == _ops.COS:
                    slots[dst] = np.cos(slots[a])
                elif op == _ops.TAN:
                    slots[dst] = np.tan(slots[a])
                elif op == _ops.EXP:
                    slots[dst] = np.exp(slots[a])
                elif op == _ops.LN:
                    slots[dst] = np.log(slots[a])
                else:  # pragma: no cover
                    raise ValueError(f"bad opcode {op}")
        for k, slot in enumerate(outs):
            out[k, start:stop] = slots[slot]

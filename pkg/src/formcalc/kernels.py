"""Expression-to-program compiler and evaluation backend selection.

Every numeric integral and zero test funnels through here: an expression
tree is compiled once into a flat register program (identical subtrees
are computed once), then evaluated over arrays of points by either the
compiled extension (formcalc._core, built from Cython) or the numpy
fallback (formcalc._core_py).  The backend is chosen at import; set
FORMCALC_BACKEND=python or =compiled to force one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import _core_py, _ops
from .errors import UnboundVariableError
from .expr import (Add, Call, Constant, Div, Expression, Mul, Neg, Pow, Sub,
                   Variable)

__all__ = [
    "Program", "compile_program", "eval_program", "with_all_outputs",
    "active_backend", "set_backend", "available_backends", "has_compiled",
]

try:
    from . import _core as _compiled
except ImportError:  # extension not built; fall back to numpy
    _compiled = None

_MAX_POWI = 16


def _default_backend() -> str:
    choice = os.environ.get("FORMCALC_BACKEND", "").strip().lower()
    if choice in ("", "auto"):
        return "compiled" if _compiled is not None else "python"
    if choice in ("compiled", "cython", "c"):
        if _compiled is None:
            raise RuntimeError(
                "FORMCALC_BACKEND=compiled but the formcalc._core extension "
                "is not built; install with the Cython extension or unset "
                "the variable")
        return "compiled"
    if choice in ("python", "pure", "fallback", "numpy"):
        return "python"
    raise RuntimeError(f"unknown FORMCALC_BACKEND value {choice!r}")


_BACKEND = _default_backend()


def active_backend() -> str:
    """Name of the backend used when none is passed explicitly."""
    return _BACKEND


def set_backend(name: str | None) -> str:
    """Set the default backend ('compiled' or 'python'); None restores the
    import-time choice.  Returns the active backend name."""
    global _BACKEND
    if name is None:
        _BACKEND = _default_backend()
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend requested but not built")
        _BACKEND = "compiled"
    elif name == "python":
        _BACKEND = "python"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return _BACKEND


def has_compiled() -> bool:
    return _compiled is not None


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled is not None else ("python",)


@dataclass(frozen=True)
class Program:
    """A flat register program for a tuple of expressions.

    Slots 0..len(variables)-1 hold the input coordinates; each
    instruction writes one fresh slot, so instructions never alias.
    ``code`` rows are (op, dst, a, b); see formcalc._ops.
    """

    code: np.ndarray
    consts: np.ndarray
    n_slots: int
    variables: tuple[str, ...]
    outputs: np.ndarray

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)


def compile_program(exprs: Iterable[Expression], variables: Sequence[str]) -> Program:
    """Compile expressions over an ordered variable list.

    Structurally identical subtrees share one slot.  Raises
    UnboundVariableError if an expression mentions a variable outside
    ``variables``.
    """
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable names")
    slot_of: dict[Expression, int] = {
        Variable(name): i for i, name in enumerate(variables)
    }
    code: list[tuple[int, int, int, int]] = []
    consts: list[float] = []
    const_index: dict[str, int] = {}
    next_slot = len(variables)

    def alloc() -> int:
        nonlocal next_slot
        slot = next_slot
        next_slot += 1
        return slot

    def emit(e: Expression) -> int:
        found = slot_of.get(e)
        if found is not None:
            return found
        if isinstance(e, Variable):
            raise UnboundVariableError(e.name)
        if isinstance(e, Constant):
            key = repr(e.value)
            k = const_index.get(key)
            if k is None:
                k = len(consts)
                consts.append(e.value)
                const_index[key] = k
            dst = alloc()
            code.append((_ops.CONST, dst, 0, k))
        elif isinstance(e, (Add, Sub, Mul, Div)):
            a = emit(e.left)
            b = emit(e.right)
            op = {Add: _ops.ADD, Sub: _ops.SUB, Mul: _ops.MUL, Div: _ops.DIV}[type(e)]
            dst = alloc()
            code.append((op, dst, a, b))
        elif isinstance(e, Neg):
            a = emit(e.child)
            dst = alloc()
            code.append((_ops.NEG, dst, a, 0))
        elif isinstance(e, Pow):
            exp = e.exponent
            if (isinstance(exp, Constant) and exp.value == round(exp.value)
                    and abs(exp.value) <= _MAX_POWI):
                a = emit(e.base)
                dst = alloc()
                code.append((_ops.POWI, dst, a, int(exp.value)))
            else:
                a = emit(e.base)
                b = emit(exp)
                dst = alloc()
                code.append((_ops.POW, dst, a, b))
        elif isinstance(e, Call):
            a = emit(e.arg)
            dst = alloc()
            code.append((_ops.FUNC_OPS[e.func], dst, a, 0))
        else:
            raise TypeError(f"not an expression node: {e!r}")
        slot_of[e] = dst
        return dst

    outputs = [emit(e) for e in exprs]
    return Program(
        code=np.asarray(code, dtype=np.int32).reshape(-1, 4),
        consts=np.asarray(consts, dtype=np.float64),
        n_slots=next_slot,
        variables=variables,
        outputs=np.asarray(outputs, dtype=np.int32),
    )


def with_all_outputs(program: Program) -> Program:
    """Same program, but emitting every slot (all distinct subterms)."""
    return replace(program, outputs=np.arange(program.n_slots, dtype=np.int32))


def eval_program(program: Program, points: np.ndarray,
                 backend: str | None = None) -> np.ndarray:
    """Evaluate at ``points`` (n, nvars); returns values (n_outputs, n)."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != len(program.variables):
        raise ValueError(
            f"points must have shape (n, {len(program.variables)}) for "
            f"variables {program.variables}")
    out = np.empty((program.n_outputs, pts.shape[0]), dtype=np.float64)
    name = backend if backend is not None else _BACKEND
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend requested but not built")
        impl = _compiled
    elif name == "python":
        impl = _core_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    impl.run(program.code, program.consts, program.n_slots, program.outputs,
             pts, out)
    return out

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled block evaluator for expression programs.

Processes points in cache-sized blocks; each instruction runs as a tight
C loop over one block, so the whole program stays in L1/L2.  Arithmetic
is plain IEEE double precision; non-finite values propagate (callers
check).  Opcode numbers must match formcalc._ops (asserted by a test
against the OPCODES dict below).
"""

from libc.math cimport sqrt, sin, cos, tan, exp, log, pow

import numpy as np

DEF BLOCK = 4096

OPCODES = {
    "const": 0, "add": 1, "sub": 2, "mul": 3, "div": 4, "neg": 5,
    "pow": 6, "powi": 7, "sqrt": 8, "sin": 9, "cos": 10, "tan": 11,
    "exp": 12, "ln": 13,
}


def run(int[:, ::1] code, double[::1] consts, int n_slots, int[::1] outputs,
        double[:, ::1] points, double[:, ::1] out):
    cdef Py_ssize_t n = points.shape[0]
    cdef int nvars = <int> points.shape[1]
    cdef Py_ssize_t n_instr = code.shape[0]
    cdef Py_ssize_t n_out = outputs.shape[0]
    scratch = np.empty((n_slots, BLOCK), dtype=np.float64)
    cdef double[:, ::1] s = scratch
    cdef Py_ssize_t start = 0, m, i, k
    cdef int op, dst, a, b, j, e, q
    cdef double c, acc, base

    if n == 0:
        return
    with nogil:
        while start < n:
            m = n - start
            if m > BLOCK:
                m = BLOCK
            for j in range(nvars):
                for i in range(m):
                    s[j, i] = points[start + i, j]
            for k in range(n_instr):
                op = code[k, 0]
                dst = code[k, 1]
                a = code[k, 2]
                b = code[k, 3]
                if op == 0:  # const
                    c = consts[b]
                    for i in range(m):
                        s[dst, i] = c
                elif op == 1:  # add
                    for i in range(m):
                        s[dst, i] = s[a, i] + s[b, i]
                elif op == 2:  # sub
                    for i in range(m):
                        s[dst, i] = s[a, i] - s[b, i]
                elif op == 3:  # mul
                    for i in range(m):
                        s[dst, i] = s[a, i] * s[b, i]
                elif op == 4:  # div
                    for i in range(m):
                        s[dst, i] = s[a, i] / s[b, i]
                elif op == 5:  # neg
                    for i in range(m):
                        s[dst, i] = -s[a, i]
                elif op == 6:  # pow
                    for i in range(m):
                        s[dst, i] = pow(s[a, i], s[b, i])
                elif op == 7:  # powi, b is the integer exponent
                    e = b if b >= 0 else -b
                    for i in range(m):
                        base = s[a, i]
                        acc = 1.0
                        for q in range(e):
                            acc *= base
                        if b < 0:
                            acc = 1.0 / acc
                        s[dst, i] = acc
                elif op == 8:  # sqrt
                    for i in range(m):
                        s[dst, i] = sqrt(s[a, i])
                elif op == 9:  # sin
                    for i in range(m):
                        s[dst, i] = sin(s[a, i])
                elif op == 10:  # cos
                    for i in range(m):
                        s[dst, i] = cos(s[a, i])
                elif op == 11:  # tan
                    for i in range(m):
                        s[dst, i] = tan(s[a, i])
                elif op == 12:  # exp
                    for i in range(m):
                        s[dst, i] = exp(s[a, i])
                elif op == 13:  # ln
                    for i in range(m):
                        s[dst, i] = log(s[a, i])
            for k in range(n_out):
                j = outputs[k]
                for i in range(m):
                    out[k, start + i] = s[j, i]
            start += BLOCK

"""Opcode numbering shared by the program compiler and both evaluator backends.

The compiled backend (_core.pyx) hardcodes the same numbers; a unit test
asserts the two tables agree.
"""

CONST = 0   # dst <- consts[b]
ADD = 1     # dst <- slot[a] + slot[b]
SUB = 2
MUL = 3
DIV = 4
NEG = 5     # dst <- -slot[a]
POW = 6     # dst <- slot[a] ** slot[b]
POWI = 7    # dst <- slot[a] ** b  (b is a small integer exponent, not a slot)
SQRT = 8
SIN = 9
COS = 10
TAN = 11
EXP = 12
LN = 13

NAMES = {
    CONST: "const", ADD: "add", SUB: "sub", MUL: "mul", DIV: "div",
    NEG: "neg", POW: "pow", POWI: "powi", SQRT: "sqrt", SIN: "sin",
    COS: "cos", TAN: "tan", EXP: "exp", LN: "ln",
}

FUNC_OPS = {"sqrt": SQRT, "sin": SIN, "cos": COS, "tan": TAN, "exp": EXP, "ln": LN}

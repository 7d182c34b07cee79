"""Shared builders for randomized test inputs."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from formcalc.expr import (Add, Call, Constant, Div, Expression, Mul, Neg,
                           Pow, Sub, Variable)
from formcalc.forms import DomainBox, Form1, Form2, VectorField


def random_polynomial(rng: np.random.Generator, max_degree: int = 3) -> Expression:
    """Random integer-coefficient polynomial in x, y, z of total degree
    <= max_degree."""
    terms = []
    for _ in range(int(rng.integers(1, 5))):
        while True:
            exps = rng.integers(0, max_degree + 1, size=3)
            if exps.sum() <= max_degree:
                break
        coeff = int(rng.integers(-5, 6))
        if coeff == 0:
            coeff = 1
        term: Expression = Constant(float(coeff))
        for name, k in zip("xyz", exps):
            if k == 1:
                term = Mul(term, Variable(name))
            elif k >= 2:
                term = Mul(term, Pow(Variable(name), Constant(float(k))))
        terms.append(term)
    result = terms[0]
    for term in terms[1:]:
        result = Add(result, term)
    return result


def random_form1(rng: np.random.Generator, box: DomainBox) -> Form1:
    return Form1(random_polynomial(rng), random_polynomial(rng),
                 random_polynomial(rng), box)


def random_form2(rng: np.random.Generator, box: DomainBox) -> Form2:
    return Form2(random_polynomial(rng), random_polynomial(rng),
                 random_polynomial(rng), box)


def random_field(rng: np.random.Generator, box: DomainBox) -> VectorField:
    return VectorField(random_polynomial(rng), random_polynomial(rng),
                       random_polynomial(rng), box)


def random_points(rng: np.random.Generator, box: DomainBox, n: int,
                  margin: float = 0.0) -> np.ndarray:
    cols = []
    for lo, hi in box.bounds:
        pad = margin * (hi - lo)
        cols.append(rng.uniform(lo + pad, hi - pad, size=n))
    return np.column_stack(cols)


# Hypothesis strategy for small expression trees over x, y, z.  Constant
# exponents only, so most samples evaluate cleanly on positive boxes.

_leaves = st.one_of(
    st.integers(min_value=-4, max_value=4).map(lambda v: Constant(float(v))),
    st.sampled_from([Variable("x"), Variable("y"), Variable("z")]),
)


def _combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: Add(*t)),
        st.tuples(children, children).map(lambda t: Sub(*t)),
        st.tuples(children, children).map(lambda t: Mul(*t)),
        st.tuples(children, children).map(lambda t: Div(*t)),
        children.map(Neg),
        st.tuples(children, st.sampled_from([Constant(2.0), Constant(3.0),
                                             Constant(-1.0)])).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["sqrt", "sin", "cos", "tan", "exp", "ln"]),
                  children).map(lambda t: Call(*t)),
    )


expressions = st.recursive(_leaves, _combine, max_leaves=16)

bindings = st.fixed_dictionaries({
    name: st.floats(min_value=0.25, max_value=1.75, allow_nan=False)
    for name in ("x", "y", "z")
})

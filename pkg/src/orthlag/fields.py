"""Built-in test fields with analytic derivative oracles.

Every built-in is separable: a product over axes of P_j(x_j) e^{-s_j x_j}
with polynomial P_j and rate s_j > 0.  Differentiation stays in the class
(D(P e^{-sx}) = (P' - sP) e^{-sx}), which supplies exact mixed partials of
any order for the derivative-based seminorms.

Registry names accepted by the CLI:
  exp-decay            e^{-sum x_j}
  l:<i1,...,id>        a single Laguerre function l_n
  poly-exp:<c0,c1,..>  per-axis polynomial (ascending coeffs) times e^{-x_j/2}
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.polynomial.laguerre import lag2poly

from .core import DomainError, validate_multi_index
from .transform import ScalarField


def separable_poly_exp_field(axis_coeffs, rates) -> ScalarField:
    """Field prod_j P_j(x_j) e^{-s_j x_j} with exact partials of every order.

    `axis_coeffs` is a list of ascending polynomial coefficient arrays, one
    per axis; `rates` the per-axis exponential rates.
    """
    axis_coeffs = [np.asarray(c, dtype=float) for c in axis_coeffs]
    rates = [float(s) for s in rates]
    if len(axis_coeffs) != len(rates):
        raise DomainError("need one rate per axis")
    if any(s <= 0 for s in rates):
        raise DomainError("exponential rates must be positive")
    dim = len(rates)

    def d_coeffs(coeffs, s):
        # coefficients of d/dx (P e^{-sx}) / e^{-sx} = P' - sP
        return npoly.polysub(npoly.polyder(coeffs), s * coeffs)

    # cache of per-axis derivative coefficient arrays, extended on demand
    deriv_cache = [[c] for c in axis_coeffs]

    def axis_deriv_coeffs(j, order):
        cache = deriv_cache[j]
        while len(cache) <= order:
            cache.append(d_coeffs(cache[-1], rates[j]))
        return cache[order]

    def axis_value(j, order, xj):
        return float(npoly.polyval(xj, axis_deriv_coeffs(j, order)) * np.exp(-rates[j] * xj))

    def evaluator(x):
        x = np.asarray(x, dtype=float)
        val = 1.0
        for j in range(dim):
            val *= axis_value(j, 0, x[j])
        return val

    def deriv(x):
        x = np.asarray(x, dtype=float)
        vals = [axis_value(j, 0, x[j]) for j in range(dim)]
        d1s = [axis_value(j, 1, x[j]) for j in range(dim)]
        d2s = [axis_value(j, 2, x[j]) for j in range(dim)]
        total = float(np.prod(vals))
        out = []
        for j in range(dim):
            rest = 1.0
            for i in range(dim):
                if i != j:
                    rest *= vals[i]
            out.append((total, d1s[j] * rest, d2s[j] * rest))
        return out

    def partial(p, x):
        p = validate_multi_index(p)
        if len(p) != dim:
            raise DomainError(f"derivative order {p} does not match dimension {dim}")
        x = np.asarray(x, dtype=float)
        val = 1.0
        for j in range(dim):
            val *= axis_value(j, p[j], x[j])
        return val

    return ScalarField(dim=dim, evaluator=evaluator, deriv=deriv, partial=partial)


def exp_decay_field(dim: int) -> ScalarField:
    """e^{-sum_j x_j}."""
    return separable_poly_exp_field([[1.0]] * dim, [1.0] * dim)


def laguerre_field(n) -> ScalarField:
    """A single Laguerre function l_n as a polynomial-times-exponential field."""
    n = validate_multi_index(n)
    coeffs = []
    for nj in n:
        basis = np.zeros(nj + 1)
        basis[nj] = 1.0
        coeffs.append(lag2poly(basis))
    return separable_poly_exp_field(coeffs, [0.5] * len(n))


def poly_exp_field(coeffs, dim: int = 1) -> ScalarField:
    """Per-axis polynomial with the given ascending coefficients, times
    e^{-x_j/2} on each axis."""
    return separable_poly_exp_field([coeffs] * dim, [0.5] * dim)


def field_by_name(name: str, dim: int = 1) -> ScalarField:
    """Resolve a registry name (see module docstring) to a field."""
    if name == "exp-decay":
        return exp_decay_field(dim)
    if name.startswith("l:"):
        idx = tuple(int(v) for v in name[2:].split(","))
        if dim not in (1, len(idx)):
            raise DomainError(f"index {idx} does not match dimension {dim}")
        return laguerre_field(idx)
    if name.startswith("poly-exp:"):
        coeffs = [float(v) for v in name[len("poly-exp:"):].split(",")]
        if not coeffs:
            raise DomainError("poly-exp needs at least one coefficient")
        return poly_exp_field(coeffs, dim)
    raise DomainError(f"unknown built-in field {name!r}")

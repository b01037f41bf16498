from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy as sp

Y_SYMBOLS = sp.symbols("y1 y2 y3")

# argument order of C for x1, x2, x3
COMPONENT_ORDER = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _key(exponents):
    return ",".join(str(e) for e in exponents)


@dataclass(frozen=True, eq=False)
class CenterPoly:
    """
    Polynomial graph x1 = C(y1, y2, y3) of the center manifold at the origin of the compactified
    system, truncated at total degree `degree`. The other components are x2 = C(y2, y3, y1) and
    x3 = C(y3, y1, y2).

    coeffs maps exponent tuples (e1, e2, e3) to exact sympy rationals.
    """
    degree: int
    coeffs: dict

    def coefficient(self, exponents):
        return self.coeffs.get(tuple(exponents), sp.Integer(0))

    def expression(self, args=Y_SYMBOLS):
        return sum((c * args[0] ** e[0] * args[1] ** e[1] * args[2] ** e[2] for e, c in self.coeffs.items()),
                   sp.Integer(0))

    def component(self, i, args=Y_SYMBOLS):
        order = COMPONENT_ORDER[i]
        return self.expression(tuple(args[k] for k in order))

    @cached_property
    def components(self):
        return sp.Matrix([self.component(i) for i in range(3)])

    @cached_property
    def _graph(self):
        return sp.lambdify(Y_SYMBOLS, list(self.components), "numpy")

    @cached_property
    def _jacobian(self):
        return sp.lambdify(Y_SYMBOLS, self.components.jacobian(sp.Matrix(Y_SYMBOLS)).tolist(), "numpy")

    def graph(self, y):
        """(C1, C2, C3) at y of shape (3,) or (N, 3)."""
        y = np.asarray(y, dtype=float)
        out = self._graph(*np.moveaxis(y, -1, 0))
        return np.stack(np.broadcast_arrays(*out), axis=-1).astype(float)

    def jacobian(self, y):
        y = np.asarray(y, dtype=float)
        rows = self._jacobian(*y)
        return np.array([[float(v) for v in row] for row in rows])

    def homogeneous_part(self, order):
        return {e: c for e, c in self.coeffs.items() if sum(e) == order}

    def is_swap_symmetric(self):
        return all(self.coefficient((e[0], e[2], e[1])) == c for e, c in self.coeffs.items())

    def is_tangent(self):
        return all(sum(e) >= 2 for e in self.coeffs)

    def to_json_dict(self):
        return {
            "degree": self.degree,
            "coefficients": {_key(e): {"value": float(c), "exact": str(c)}
                             for e, c in sorted(self.coeffs.items())},
            "components": {f"x{i + 1}": [f"y{k + 1}" for k in order] for i, order in enumerate(COMPONENT_ORDER)},
            "rigorous": self.degree <= 3,
        }

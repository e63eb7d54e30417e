"""Complex quadratic exponents in two variables and their Gaussian transforms.

Every closed-form block of the model is ``exp(P(x, y))`` with ``P`` a complex
polynomial of total degree two.  Partial Fourier transforms of such functions
are again of this form, which is how the momentum and position
representations are produced from the (Q, r) solution.
"""

from __future__ import annotations

import numpy as np

_FIELDS = ("c0", "cx", "cy", "cxx", "cxy", "cyy")


def _is_zero(c) -> bool:
    return not np.any(np.asarray(c) != 0)


class Quadratic:
    """``c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2``.

    Coefficients may be numpy arrays; they broadcast against each other and
    against the evaluation points.
    """

    __slots__ = _FIELDS
    # keep numpy from turning ``array * Quadratic`` into an object array
    __array_ufunc__ = None

    def __init__(self, c0=0.0, cx=0.0, cy=0.0, cxx=0.0, cxy=0.0, cyy=0.0):
        self.c0, self.cx, self.cy = c0, cx, cy
        self.cxx, self.cxy, self.cyy = cxx, cxy, cyy

    @classmethod
    def x(cls) -> "Quadratic":
        return cls(cx=1.0)

    @classmethod
    def y(cls) -> "Quadratic":
        return cls(cy=1.0)

    def coefficients(self) -> tuple:
        return tuple(getattr(self, f) for f in _FIELDS)

    def is_linear(self) -> bool:
        return _is_zero(self.cxx) and _is_zero(self.cxy) and _is_zero(self.cyy)

    def __add__(self, other):
        if isinstance(other, Quadratic):
            return Quadratic(*(a + b for a, b in zip(self.coefficients(), other.coefficients())))
        return Quadratic(self.c0 + other, self.cx, self.cy, self.cxx, self.cxy, self.cyy)

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(*(-a for a in self.coefficients()))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Quadratic):
            return Quadratic(*(a * other for a in self.coefficients()))
        if not (self.is_linear() and other.is_linear()):
            raise ValueError("product would exceed degree two")
        a0, ax, ay = self.c0, self.cx, self.cy
        b0, bx, by = other.c0, other.cx, other.cy
        return Quadratic(
            a0 * b0,
            a0 * bx + ax * b0,
            a0 * by + ay * b0,
            ax * bx,
            ax * by + ay * bx,
            ay * by,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Quadratic(*(a / other for a in self.coefficients()))

    def __call__(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        return self.c0 + self.cx * x + self.cy * y + self.cxx * x * x + self.cxy * x * y + self.cyy * y * y

    def exp(self, x, y):
        return np.exp(self(x, y))

    def fourier(self, axis: int, sign: int = -1) -> "Quadratic":
        """Integrate ``exp(P) * exp(sign * 1j * k * v)`` over variable ``v``.

        ``axis`` 0 integrates over x, 1 over y; the conjugate variable ``k``
        takes the integrated variable's slot in the result.
        """
        if axis == 1:
            alpha = -np.asarray(self.cyy)
            beta = Quadratic(c0=self.cy, cx=self.cxy, cy=sign * 1j)
            rest = Quadratic(c0=self.c0, cx=self.cx, cxx=self.cxx)
        elif axis == 0:
            alpha = -np.asarray(self.cxx)
            beta = Quadratic(c0=self.cx, cx=sign * 1j, cy=self.cxy)
            rest = Quadratic(c0=self.c0, cy=self.cy, cyy=self.cyy)
        else:
            raise ValueError("axis must be 0 or 1")
        if np.any(np.real(alpha) <= 0):
            raise ValueError("Gaussian integral diverges: quadratic coefficient has non-negative real part")
        return rest + beta * beta / (4.0 * alpha) + 0.5 * (np.log(np.pi) - np.log(alpha + 0j))

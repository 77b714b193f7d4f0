"""Polynomials and truncated power series in x over cyclotomic scalars."""

from __future__ import annotations

from .cyclotomic import ONE, ZERO, Cyclotomic, cyc
from .errors import NonUnitDivision


class XSeries:
    """sum_{i < prec} c_i x^i, with prec=None meaning an exact polynomial."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec: int | None = None):
        cs = [cyc(c) for c in coeffs]
        if prec is not None:
            cs = cs[:prec]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs
        self.prec = prec

    @classmethod
    def poly(cls, coeffs) -> "XSeries":
        return cls(coeffs, None)

    def __getitem__(self, i: int) -> Cyclotomic:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _prec(self, other: "XSeries") -> int | None:
        ps = [p for p in (self.prec, other.prec) if p is not None]
        return min(ps) if ps else None

    def truncate(self, prec: int) -> "XSeries":
        p = prec if self.prec is None else min(prec, self.prec)
        return XSeries(self.coeffs, p)

    def __add__(self, other):
        other = _as_series(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return XSeries([self[i] + other[i] for i in range(n)], self._prec(other))

    __radd__ = __add__

    def __neg__(self):
        return XSeries([-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-_as_series(other))

    def __rsub__(self, other):
        return _as_series(other) - self

    def __mul__(self, other):
        other = _as_series(other)
        prec = self._prec(other)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not None:
            n = min(n, prec)
        out = [ZERO] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + a * b
        return XSeries(out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Series division; needs a unit constant term in the divisor."""
        other = _as_series(other)
        c0 = other[0]
        if c0.is_zero():
            raise NonUnitDivision("constant term of divisor is zero")
        prec = self._prec(other)
        if prec is None:
            raise ValueError("dividing exact polynomials needs an explicit precision")
        inv0 = c0.inverse()
        out = []
        for n in range(prec):
            acc = self[n]
            for j in range(1, n + 1):
                acc = acc - other[j] * out[n - j]
            out.append(acc * inv0)
        return XSeries(out, prec)

    def equal_to(self, other, order: int) -> bool:
        """Coefficient-wise equality through x^order inclusive."""
        other = _as_series(other)
        return all(self[i] == other[i] for i in range(order + 1))

    def __eq__(self, other):
        other = _as_series(other)
        if self.prec != other.prec:
            return False
        return self.coeffs == other.coeffs

    def evaluate(self, x):
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def evaluate_complex(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c.to_complex()
        return out

    def __repr__(self):
        body = " + ".join(f"({c})*x^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()) or "0"
        return body if self.prec is None else f"{body} + O(x^{self.prec})"


def _as_series(x) -> XSeries:
    if isinstance(x, XSeries):
        return x
    return XSeries([x], None)


XPolynomial = XSeries.poly
X = XSeries([ZERO, ONE], None)

"""Integer polynomials in q and Laurent polynomials in v (v^2 = q)."""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

__all__ = ["LaurentPoly", "Poly"]


class LaurentPoly:
    """
    Immutable integer Laurent polynomial, stored as ``{exponent: coefficient}``
    without zero entries.

    >>> v = LaurentPoly({1: 1})
    >>> (v + v.bar()) * (v + v.bar())
    LaurentPoly('v^-2 + 2 + v^2')
    """
    var = "v"
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c = {int(k): int(c) for k, c in (coeffs or {}).items() if c}

    @classmethod
    def from_array(cls, arr: Iterable[int], offset: int = 0):
        """Coefficient array whose entry i is the coefficient of var^(i + offset)."""
        return cls({i + offset: int(c) for i, c in enumerate(arr) if c})

    @classmethod
    def constant(cls, c: int):
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = type(self).constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def max_exponent(self) -> float:
        return max(self._c) if self._c else float("-inf")

    def min_exponent(self) -> float:
        return min(self._c) if self._c else float("inf")

    def __add__(self, other):
        if isinstance(other, int):
            other = type(self).constant(other)
        out = dict(self._c)
        for k, c in other._c.items():
            out[k] = out.get(k, 0) + c
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({k: -c for k, c in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)({k: c * other for k, c in self._c.items()})
        out: dict[int, int] = {}
        for a, c in self._c.items():
            for b, d in other._c.items():
                out[a + b] = out.get(a + b, 0) + c * d
        return type(self)(out)

    __rmul__ = __mul__

    def bar(self):
        """v -> v^-1."""
        return type(self)({-k: c for k, c in self._c.items()})

    def __call__(self, value):
        return sum(c * value ** k for k, c in self._c.items())

    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self._c.values())

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k in sorted(self._c):
            c = self._c[k]
            if k == 0:
                mono = str(abs(c))
            else:
                x = self.var if k == 1 else f"{self.var}^{k}"
                mono = x if abs(c) == 1 else f"{abs(c)}*{x}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, mono))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, mono in terms[1:]:
            s += f" {sign} {mono}"
        return s

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class Poly(LaurentPoly):
    """
    Ordinary polynomial in q (no negative exponents). ``degree`` of the zero
    polynomial is ``-inf``.

    >>> Poly([1, 1])
    Poly('1 + q')
    """
    var = "q"
    __slots__ = ()

    def __init__(self, coeffs: Mapping[int, int] | Iterable[int] | None = None):
        if coeffs is not None and not isinstance(coeffs, Mapping):
            coeffs = {i: c for i, c in enumerate(coeffs)}
        super().__init__(coeffs)
        if any(k < 0 for k in self._c):
            raise ValueError("Poly cannot carry negative exponents")

    @property
    def degree(self) -> float:
        return self.max_exponent()

    def to_list(self) -> list[int]:
        if not self._c:
            return []
        return [self._c.get(i, 0) for i in range(max(self._c) + 1)]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_list(), dtype=np.int64)

    def bar(self):
        raise TypeError("bar involution leaves Z[q]; convert to LaurentPoly first")

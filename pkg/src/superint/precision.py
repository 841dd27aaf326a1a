"""Arbitrary-precision scalars and the numeric kernels every other module uses.

Values are immutable.  All multiprecision arithmetic goes through mpmath with
an explicit working precision, so results are deterministic and independent
of any global context the caller may have set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .errors import TruncationCapExceeded

DEFAULT_BITS = 256
DEFAULT_GUARD_BITS = 32
DEFAULT_TRUNCATION_CAP = 512


@dataclass(frozen=True)
class Precision:
    """Working precision: mantissa bits, guard bits for stopping rules, series cap."""

    bits: int = DEFAULT_BITS
    guard_bits: int = DEFAULT_GUARD_BITS
    truncation_cap: int = DEFAULT_TRUNCATION_CAP

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")
        if self.truncation_cap < 8:
            raise ValueError("truncation_cap must be at least 8")

    @property
    def work_bits(self) -> int:
        return self.bits + self.guard_bits


DEFAULT_PRECISION = Precision()


def _to_mpf_exact(x):
    """Convert a Python number (or decimal string) to mpf at ambient precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


def to_mpc_any(x) -> mpc:
    """Convert any supported scalar to mpc at the ambient working precision."""
    if isinstance(x, BigComplex):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / mpf(x.denominator))
    if hasattr(x, "to_mpc"):
        return x.to_mpc()
    return mpc(x)


class BigComplex:
    """Immutable complex number with explicit mantissa precision.

    Arithmetic between two BigComplex values is carried out at (and the result
    tagged with) the minimum of the operand precisions.  Exact Python numbers
    (int, Fraction) adopt the other operand's precision.
    """

    __slots__ = ("re", "im", "bits")

    def __init__(self, re=0, im=0, bits: int = DEFAULT_BITS):
        if bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if isinstance(re, BigComplex):
            im = re.im if im == 0 else im
            re = re.re
        if isinstance(re, (complex, mpc)):
            if im != 0:
                raise ValueError("cannot combine complex re with nonzero im")
            re, im = re.real, re.imag
        with mp.workprec(bits):
            object.__setattr__(self, "re", +_to_mpf_exact(re))
            object.__setattr__(self, "im", +_to_mpf_exact(im))
            object.__setattr__(self, "bits", bits)

    def __setattr__(self, *_):
        raise AttributeError("BigComplex is immutable")

    # -- conversions ---------------------------------------------------------

    @classmethod
    def from_mpc(cls, z, bits: int) -> "BigComplex":
        out = object.__new__(cls)
        with mp.workprec(bits):
            object.__setattr__(out, "re", +mpf(z.real))
            object.__setattr__(out, "im", +mpf(z.imag))
        object.__setattr__(out, "bits", bits)
        return out

    def to_mpc(self) -> mpc:
        # raw construction: mpc(re, im) would round to the ambient context
        return mp.make_mpc((self.re._mpf_, self.im._mpf_))

    def to_json(self) -> dict:
        dps = decimal_digits(self.bits)
        return {
            "re": mp.nstr(self.re, dps, strip_zeros=True),
            "im": mp.nstr(self.im, dps, strip_zeros=True),
            "bits": self.bits,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BigComplex":
        bits = int(obj.get("bits", DEFAULT_BITS))
        out = object.__new__(cls)
        with mp.workprec(bits):
            object.__setattr__(out, "re", mpf(str(obj["re"])))
            object.__setattr__(out, "im", mpf(str(obj.get("im", "0"))))
        object.__setattr__(out, "bits", bits)
        return out

    # -- arithmetic ----------------------------------------------------------

    def _binop(self, other, op):
        if isinstance(other, BigComplex):
            bits = min(self.bits, other.bits)
            other_raw = other.to_mpc()
        elif isinstance(other, (int, float, complex, Fraction, mpf, mpc)):
            bits = self.bits
            other_raw = other
        else:
            return NotImplemented
        with mp.workprec(bits):
            if isinstance(other_raw, (complex, mpc)):
                other_raw = mpc(other_raw)
            else:
                other_raw = mpc(_to_mpf_exact(other_raw))
            return BigComplex.from_mpc(op(self.to_mpc(), other_raw), bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        with mp.workprec(self.bits):
            return BigComplex.from_mpc(self.to_mpc() ** k, self.bits)

    def __neg__(self):
        return BigComplex.from_mpc(-self.to_mpc(), self.bits)

    def conjugate(self) -> "BigComplex":
        out = object.__new__(BigComplex)
        object.__setattr__(out, "re", self.re)
        object.__setattr__(out, "im", -self.im)
        object.__setattr__(out, "bits", self.bits)
        return out

    def __abs__(self):
        with mp.workprec(self.bits):
            return abs(self.to_mpc())

    def __eq__(self, other):
        if isinstance(other, BigComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, float, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"BigComplex({mp.nstr(self.re, 12)}, {mp.nstr(self.im, 12)}, bits={self.bits})"


def decimal_digits(bits: int) -> int:
    """Decimal digits that faithfully represent a mantissa of `bits` bits."""
    return int(math.ceil(bits * 0.30103)) + 3


def factorial(n: int) -> int:
    """Exact n! for n >= 0."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return math.factorial(n)


def inv_factorial(n: int) -> Fraction:
    """1/n! extended by 0 for negative n (the standard determinant convention)."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


def vandermonde(values, prec: Precision | None = None):
    """Product over i < j of (values[i] - values[j]); empty/singleton lists give 1.

    Exact inputs (int, Fraction) give an exact result; BigComplex inputs give a
    BigComplex at the minimum operand precision.
    """
    values = list(values)
    if len(values) <= 1:
        return 1
    if all(isinstance(v, (int, Fraction)) for v in values):
        out = 1
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                out *= values[i] - values[j]
        return out
    bits = min(
        [v.bits for v in values if isinstance(v, BigComplex)]
        + [prec.bits if prec else DEFAULT_BITS]
    )
    with mp.workprec(bits):
        out = mpc(1)
        vals = [v.to_mpc() if isinstance(v, BigComplex) else mpc(_to_mpf_exact(v)) for v in values]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                out *= vals[i] - vals[j]
    return BigComplex.from_mpc(out, bits)


# -- power series kernels ----------------------------------------------------


def _series_sum(term0, update, prec: Precision):
    """Adaptive partial sum: terms start at term0, update(k, term) -> term_{k+1}.

    Stops once two consecutive term magnitudes drop below 2^-(bits+guard)
    times the largest partial-sum magnitude seen so far (two, so that a
    single zero coefficient inside a series cannot end the sum early).
    Raises TruncationCapExceeded when the rule is not met within the cap.
    Returns (sum, terms_used).
    """
    threshold_exp = -(prec.bits + prec.guard_bits)
    with mp.workprec(prec.work_bits):
        total = mpc(0)
        term = term0
        max_mag = mpf(1)
        cutoff = mpf(2) ** threshold_exp
        small_run = 0
        for k in range(prec.truncation_cap):
            total += term
            mag = abs(total)
            if mag > max_mag:
                max_mag = mag
            if abs(term) < cutoff * max_mag:
                small_run += 1
                if small_run >= 2:
                    return total, k + 1
            else:
                small_run = 0
            term = update(k, term)
    raise TruncationCapExceeded(
        f"series did not converge within {prec.truncation_cap} terms"
    )


def bessel_ratio_raw(nu: int, w, prec: Precision):
    """Sum over k of w^k / (k! (k+nu)!) as an mpc, with the term count used."""
    if nu < 0:
        raise ValueError("order must be non-negative")
    with mp.workprec(prec.work_bits):
        w = mpc(w)
        term0 = mpc(1) / mp.factorial(nu)

        def update(k, term):
            return term * w / ((k + 1) * (k + 1 + nu))

        return _series_sum(term0, update, prec)


def bessel_ratio(nu: int, w, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """The even Bessel kernel: sum_k w^k / (k! (k+nu)!).

    At w = x^2 this equals x^-nu I_nu(2 x); the series is a function of w only,
    so no square roots (and no branch choices) ever enter.
    """
    wv = w.to_mpc() if isinstance(w, BigComplex) else w
    bits = w.bits if isinstance(w, BigComplex) else prec.bits
    bits = min(bits, prec.bits)
    total, _ = bessel_ratio_raw(nu, wv, prec)
    return BigComplex.from_mpc(total, bits)


def scaled_bessel_entry_raw(nu: int, beta, lambda_sq, prec: Precision):
    """lambda^nu I_nu(2 beta lambda) through lambda^2 only; nu may be negative.

    For nu >= 0 this is beta^nu (lambda^2)^nu R(nu, beta^2 lambda^2); negative
    orders use I_{-nu} = I_nu, which cancels the lambda power exactly:
    lambda^-s I_s(2 beta lambda) = beta^s R(s, beta^2 lambda^2).
    Returns (value, series terms used).
    """
    with mp.workprec(prec.work_bits):
        beta = mpc(beta)
        lam2 = mpc(lambda_sq)
        if nu >= 0:
            if nu == 0:
                return bessel_ratio_raw(0, beta * beta * lam2, prec)
            core, terms = bessel_ratio_raw(nu, beta * beta * lam2, prec)
            return (beta ** nu) * (lam2 ** nu) * core, terms
        s = -nu
        core, terms = bessel_ratio_raw(s, beta * beta * lam2, prec)
        return (beta ** s) * core, terms


def scaled_bessel_entry(
    nu: int, beta, lambda_sq, prec: Precision = DEFAULT_PRECISION
) -> BigComplex:
    """Determinant entry lambda^nu I_nu(2 beta lambda), evaluated via lambda^2.

    The order-zero entry takes literally the same path as bessel_ratio on
    beta^2 lambda^2, so the two are bit-identical.
    """
    if nu < 0:
        raise ValueError("order must be non-negative")
    b = beta if isinstance(beta, BigComplex) else BigComplex(beta, bits=prec.bits)
    l2 = lambda_sq if isinstance(lambda_sq, BigComplex) else BigComplex(lambda_sq, bits=prec.bits)
    w = b * b * l2
    core = bessel_ratio(nu, w, prec)
    if nu == 0:
        return core
    return (b ** nu) * (l2 ** nu) * core


# -- determinants ------------------------------------------------------------


def det_mpc(rows, prec: Precision):
    """Partial-pivoted elimination determinant of a square mpc matrix."""
    n = len(rows)
    if n == 0:
        return mpc(1)
    with mp.workprec(prec.work_bits):
        a = [[mpc(x) for x in row] for row in rows]
        det = mpc(1)
        for c in range(n):
            pivot = max(range(c, n), key=lambda r: abs(a[r][c]))
            if abs(a[pivot][c]) == 0:
                return mpc(0)
            if pivot != c:
                a[c], a[pivot] = a[pivot], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f == 0:
                    continue
                for cc in range(c, n):
                    a[r][cc] -= f * a[c][cc]
        return det


def det_cofactor(rows):
    """Cofactor-expansion determinant; exact for exact entries.

    Kept as an independent oracle for small matrices (intended n <= 4, but the
    recursion is generic).
    """
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * det_cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def exact_determinant(rows):
    """Fraction-arithmetic Gaussian elimination determinant (exact)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f == 0:
                continue
            for cc in range(c, n):
                a[r][cc] -= f * a[c][cc]
    return det


def determinant(matrix, prec: Precision = DEFAULT_PRECISION, method: str = "elimination") -> BigComplex:
    """Determinant of a square BigComplex matrix.

    method="elimination" uses partial-pivoted elimination at working precision;
    method="cofactor" (n <= 4) is the exact-expansion cross-check oracle.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix must be square")
    bits = min(
        [prec.bits] + [x.bits for row in matrix for x in row if isinstance(x, BigComplex)]
    )
    with mp.workprec(prec.work_bits):
        rows = [
            [x.to_mpc() if isinstance(x, BigComplex) else mpc(_to_mpf_exact(x)) for x in row]
            for row in matrix
        ]
    if method == "cofactor":
        if n > 4:
            raise ValueError("cofactor mode is limited to n <= 4")
        with mp.workprec(prec.work_bits):
            return BigComplex.from_mpc(det_cofactor(rows) if n else mpc(1), bits)
    if method != "elimination":
        raise ValueError(f"unknown determinant method {method!r}")
    return BigComplex.from_mpc(det_mpc(rows, prec), bits)

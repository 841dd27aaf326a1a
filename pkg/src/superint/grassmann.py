"""Finite Grassmann algebra, Berezin integration and block supermatrices.

Generators come in conjugate pairs ordered a_0 < a_0* < a_1 < a_1* < ...;
generator 2i is a_i and generator 2i+1 is its star partner.  Monomials are
stored as ascending index tuples; every sign in the algebra derives from that
total order, so results are bit-for-bit reproducible.

Coefficients may be exact (int, Fraction) or multiprecision complex; all
operations are coefficient-ring agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc

from .errors import GeneratorMismatch, NonInvertibleBody
from .precision import DEFAULT_PRECISION, BigComplex, Precision


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("GaussianRational is immutable")

    def _lift(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return self.to_mpc() + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, GaussianRational) else -1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return self.to_mpc() * other
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return self.to_mpc() / other
        norm = o.re * o.re + o.im * o.im
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return self.to_mpc() == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_mpc(self) -> mpc:
        return mpc(mp.mpf(self.re.numerator) / mp.mpf(self.re.denominator),
                   mp.mpf(self.im.numerator) / mp.mpf(self.im.denominator))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I_EXACT = GaussianRational(0, 1)


def _conj_scalar(c):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, (BigComplex, GaussianRational)):
        return c.conjugate()
    return mpc(c).conjugate()


def _merge_sign(left: tuple, right: tuple):
    """Concatenate two ascending monomials; None if a generator repeats.

    Returns (merged ascending tuple, sign of the sorting permutation).
    """
    sign = 1
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] == right[j]:
            return None, 0
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        else:
            # right[j] moves past the remaining len(left)-i left generators
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return tuple(merged), sign


class GrassmannElement:
    """Multivector in a finite Grassmann algebra with a fixed generator count."""

    __slots__ = ("generator_count", "terms")

    def __init__(self, generator_count: int, terms: dict | None = None):
        if generator_count % 2:
            raise ValueError("generator count must be even (conjugate pairs)")
        object.__setattr__(self, "generator_count", generator_count)
        clean = {}
        for mono, coeff in (terms or {}).items():
            if _is_zero_scalar(coeff):
                continue
            clean[tuple(mono)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("GrassmannElement is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def scalar(cls, g: int, value) -> "GrassmannElement":
        return cls(g, {(): value})

    @classmethod
    def generator(cls, g: int, index: int) -> "GrassmannElement":
        if not 0 <= index < g:
            raise ValueError("generator index out of range")
        return cls(g, {(index,): 1})

    # -- structure -----------------------------------------------------------

    @property
    def body(self):
        return self.terms.get((), 0)

    def soul(self) -> "GrassmannElement":
        return GrassmannElement(
            self.generator_count, {m: c for m, c in self.terms.items() if m}
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int | None:
        """0 for even, 1 for odd, None for mixed or zero-with-no-terms."""
        if not self.terms:
            return 0
        parities = {len(m) % 2 for m in self.terms}
        return parities.pop() if len(parities) == 1 else None

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "GrassmannElement"):
        if self.generator_count != other.generator_count:
            raise GeneratorMismatch(
                f"{self.generator_count} vs {other.generator_count} generators"
            )

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(self.generator_count, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m, 0) + c
            if _is_zero_scalar(acc):
                terms.pop(m, None)
            else:
                terms[m] = acc
        return GrassmannElement(self.generator_count, terms)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(
            self.generator_count, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(self.generator_count, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            return GrassmannElement(
                self.generator_count,
                {m: c * other for m, c in self.terms.items()},
            )
        self._check(other)
        terms: dict = {}
        for ml, cl in self.terms.items():
            for mr, cr in other.terms.items():
                merged, sign = _merge_sign(ml, mr)
                if merged is None:
                    continue
                acc = terms.get(merged, 0) + sign * cl * cr
                if _is_zero_scalar(acc):
                    terms.pop(merged, None)
                else:
                    terms[merged] = acc
        return GrassmannElement(self.generator_count, terms)

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def conjugate(self) -> "GrassmannElement":
        """Antilinear involution: (xy)* = y* x*, star swaps each generator pair."""
        terms: dict = {}
        for mono, coeff in self.terms.items():
            starred = tuple(idx ^ 1 for idx in reversed(mono))
            canon, sign = _sort_sign(starred)
            if canon is None:
                continue
            acc = terms.get(canon, 0) + sign * _conj_scalar(coeff)
            if _is_zero_scalar(acc):
                terms.pop(canon, None)
            else:
                terms[canon] = acc
        return GrassmannElement(self.generator_count, terms)

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return (
                self.generator_count == other.generator_count
                and self.terms == other.terms
            )
        return self.soul().is_zero and self.body == other

    def __hash__(self):
        return hash((self.generator_count, frozenset(self.terms.items())))

    def debug_terms(self):
        """Sorted (monomial, coefficient) pairs; not a stability guarantee."""
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __repr__(self):
        if not self.terms:
            return "GrassmannElement(0)"
        bits = []
        for mono, coeff in self.debug_terms():
            name = "".join(f"a{i // 2}{'*' if i % 2 else ''}" for i in mono) or "1"
            bits.append(f"({coeff})*{name}")
        return " + ".join(bits)


def _is_zero_scalar(c) -> bool:
    if isinstance(c, BigComplex):
        return c.is_zero
    if isinstance(c, GaussianRational):
        return c.re == 0 and c.im == 0
    return c == 0


def _sort_sign(mono: tuple):
    """Sort a repeat-free monomial into ascending order, tracking the sign."""
    lst = list(mono)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(lst, lst[1:]):
        if a == b:
            return None, 0
    return tuple(lst), sign


def multiply(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Grassmann product (also available as the * operator)."""
    return x * y


def conjugate(x: GrassmannElement) -> GrassmannElement:
    return x.conjugate()


def berezin_integrate(x: GrassmannElement, order) -> GrassmannElement:
    """Iterated Berezin integral, innermost (rightmost in `order`) first.

    For each generator: monomials not containing it are dropped; in the rest
    the generator is anticommuted to the front and removed.
    """
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("integration generators must be distinct")
    current = x
    for gen in reversed(order):
        terms: dict = {}
        for mono, coeff in current.terms.items():
            if gen not in mono:
                continue
            pos = mono.index(gen)
            sign = -1 if pos % 2 else 1
            rest = mono[:pos] + mono[pos + 1 :]
            acc = terms.get(rest, 0) + sign * coeff
            if _is_zero_scalar(acc):
                terms.pop(rest, None)
            else:
                terms[rest] = acc
        current = GrassmannElement(x.generator_count, terms)
    return current


# -- even-element calculus -----------------------------------------------------


class EvenElement:
    """Even multivector: an ordinary body plus a nilpotent soul."""

    __slots__ = ("element",)

    def __init__(self, element: GrassmannElement):
        if element.parity() not in (0,):
            raise ValueError("element is not purely even")
        object.__setattr__(self, "element", element)

    def __setattr__(self, *_):
        raise AttributeError("EvenElement is immutable")

    @classmethod
    def scalar(cls, g: int, value) -> "EvenElement":
        return cls(GrassmannElement.scalar(g, value))

    @property
    def body(self):
        return self.element.body

    def soul(self) -> GrassmannElement:
        return self.element.soul()

    @property
    def generator_count(self):
        return self.element.generator_count

    def _lift(self, other) -> "EvenElement":
        if isinstance(other, EvenElement):
            return other
        if isinstance(other, GrassmannElement):
            return EvenElement(other)
        return EvenElement.scalar(self.generator_count, other)

    def __add__(self, other):
        return EvenElement(self.element + self._lift(other).element)

    __radd__ = __add__

    def __sub__(self, other):
        return EvenElement(self.element - self._lift(other).element)

    def __rsub__(self, other):
        return EvenElement(self._lift(other).element - self.element)

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return self.element * other
        if isinstance(other, EvenElement):
            return EvenElement(self.element * other.element)
        return EvenElement(self.element * other)

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        return EvenElement(-self.element)

    def __eq__(self, other):
        if isinstance(other, EvenElement):
            return self.element == other.element
        return self.element == other

    def __hash__(self):
        return hash(self.element)

    def __repr__(self):
        return f"Even[{self.element!r}]"


def even_inverse(w: EvenElement) -> EvenElement:
    """Exact inverse via the terminating geometric series around the body."""
    body = w.body
    if _is_zero_scalar(body):
        raise NonInvertibleBody("even element has zero body")
    g = w.generator_count
    inv_body = _scalar_inverse(body)
    s = w.soul() * inv_body  # w = body (1 + s)
    out = GrassmannElement.scalar(g, 1)
    power = GrassmannElement.scalar(g, 1)
    k = 0
    while True:
        power = power * s
        k += 1
        if power.is_zero:
            break
        out = out + ((-1) ** k) * power
    return EvenElement(out * inv_body)


def _scalar_inverse(c):
    if isinstance(c, int):
        return Fraction(1, c)
    if isinstance(c, Fraction):
        return 1 / c
    if isinstance(c, BigComplex):
        return 1 / c
    return 1 / mpc(c)


@dataclass(frozen=True)
class SeriesFunction:
    """Power series around zero given by an exact coefficient callable."""

    coefficient: object  # callable k -> coefficient

    def derivative(self) -> "SeriesFunction":
        coeff = self.coefficient
        return SeriesFunction(lambda k: (k + 1) * coeff(k + 1))

    def eval_at(self, body, prec: Precision):
        """Adaptive evaluation at an ordinary (complex) point."""
        from .precision import _series_sum, to_mpc_any

        coeff = self.coefficient
        with mp.workprec(prec.work_bits):
            b = to_mpc_any(body)
            state = {"pow": mpc(1)}

            def update(k, _term):
                state["pow"] *= b
                return mpc(_frac_to_mpf(coeff(k + 1))) * state["pow"]

            term0 = mpc(_frac_to_mpf(coeff(0)))
            total, _ = _series_sum(term0, update, prec)
            return total


def _frac_to_mpf(c):
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / mp.mpf(c.denominator)
    if isinstance(c, (BigComplex, GaussianRational)):
        return c.to_mpc()
    return c


def bessel_series(nu: int) -> SeriesFunction:
    """Coefficient stream of the even Bessel kernel sum_k w^k/(k!(k+nu)!)."""
    from .precision import inv_factorial

    return SeriesFunction(lambda k: inv_factorial(k) * inv_factorial(k + nu))


def analytic_eval(series: SeriesFunction, w: EvenElement, prec: Precision = DEFAULT_PRECISION) -> EvenElement:
    """f(body + soul) = sum_j f^(j)(body) soul^j / j!, exact in the soul.

    The soul expansion terminates by nilpotency; each derivative value at the
    body is evaluated adaptively under the precision's truncation rules.
    """
    g = w.generator_count
    body = w.body
    soul = w.soul()
    out = GrassmannElement.scalar(g, series.eval_at(body, prec))
    power = GrassmannElement.scalar(g, 1)
    deriv = series
    jfact = 1
    for j in range(1, g // 2 + 1):
        power = power * soul
        if power.is_zero:
            break
        deriv = deriv.derivative()
        jfact *= j
        coeff = deriv.eval_at(body, prec) / jfact
        out = out + power * coeff
    return EvenElement(out)


# -- block supermatrices --------------------------------------------------------


class SuperMatrixSym:
    """(m+n) x (m+n) matrix over the algebra with block-consistent parity."""

    __slots__ = ("m", "n", "entries", "generator_count")

    def __init__(self, m: int, n: int, entries, check_parity: bool = True):
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != m + n or any(len(r) != m + n for r in rows):
            raise ValueError("entries must form an (m+n) x (m+n) matrix")
        g = rows[0][0].generator_count
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "generator_count", g)
        if check_parity:
            for i, row in enumerate(rows):
                for j, e in enumerate(row):
                    want = 0 if (i < m) == (j < m) else 1
                    par = e.parity()
                    if par is not None and par != want and not e.is_zero:
                        raise ValueError(f"entry ({i},{j}) has wrong parity")

    def __setattr__(self, *_):
        raise AttributeError("SuperMatrixSym is immutable")

    @classmethod
    def identity(cls, m: int, n: int, g: int) -> "SuperMatrixSym":
        size = m + n
        rows = [
            [GrassmannElement.scalar(g, 1 if i == j else 0) for j in range(size)]
            for i in range(size)
        ]
        return cls(m, n, rows)

    @classmethod
    def diagonal(cls, m: int, n: int, g: int, values) -> "SuperMatrixSym":
        size = m + n
        values = list(values)
        if len(values) != size:
            raise ValueError("need m+n diagonal values")
        rows = [
            [
                GrassmannElement.scalar(g, values[i] if i == j else 0)
                for j in range(size)
            ]
            for i in range(size)
        ]
        return cls(m, n, rows)

    def __matmul__(self, other: "SuperMatrixSym") -> "SuperMatrixSym":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("block shapes differ")
        size = self.m + self.n
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                acc = GrassmannElement.scalar(self.generator_count, 0)
                for k in range(size):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return SuperMatrixSym(self.m, self.n, rows, check_parity=False)

    def __add__(self, other: "SuperMatrixSym") -> "SuperMatrixSym":
        size = self.m + self.n
        rows = [
            [self.entries[i][j] + other.entries[i][j] for j in range(size)]
            for i in range(size)
        ]
        return SuperMatrixSym(self.m, self.n, rows, check_parity=False)

    def scale(self, c) -> "SuperMatrixSym":
        size = self.m + self.n
        rows = [[self.entries[i][j] * c for j in range(size)] for i in range(size)]
        return SuperMatrixSym(self.m, self.n, rows, check_parity=False)

    def adjoint(self) -> "SuperMatrixSym":
        size = self.m + self.n
        rows = [
            [self.entries[j][i].conjugate() for j in range(size)] for i in range(size)
        ]
        return SuperMatrixSym(self.m, self.n, rows, check_parity=False)

    def block(self, which: str):
        m, n = self.m, self.n
        if which == "bb":
            return [[self.entries[i][j] for j in range(m)] for i in range(m)]
        if which == "bf":
            return [[self.entries[i][m + j] for j in range(n)] for i in range(m)]
        if which == "fb":
            return [[self.entries[m + i][j] for j in range(m)] for i in range(n)]
        if which == "ff":
            return [[self.entries[m + i][m + j] for j in range(n)] for i in range(n)]
        raise ValueError(which)

    def is_identity(self) -> bool:
        size = self.m + self.n
        for i in range(size):
            for j in range(size):
                e = self.entries[i][j]
                if i == j:
                    if not (e - 1).is_zero:
                        return False
                elif not e.is_zero:
                    return False
        return True


def supertrace(M: SuperMatrixSym) -> GrassmannElement:
    """Trace of the boson block minus trace of the fermion block."""
    acc = GrassmannElement.scalar(M.generator_count, 0)
    for i in range(M.m):
        acc = acc + M.entries[i][i]
    for j in range(M.n):
        acc = acc - M.entries[M.m + j][M.m + j]
    return acc


def _even_matrix_det(rows) -> GrassmannElement:
    """Cofactor determinant of a small matrix with even (commuting) entries."""
    k = len(rows)
    if k == 0:
        raise ValueError("empty matrix")
    if k == 1:
        return rows[0][0]
    g = rows[0][0].generator_count
    acc = GrassmannElement.scalar(g, 0)
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * _even_matrix_det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def superdeterminant(M: SuperMatrixSym) -> EvenElement:
    """det(A - B D^-1 C) / det(D) in block form; needs det(D) with invertible body."""
    m, n = M.m, M.n
    g = M.generator_count
    A, B, C, D = M.block("bb"), M.block("bf"), M.block("fb"), M.block("ff")
    det_d = EvenElement(_even_matrix_det(D))
    inv_det_d = even_inverse(det_d)
    # D^-1 by the adjugate
    if n == 1:
        Dinv = [[inv_det_d.element]]
    else:
        Dinv = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [
                    [D[r][c] for c in range(n) if c != i] for r in range(n) if r != j
                ]
                cof = _even_matrix_det(minor)
                if (i + j) % 2:
                    cof = -cof
                row.append(cof * inv_det_d.element)
            Dinv.append(row)
    # A - B Dinv C
    top = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = A[i][j]
            for r in range(n):
                for s in range(n):
                    acc = acc - B[i][r] * Dinv[r][s] * C[s][j]
            row.append(acc)
        top.append(row)
    return EvenElement(_even_matrix_det(top)) * inv_det_d


def exp_odd_block(alphas) -> SuperMatrixSym:
    """exp of the off-diagonal supermatrix with upper block i*alpha, lower i*alpha*.

    alphas is an m x n array of odd elements; nilpotency terminates the series.
    Coefficients stay exact (Gaussian rationals over the input ring).
    """
    m, n = len(alphas), len(alphas[0])
    g = alphas[0][0].generator_count
    size = m + n
    zero = GrassmannElement.scalar(g, 0)
    i_unit = I_EXACT
    omega_rows = [[zero for _ in range(size)] for _ in range(size)]
    for a in range(m):
        for b in range(n):
            al = alphas[a][b]
            if al.parity() not in (1,) and not al.is_zero:
                raise ValueError("exponent entries must be odd")
            omega_rows[a][m + b] = al * i_unit
            omega_rows[m + b][a] = al.conjugate() * i_unit
    omega = SuperMatrixSym(m, n, omega_rows, check_parity=False)
    out = SuperMatrixSym.identity(m, n, g)
    power = SuperMatrixSym.identity(m, n, g)
    kfact = 1
    for k in range(1, 2 * m * n + 2):
        power = power @ omega
        if all(e.is_zero for row in power.entries for e in row):
            break
        kfact *= k
        out = out + power.scale(Fraction(1, kfact))
    return out


def diagonalize_1p1(M: SuperMatrixSym):
    """Explicit diagonalization of a (1+1) supermatrix with separated blocks.

    Returns (V, M_D, V_inv) with V_inv @ M_D @ V == M exactly.  The
    eigenvector-normalizing matrix pair is oriented so that reconstruction
    holds with V_inv on the left (conjugating the other way flips the sign
    of the odd entries).  Raises NonInvertibleBody when the two diagonal
    entries agree up to nilpotents.
    """
    if (M.m, M.n) != (1, 1):
        raise ValueError("only (1+1)-dimensional supermatrices")
    g = M.generator_count
    a, al = M.entries[0][0], M.entries[0][1]
    be, b = M.entries[1][0], M.entries[1][1]
    d = EvenElement(a - b)
    dinv = even_inverse(d).element
    dinv2 = dinv * dinv
    alb = al * be  # even nilpotent
    one = GrassmannElement.scalar(g, 1)
    half = Fraction(1, 2)
    v = SuperMatrixSym(
        1,
        1,
        [
            [one - alb * dinv2 * half, al * dinv],
            [-(be * dinv), one + alb * dinv2 * half],
        ],
        check_parity=False,
    )
    v_inv = SuperMatrixSym(
        1,
        1,
        [
            [one - alb * dinv2 * half, -(al * dinv)],
            [be * dinv, one + alb * dinv2 * half],
        ],
        check_parity=False,
    )
    shift = alb * dinv
    m_d = SuperMatrixSym(
        1,
        1,
        [
            [a + shift, GrassmannElement.scalar(g, 0)],
            [GrassmannElement.scalar(g, 0), b + shift],
        ],
        check_parity=False,
    )
    return v, m_d, v_inv

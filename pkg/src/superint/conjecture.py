"""Power-series identity experiments and the exact combinatorial cross-checks.

The two series under test are the antisymmetric multi-index series

    J0 = sum_k Delta(k) / prod (k_i!)^2  z^k

and its split form Jm carrying Delta(k_a) Delta(k_b) with the cross factors
prod (z_i - z_j)/(k_i + k_j + 1).  Truncating every index at K, both reduce
exactly (finite rearrangement, no limits) to small determinants:

* J0 is the determinant of truncated ratio-of-Bessel-type columns, via the
  ordered-sum rearrangement and the factorial-ratio determinant identity.
* Jm uses a bordered Cauchy kernel: prod 1/(k_i + k_j + 1) times the two
  block Vandermondes is itself a determinant whose rows mix the coupled
  double series with plain moment columns, so the free multi-index sum
  factorizes into a single max(m, n)-sized determinant.

Both reductions are covered by brute-force multi-loop oracles in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from mpmath import mp, mpc, mpf

from .errors import TruncationCapExceeded
from .partitions import (
    Partition,
    assemble,
    norm_alpha,
    partitions_of,
    sigma_coefficient,
    super_diagrams,
)
from .precision import (
    DEFAULT_PRECISION,
    BigComplex,
    Precision,
    _to_mpf_exact,
    det_mpc,
    exact_determinant,
    inv_factorial,
)
from .schur import lr_coefficient, super_schur_tableaux

# -- deterministic sampling ----------------------------------------------------

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def splitmix64(seed: int, counter: int) -> int:
    """Counter-based 64-bit generator: splitmix64 stream at position `counter`.

    The value is the splitmix64 finalizer (Stafford mix13) applied to
    seed + counter * golden-gamma, all mod 2^64.  Pure function of its inputs,
    so samples indexed (seed, sample, coordinate) parallelize reproducibly.
    """
    x = (seed + counter * _GOLDEN) & _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    x ^= x >> 31
    return x


def unit_double(seed: int, counter: int) -> float:
    """Uniform double in [0, 1) from the top 53 bits of the stream value."""
    return (splitmix64(seed, counter) >> 11) * (2.0 ** -53)


def _coord_counter(sample_index: int, coordinate: int, part: int) -> int:
    return (sample_index << 21) | (coordinate << 1) | part


def sample_disk(seed: int, sample_index: int, coordinate: int, radius, bits: int) -> BigComplex:
    """Uniform draw from the complex disk of the given radius (area-uniform)."""
    u = unit_double(seed, _coord_counter(sample_index, coordinate, 0))
    v = unit_double(seed, _coord_counter(sample_index, coordinate, 1))
    with mp.workprec(bits):
        r = _to_mpf_exact(radius) * mp.sqrt(mpf(u))
        theta = 2 * mp.pi * mpf(v)
        return BigComplex.from_mpc(mpc(r * mp.cos(theta), r * mp.sin(theta)), bits)


# -- truncated series ----------------------------------------------------------


def _require_cap(depth: int, prec: Precision):
    if depth + 1 > prec.truncation_cap:
        raise TruncationCapExceeded(
            f"requested truncation depth {depth} exceeds the cap {prec.truncation_cap}"
        )


def _to_mpc(z):
    return z.to_mpc() if isinstance(z, BigComplex) else mpc(z)


def j0_truncated(z, K: int, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Box-truncated antisymmetric series, all indices bounded by K.

    Evaluated as det[f_i(z_j)] with f_i(z) = sum_{k<=K} z^k / (k! (k-N+i)!)
    (negative factorials giving zero terms); this equals the truncated
    multi-index sum exactly.
    """
    zs = [_to_mpc(v) for v in z]
    N = len(zs)
    if N < 1:
        raise ValueError("need at least one variable")
    _require_cap(K, prec)
    with mp.workprec(prec.work_bits):
        rows = []
        for i in range(1, N + 1):
            row = []
            for zz in zs:
                lo = max(0, N - i)
                term = mpc(1) / (mp.factorial(lo) * mp.factorial(lo - N + i)) * zz ** lo
                acc = term
                for k in range(lo + 1, K + 1):
                    term = term * zz / (k * (k - N + i))
                    acc += term
                row.append(acc)
            rows.append(row)
        return BigComplex.from_mpc(det_mpc(rows, prec), prec.bits)


def jm_truncated(z, m: int, K: int, prec: Precision = DEFAULT_PRECISION) -> BigComplex:
    """Box-truncated split series with the block cross factors.

    Reduces exactly to cross-product times a bordered-kernel determinant whose
    coupled entries are the K-truncated double series
    sum z^k w^l / ((k!)^2 (l!)^2 (k+l+1)) and whose remaining columns are the
    moment sums sum k^d z^k / (k!)^2.
    """
    zs = [_to_mpc(v) for v in z]
    N = len(zs)
    if not 1 <= m <= N:
        raise ValueError("block size must satisfy 1 <= m <= N")
    n = N - m
    if n == 0:
        return j0_truncated(z, K, prec)
    _require_cap(K, prec)
    with mp.workprec(prec.work_bits):
        cross = mpc(1)
        for i in range(m):
            for j in range(m, N):
                cross *= zs[i] - zs[j]
        if m >= n:
            big, small = zs[:m], zs[m:]
        else:
            big, small = zs[m:], zs[:m]
        nb, ns = len(big), len(small)

        def weights(v):
            w = [mpc(1)]
            for k in range(1, K + 1):
                w.append(w[-1] * v / (k * k))
            return w

        wb = [weights(v) for v in big]
        ws = [weights(v) for v in small]
        recip = [mpf(1) / (s + 1) for s in range(2 * K + 1)]
        # s_tab[j][k] = sum_l ws[j][l] / (k + l + 1)
        s_tab = [[mp.fsum(wsj[l] * recip[k + l] for l in range(K + 1)) for k in range(K + 1)] for wsj in ws]
        rows = []
        for i in range(nb):
            row = [mp.fsum(wb[i][k] * s_tab[j][k] for k in range(K + 1)) for j in range(ns)]
            for d in range(nb - ns):
                row.append(mp.fsum(wb[i][k] * (k ** d) for k in range(K + 1)))
            rows.append(row)
        dd = nb - ns
        eps = -1 if (ns * dd + dd * (dd - 1) // 2) % 2 else 1
        return BigComplex.from_mpc(eps * cross * det_mpc(rows, prec), prec.bits)


def tail_bound(N: int, max_abs_z, K: int, prec: Precision = DEFAULT_PRECISION):
    """Crude rigorous bound on the discarded multi-index region of the J series.

    N * (max|z|)^(K+1) / ((K+1)!)^2 * (K+N)^(N(N-1)/2) * (1 + 2 max|z|)^(N^2):
    one index beyond K costs at least ((K+1)!)^-2 (max|z|)^(K+1); the
    combinatorial factor overestimates every Vandermonde and cross term, and
    the final power bounds the remaining geometric sums.
    """
    with mp.workprec(prec.work_bits):
        r = _to_mpf_exact(max_abs_z)
        val = N * r ** (K + 1) / mp.factorial(K + 1) ** 2
        val *= mpf(K + N) ** (N * (N - 1) // 2)
        val *= (1 + 2 * r) ** (N * N)
        return val


@dataclass
class ConjectureSample:
    z: list
    j0: BigComplex
    jm: BigComplex
    abs_diff: object
    rel_diff: object


@dataclass
class ConjectureReport:
    """Outcome of one seeded antisymmetric-vs-split series comparison."""

    N: int
    m: int
    seed: int
    precision_bits: int
    truncation_depth: int
    radius: str
    samples: list = field(default_factory=list)
    max_rel_diff: object = None
    tail_bound: object = None
    tolerance: object = None
    passed: bool = False

    def to_json(self) -> dict:
        def fmt(x):
            return mp.nstr(mpf(x), 10)

        return {
            "N": self.N,
            "m": self.m,
            "seed": self.seed,
            "precision_bits": self.precision_bits,
            "truncation_depth": self.truncation_depth,
            "radius": self.radius,
            "pass": self.passed,
            "max_rel_diff": fmt(self.max_rel_diff),
            "tail_bound": fmt(self.tail_bound),
            "tolerance": fmt(self.tolerance),
            "samples": [
                {
                    "z": [v.to_json() for v in s.z],
                    "j0": s.j0.to_json(),
                    "jm": s.jm.to_json(),
                    "abs_diff": fmt(s.abs_diff),
                    "rel_diff": fmt(s.rel_diff),
                }
                for s in self.samples
            ],
        }


def verify_conjecture(
    N: int,
    m: int,
    sample_count: int = 10,
    radius=2,
    seed: int = 42,
    prec: Precision = DEFAULT_PRECISION,
    K: int = 64,
    max_n: int = 10,
) -> ConjectureReport:
    """Compare the two truncated series on seeded samples from the complex disk."""
    if N < 1 or N > max_n:
        raise ValueError(f"N must lie in 1..{max_n}")
    if not 1 <= m <= N:
        raise ValueError("m must lie in 1..N")
    if Fraction(str(radius) if not isinstance(radius, (int, Fraction)) else radius) > 4:
        raise ValueError("radius must not exceed 4")
    report = ConjectureReport(
        N=N,
        m=m,
        seed=seed,
        precision_bits=prec.bits,
        truncation_depth=K,
        radius=str(radius),
    )
    bound = tail_bound(N, radius, K, prec)
    report.tail_bound = bound
    with mp.workprec(prec.work_bits):
        rounding_floor = mpf(2) ** (-(prec.bits - 48))
        max_rel = mpf(0)
        tolerance = mpf(0)
        passed = True
        for s in range(sample_count):
            z = [sample_disk(seed, s, c, radius, prec.bits) for c in range(N)]
            j0 = j0_truncated(z, K, prec)
            jm = jm_truncated(z, m, K, prec)
            adiff = abs(j0.to_mpc() - jm.to_mpc())
            scale = max(abs(j0.to_mpc()), mpf(2) ** (-prec.bits))
            rdiff = adiff / scale
            tol = 2 * bound / scale + rounding_floor
            tolerance = max(tolerance, tol)
            max_rel = max(max_rel, rdiff)
            if rdiff > tol:
                passed = False
            report.samples.append(ConjectureSample(z, j0, jm, adiff, rdiff))
        report.max_rel_diff = max_rel
        report.tolerance = tolerance
        report.passed = passed and bool(report.samples)
    return report


# -- exact coefficient machinery ----------------------------------------------


def f_coefficient(r: Partition, rows: int) -> Fraction:
    """Antisymmetric-series coefficient of the diagram r padded to `rows` rows."""
    if len(r) > rows:
        return Fraction(0)
    ks = [r.row(i) + rows - i for i in range(1, rows + 1)]
    num = 1
    for i in range(rows):
        for j in range(i + 1, rows):
            num *= ks[i] - ks[j]
    den = 1
    for k in ks:
        den *= factorial(k) ** 2
    return Fraction(num, den)


def g_coefficient(p: Partition, q: Partition, m: int, n: int) -> Fraction:
    """Split-series coefficient for the block pair (p, q)."""
    ka = [p.row(i) + m - i for i in range(1, m + 1)]
    kb = [q.row(j) + n - j for j in range(1, n + 1)]
    num = 1
    for i in range(m):
        for j in range(i + 1, m):
            num *= ka[i] - ka[j]
    for i in range(n):
        for j in range(i + 1, n):
            num *= kb[i] - kb[j]
    den = 1
    for k in ka + kb:
        den *= factorial(k) ** 2
    out = Fraction(num, den)
    for ki in ka:
        for kj in kb:
            out /= ki + kj + 1
    return out


def lr_relation_check(p: Partition, q: Partition, m: int, n: int):
    """Exact check of sum over r >= p (|r| = |p|+|q|, <= m+n rows) of f_r c^r_pq = g_pq.

    Returns (ok, residual); residual is the exact rational difference.
    """
    N = m + n
    total = Fraction(0)
    for r in partitions_of(p.size + q.size, max_rows=N):
        if not r.contains(p):
            continue
        c = lr_coefficient(r, p, q)
        if c:
            total += f_coefficient(r, N) * c
    residual = total - g_coefficient(p, q, m, n)
    return residual == 0, residual


def _fact_chain(n: int) -> int:
    out = 1
    for i in range(1, n + 1):
        out *= factorial(i)
    return out


def j0_series_coefficient(exponents) -> Fraction:
    """Exact coefficient of the monomial z^e in the antisymmetric series."""
    e = list(exponents)
    num = 1
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            num *= e[i] - e[j]
    den = 1
    for k in e:
        den *= factorial(k) ** 2
    return Fraction(num, den)


def _pattern_exponents(N: int, m: int, X: int, Y: int) -> list[int]:
    km0 = m - 1
    e = list(range(km0)) + [X]
    e += [km0 + d for d in range(N - m - 1)]
    e.append(Y)
    return e


def _s_closed_product(m: int, N: int, k_m: int, k_N: int) -> Fraction:
    """The closed product form of the split-series prefactor on the extreme pattern."""
    km0, kn0 = m - 1, N - m - 1
    sigma0 = _fact_chain(km0 + kn0 - 1) * _fact_chain(km0 - 1) * _fact_chain(kn0 - 1)
    val = Fraction(1, factorial(k_m) ** 2 * factorial(k_N) ** 2 * (k_m + k_N + 1))
    val /= sigma0
    for i in range(1, kn0 + 1):
        val /= k_m + i
    for j in range(1, km0 + 1):
        val /= k_N + j
    return val


def _s_general(m: int, N: int, k_m: int, k_N: int) -> Fraction:
    """The general split-series prefactor evaluated on the extreme pattern."""
    km0, kn0 = m - 1, N - m - 1
    ka = list(range(km0)) + [k_m]
    kb = list(range(kn0)) + [k_N]
    val = Fraction(1)
    for k in ka + kb:
        val /= factorial(k) ** 2
    for ki in ka:
        for kj in kb:
            val /= ki + kj + 1
    return val


def partial_coefficient_check(k_m: int, k_N: int, m: int, N: int) -> bool:
    """Exact coefficient test of the closed product prefactor on the extreme pattern.

    Two exact requirements:
    1. the closed product equals the general split-series prefactor at the
       pattern indices, and
    2. the antisymmetric series' extracted coefficients on the whole pattern
       grid up to (k_m, k_N) stand in one fixed (index-independent, unit)
       proportion to the two-term split-side combination built from the
       closed product.  The orientation constant absorbs bookkeeping signs of
       the block Vandermondes on the fixed pattern rows.
    """
    km0, kn0 = m - 1, N - m - 1
    if k_m < km0 or k_N < kn0:
        raise ValueError("pattern indices must be at least their base values")
    if _s_closed_product(m, N, k_m, k_N) != _s_general(m, N, k_m, k_N):
        return False

    a = km0 + kn0

    def two_term(X, Y):
        out = Fraction(0)
        km, kn = X - kn0, Y - km0 - 1
        if km >= km0 and kn >= kn0:
            out += Fraction(factorial(km) * factorial(kn)) * _s_closed_product(m, N, km, kn) / (
                factorial(km - km0) * factorial(kn - kn0)
            )
        km, kn = X - kn0 - 1, Y - km0
        if km >= km0 and kn >= kn0:
            out -= Fraction(factorial(km) * factorial(kn)) * _s_closed_product(m, N, km, kn) / (
                factorial(km - km0) * factorial(kn - kn0)
            )
        return out

    orientation = None
    for X in range(a, k_m + kn0 + 1):
        for Y in range(a, k_N + km0 + 2):
            lhs = j0_series_coefficient(_pattern_exponents(N, m, X, Y))
            rhs = two_term(X, Y)
            if lhs == 0 and rhs == 0:
                continue
            if (lhs == 0) != (rhs == 0):
                return False
            ratio = lhs / rhs
            if ratio not in (Fraction(1), Fraction(-1)):
                return False
            if orientation is None:
                orientation = ratio
            elif ratio != orientation:
                return False
    return True


# -- supercharacter expansion of powers of the supertrace -----------------------


def character_expansion_check(m: int, n: int, boxes_max: int, bos, ferm) -> bool:
    """Exact check that str(A)^b equals the sigma-weighted sum of supercharacters.

    Uses the tableaux supercharacter for every hook-covariant diagram
    (degenerate ones included) at the given rational eigenvalues.
    """
    bos = [Fraction(v) for v in bos]
    ferm = [Fraction(v) for v in ferm]
    if len(bos) != m or len(ferm) != n:
        raise ValueError("eigenvalue counts must match (m, n)")
    supertrace_val = sum(bos) - sum(ferm)
    power = Fraction(1)
    for b in range(1, boxes_max + 1):
        power *= supertrace_val
        total = Fraction(0)
        for t in partitions_of(b):
            if t.row(m + 1) > n:
                continue
            total += sigma_coefficient(t) * super_schur_tableaux(t, bos, ferm)
        if total != power:
            return False
    return True


# -- ordered-sum, series-determinant and factorial-ratio identities -------------


def _ordered_tuples(N, K):
    def rec(lo, left, acc):
        if left == 0:
            yield tuple(acc)
            return
        for k in range(lo, K + 1):
            acc.append(k)
            yield from rec(k + 1, left - 1, acc)
            acc.pop()

    for tup in rec(0, N, []):
        yield tuple(reversed(tup))


def rearrangement_identity_holds(N: int, K: int, zs, coeff) -> bool:
    """Free multi-index sum vs ordered sum with the alternant, exactly (Fractions).

    coeff(k-tuple) must be antisymmetric under index transpositions.
    """
    from itertools import product as iproduct

    zs = [Fraction(v) for v in zs]
    free = Fraction(0)
    for ks in iproduct(range(K + 1), repeat=N):
        c = coeff(ks)
        if c == 0:
            continue
        term = c
        for z, k in zip(zs, ks):
            term *= z ** k
        free += term
    ordered = Fraction(0)
    for ks in _ordered_tuples(N, K):
        c = coeff(ks)
        if c == 0:
            continue
        alt = exact_determinant([[z ** k for k in ks] for z in zs])
        ordered += c * alt
    return free == ordered


def series_determinant_identity_holds(N: int, K: int, zs, coeff_streams) -> bool:
    """det[f_i(z_j)] vs the ordered sum of coefficient and power alternants, exactly.

    coeff_streams[i](k) gives the k-th coefficient of the i-th truncated series.
    """
    zs = [Fraction(v) for v in zs]
    lhs = exact_determinant(
        [[sum(coeff_streams[i](k) * z ** k for k in range(K + 1)) for z in zs] for i in range(N)]
    )
    rhs = Fraction(0)
    for ks in _ordered_tuples(N, K):
        cdet = exact_determinant([[coeff_streams[i](k) for k in ks] for i in range(N)])
        if cdet == 0:
            continue
        zdet = exact_determinant([[z ** k for k in ks] for z in zs])
        rhs += cdet * zdet
    return lhs == rhs


def factorial_ratio_identity_holds(t: Partition, N: int) -> bool:
    """det[1/(n_j + i - j)!] = Delta(k)/prod k_i! with k_j = n_j + N - j, exactly.

    Entries with factorials of negative integers are zero.
    """
    if len(t) > N:
        raise ValueError("partition has more than N rows")
    n_rows = [t.row(j) for j in range(1, N + 1)]
    ks = [n_rows[j] + N - (j + 1) for j in range(N)]
    lhs = exact_determinant(
        [[inv_factorial(n_rows[j] + (i + 1) - (j + 1)) for j in range(N)] for i in range(N)]
    )
    num = 1
    for i in range(N):
        for j in range(i + 1, N):
            num *= ks[i] - ks[j]
    den = 1
    for k in ks:
        den *= factorial(k)
    return lhs == Fraction(num, den)


def theorem_c_checks(N: int, seed: int = 7, partition_samples: int = 20) -> bool:
    """Exact checks of the three rearrangement/determinant identities up to size N."""
    if N > 6:
        raise ValueError("N is capped at 6")
    # factorial-ratio identity over random partitions
    for s in range(partition_samples):
        size = splitmix64(seed, 2 * s) % 13
        pool = list(partitions_of(size, max_rows=N))
        t = pool[splitmix64(seed, 2 * s + 1) % len(pool)]
        if not factorial_ratio_identity_holds(t, N):
            return False
    # ordered-sum rearrangement with an explicitly antisymmetric coefficient
    zs2 = [Fraction(1, 2), Fraction(-1, 3)]
    zs3 = [Fraction(1, 2), Fraction(-1, 3), Fraction(2, 5)]

    def antisym(ks):
        c = Fraction(1)
        for k in ks:
            c /= factorial(k) ** 2
        v = 1
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                v *= ks[i] - ks[j]
        return c * v

    if not rearrangement_identity_holds(2, 12, zs2, antisym):
        return False
    if not rearrangement_identity_holds(3, 8, zs3, antisym):
        return False
    # series determinant identity with shifted Bessel-kernel coefficient streams
    streams = [lambda k, i=i: inv_factorial(k) * inv_factorial(k + i - 1) for i in range(1, 4)]
    if not series_determinant_identity_holds(3, 20, zs3, streams):
        return False
    return True


# -- character-expansion evaluations of the closed-form integrals ---------------


def _chi_exact(p: Partition, values):
    """Exact Gl character at rational arguments (tableaux when arguments repeat)."""
    from .schur import schur_bialternant, schur_tableaux
    from .errors import DegenerateArguments

    try:
        return schur_bialternant(p, values)
    except DegenerateArguments:
        return schur_tableaux(p, values)


def _supercharacter_exact(sd, bos, ferm):
    cross = Fraction(1)
    for a in bos:
        for b in ferm:
            cross *= a - b
    sign = -1 if sd.q.size % 2 else 1
    return sign * cross * _chi_exact(sd.p, bos) * _chi_exact(sd.q, ferm)


def ls_character_sum(bos, ferm, beta: Fraction, max_boxes: int):
    """Partial diagram-expansion sum for the one-source integral, exact rationals.

    Returns (partial_sum, shell_values) where shell_values[b] is the exact
    contribution of all diagrams with b boxes (useful for tail estimates).
    """
    m, n = len(bos), len(ferm)
    bos = [Fraction(v) for v in bos]
    ferm = [Fraction(v) for v in ferm]
    beta = Fraction(beta)
    shells = {}
    for sd in super_diagrams(m, n, max_boxes):
        t = assemble(sd)
        boxes = t.size
        coeff = Fraction(sigma_coefficient(t), factorial(boxes)) ** 2 * beta ** (2 * boxes)
        term = coeff * norm_alpha(sd) * _supercharacter_exact(sd, bos, ferm)
        shells[boxes] = shells.get(boxes, Fraction(0)) + term
    total = sum(shells.values(), Fraction(0))
    return total, shells


def bk_character_sum(lam_bos, lam_ferm, mu_bos, mu_ferm, beta: Fraction, max_boxes: int):
    """Partial diagram-expansion sum for the two-source integral, exact rationals."""
    m, n = len(lam_bos), len(lam_ferm)
    lam_bos = [Fraction(v) for v in lam_bos]
    lam_ferm = [Fraction(v) for v in lam_ferm]
    mu_bos = [Fraction(v) for v in mu_bos]
    mu_ferm = [Fraction(v) for v in mu_ferm]
    beta = Fraction(beta)
    shells = {}
    for sd in super_diagrams(m, n, max_boxes):
        t = assemble(sd)
        boxes = t.size
        coeff = (
            Fraction(sigma_coefficient(t) * norm_alpha(sd), factorial(boxes)) * beta ** boxes
        ) ** 2
        term = (
            coeff
            * _supercharacter_exact(sd, lam_bos, lam_ferm)
            * _supercharacter_exact(sd, mu_bos, mu_ferm)
        )
        shells[boxes] = shells.get(boxes, Fraction(0)) + term
    total = sum(shells.values(), Fraction(0))
    return total, shells

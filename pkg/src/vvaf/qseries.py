"""Fractional-exponent q-expansions and logarithmic expansions.

A :class:`FracQSeries` is a truncated sum of c_j * q^((start+j)/D) with
q = exp(2 pi i tau / h); exponents are exact rationals on an integer grid
with denominator D, which keeps offsets like 1/24 and 1/12 from drifting
through arithmetic.  A :class:`LogQExpansion` stacks such series against
powers of log q = 2 pi i tau / h.

Series are immutable; arithmetic and evaluation are pure functions, so
batch evaluation over tau grids can run concurrently without coordination.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "FracQSeries",
    "LogQExpansion",
    "eta_series",
    "theta_series",
    "eta_power_series",
    "combine",
    "coefficient_integral",
    "log_recouple",
]

_Q_ABS_LIMIT = 0.995
_BIG_CONV = 8192


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) + len(b) > _BIG_CONV:
        from scipy.signal import fftconvolve

        return fftconvolve(a, b)
    return np.convolve(a, b)


class FracQSeries:
    """Truncated series sum_j c_j q^((start+j)/D) with q = exp(2 pi i tau/h).

    ``order`` is the exponent up to which the stored coefficients are
    complete (exclusive); ``None`` marks an exact series with no tail.
    Construction trims zero fringes and reduces the grid so that the
    denominator and the occupied indices share no common factor.
    """

    __slots__ = ("h", "D", "start", "coeffs", "order")

    def __init__(self, h: int, D: int, start: int, coeffs, order=None, normalize: bool = True):
        coeffs = np.array(coeffs, dtype=complex)  # own copy: the series is immutable
        if h < 1 or D < 1:
            raise ValueError("width and exponent denominator must be positive")
        if order is not None:
            order = Fraction(order)
        if normalize:
            h, D, start, coeffs, order = _normalize(h, D, start, coeffs, order)
        self.h = h
        self.D = D
        self.start = int(start)
        self.coeffs = np.ascontiguousarray(coeffs)
        self.coeffs.setflags(write=False)
        self.order = order

    # -- structure ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def leading_exponent(self) -> Fraction:
        """Lowest stored exponent; for the zero series, the order."""
        if self.is_zero():
            if self.order is None:
                raise ValueError("the exact zero series has no leading exponent")
            return self.order
        return Fraction(self.start, self.D)

    def exponents(self) -> list:
        return [Fraction(self.start + j, self.D) for j in range(len(self.coeffs))]

    def occupied(self) -> list:
        """(exponent, coefficient) pairs of the nonzero stored terms."""
        return [
            (Fraction(self.start + j, self.D), self.coeffs[j])
            for j in range(len(self.coeffs))
            if self.coeffs[j] != 0
        ]

    def coefficient(self, exponent) -> complex:
        exponent = Fraction(exponent)
        if self.order is not None and exponent >= self.order:
            raise ValueError(f"exponent {exponent} is beyond the truncation order {self.order}")
        num = exponent * self.D
        if num.denominator != 1:
            return 0j
        j = int(num) - self.start
        if j < 0 or j >= len(self.coeffs):
            return 0j
        return complex(self.coeffs[j])

    def coefficients_on_offset(self, offset, nmax: int) -> np.ndarray:
        """Coefficients at exponents n + offset for n = 0..nmax."""
        offset = Fraction(offset)
        if self.order is not None and nmax + offset >= self.order:
            raise ValueError(
                f"requested exponent {nmax + offset} beyond truncation order {self.order}"
            )
        out = np.zeros(nmax + 1, dtype=complex)
        for n in range(nmax + 1):
            num = (offset + n) * self.D
            if num.denominator != 1:
                continue
            j = int(num) - self.start
            if 0 <= j < len(self.coeffs):
                out[n] = self.coeffs[j]
        return out

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, tau: complex, with_tail: bool = False):
        """Value at tau, optionally with a geometric tail bound.

        Refuses points with |q| > 0.995 where the tail bound is
        meaningless.
        """
        q_abs = math.exp(-2 * math.pi * tau.imag / self.h)
        if q_abs > _Q_ABS_LIMIT:
            raise ValueError(f"|q| = {q_abs:.4f} too close to 1; move tau upward")
        if self.is_zero():
            return (0j, self._tail(q_abs)) if with_tail else 0j
        w = 2j * math.pi * tau / (self.h * self.D)
        exponents = self.start + np.arange(len(self.coeffs))
        value = complex(np.sum(self.coeffs * np.exp(w * exponents)))
        if with_tail:
            return value, self._tail(q_abs)
        return value

    def _tail(self, q_abs: float) -> float:
        if self.order is None:
            return 0.0
        cap = float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 1.0
        step = q_abs ** (1.0 / self.D)
        return cap * q_abs ** float(self.order) / (1.0 - step)

    def __call__(self, tau: complex) -> complex:
        return self.evaluate(tau)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FracQSeries):
            return combine("add", self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FracQSeries):
            return combine("add", self, combine("scale", other, factor=-1))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FracQSeries):
            return combine("mul", self, other)
        if isinstance(other, (int, float, complex)):
            return combine("scale", self, factor=other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FracQSeries):
            return combine("div", self, other)
        if isinstance(other, (int, float, complex)):
            return combine("scale", self, factor=1.0 / other)
        return NotImplemented

    def __repr__(self):
        lead = None if self.is_zero() else str(self.leading_exponent)
        return (
            f"FracQSeries(h={self.h}, D={self.D}, lead={lead}, "
            f"terms={len(self.coeffs)}, order={self.order})"
        )

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "denom": self.D,
            "start": self.start,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
            "order": None if self.order is None else [self.order.numerator, self.order.denominator],
        }

    @staticmethod
    def from_dict(data: dict) -> "FracQSeries":
        order = data.get("order")
        if order is not None:
            order = Fraction(order[0], order[1])
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]], dtype=complex)
        return FracQSeries(data["h"], data["denom"], data["start"], coeffs, order=order)

    @staticmethod
    def zero(h: int = 1, order=None) -> "FracQSeries":
        return FracQSeries(h, 1, 0, np.zeros(0), order=order)

    @staticmethod
    def one(h: int = 1, order=None) -> "FracQSeries":
        return FracQSeries(h, 1, 0, np.ones(1), order=order)


def _normalize(h, D, start, coeffs, order):
    # trim the zero fringe
    nz = np.flatnonzero(np.abs(coeffs) != 0)
    if len(nz) == 0:
        return h, 1, 0, np.zeros(0, dtype=complex), order
    lo, hi = int(nz[0]), int(nz[-1])
    coeffs = coeffs[lo : hi + 1]
    start += lo
    # drop stored terms at or beyond the truncation order
    if order is not None:
        keep = math.ceil(order * D - start)  # indices j with (start+j)/D < order
        keep = max(0, min(len(coeffs), keep))
        coeffs = coeffs[:keep]
        if len(coeffs) == 0:
            return h, 1, 0, np.zeros(0, dtype=complex), order
    # reduce the exponent grid
    occupied = [start + int(j) for j in np.flatnonzero(np.abs(coeffs) != 0)]
    g = D
    for idx in occupied:
        g = math.gcd(g, idx)
        if g == 1:
            break
    if g > 1:
        length = (occupied[-1] - occupied[0]) // g + 1
        reduced = np.zeros(length, dtype=complex)
        for idx in occupied:
            reduced[(idx - occupied[0]) // g] = coeffs[idx - start]
        coeffs, start, D = reduced, occupied[0] // g, D // g
    return h, D, start, np.ascontiguousarray(coeffs), order


def combine(op: str, f: FracQSeries, g: FracQSeries | None = None, factor=None) -> FracQSeries:
    """Pointwise algebra on series: 'mul', 'div', 'add' or 'scale'.

    Addition and multiplication merge exponent grids via the lcm of the
    denominators; the truncation order of the result is the tightest bound
    implied by the inputs.  Division requires a nonzero leading
    coefficient of the divisor.
    """
    if op == "scale":
        return FracQSeries(f.h, f.D, f.start, f.coeffs * factor, order=f.order)
    if g is None:
        raise ValueError(f"operation {op!r} needs two series")
    if f.h != g.h:
        raise ValueError("series widths differ")
    if op == "add":
        return _add(f, g)
    if op == "mul":
        return _mul(f, g)
    if op == "div":
        return _div(f, g)
    raise ValueError(f"unknown operation {op!r}")


def _aligned(f: FracQSeries, g: FracQSeries):
    D = _lcm(f.D, g.D)
    fa, fs = _upsample(f, D)
    ga, gs = _upsample(g, D)
    return D, fa, fs, ga, gs


def _upsample(f: FracQSeries, D: int):
    k = D // f.D
    if k == 1:
        return f.coeffs, f.start
    out = np.zeros((len(f.coeffs) - 1) * k + 1 if len(f.coeffs) else 0, dtype=complex)
    out[::k] = f.coeffs
    return out, f.start * k


def _min_order(*orders):
    known = [o for o in orders if o is not None]
    return min(known) if known else None


def _stride_of(nonzero_positions: np.ndarray) -> int:
    if len(nonzero_positions) < 2:
        return 0  # a point mass sits in every stride class
    return int(np.gcd.reduce(np.diff(nonzero_positions)))


def _add(f: FracQSeries, g: FracQSeries) -> FracQSeries:
    order = _min_order(f.order, g.order)
    if f.is_zero():
        return FracQSeries(g.h, g.D, g.start, g.coeffs, order=order)
    if g.is_zero():
        return FracQSeries(f.h, f.D, f.start, f.coeffs, order=order)
    D, fa, fs, ga, gs = _aligned(f, g)
    start = min(fs, gs)
    end = max(fs + len(fa), gs + len(ga))
    out = np.zeros(end - start, dtype=complex)
    out[fs - start : fs - start + len(fa)] += fa
    out[gs - start : gs - start + len(ga)] += ga
    return FracQSeries(f.h, D, start, out, order=order)


def _mul(f: FracQSeries, g: FracQSeries) -> FracQSeries:
    if (f.is_zero() and f.order is None) or (g.is_zero() and g.order is None):
        return FracQSeries.zero(f.h)  # an exact zero factor
    # for a truncated zero, the order doubles as the earliest possible exponent
    lead_f = f.order if f.is_zero() else f.leading_exponent
    lead_g = g.order if g.is_zero() else g.leading_exponent
    bounds = []
    if f.order is not None:
        bounds.append(f.order + lead_g)
    if g.order is not None:
        bounds.append(g.order + lead_f)
    order = min(bounds) if bounds else None
    if f.is_zero() or g.is_zero():
        return FracQSeries.zero(f.h, order=order)
    D, fa, fs, ga, gs = _aligned(f, g)
    # convolve only the occupied stride classes; sparse factors like the
    # eta powers stay exact and the work drops by the stride squared
    nzf = np.flatnonzero(fa != 0)
    nzg = np.flatnonzero(ga != 0)
    step = math.gcd(_stride_of(nzf), _stride_of(nzg))
    if step > 1:
        conv = _convolve(fa[nzf[0] :: step], ga[nzg[0] :: step])
        out = np.zeros((len(conv) - 1) * step + 1, dtype=complex)
        out[::step] = conv
        return FracQSeries(f.h, D, fs + gs + int(nzf[0]) + int(nzg[0]), out, order=order)
    return FracQSeries(f.h, D, fs + gs, _convolve(fa, ga), order=order)


def _div(f: FracQSeries, g: FracQSeries) -> FracQSeries:
    if g.is_zero():
        raise ZeroDivisionError("division by the zero series")
    if abs(g.coeffs[0]) == 0:
        raise ZeroDivisionError("divisor has zero leading coefficient")
    if f.is_zero() and f.order is None:
        return FracQSeries.zero(f.h)
    lead_f = f.order if f.is_zero() else f.leading_exponent
    r_lead = lead_f - g.leading_exponent
    bounds = []
    if f.order is not None:
        bounds.append(f.order - g.leading_exponent)
    if g.order is not None:
        bounds.append(g.order - g.leading_exponent + r_lead)
    order = min(bounds) if bounds else None
    if f.is_zero():
        return FracQSeries.zero(f.h, order=order)
    D, fa, fs, ga, gs = _aligned(f, g)
    r_start = fs - gs
    if order is not None:
        n_terms = max(0, math.ceil(order * D - r_start))
        n_terms = min(n_terms, len(fa) + len(ga))
    else:
        n_terms = len(fa)
    if n_terms <= 0:
        return FracQSeries.zero(f.h, order=order)
    out = np.zeros(n_terms, dtype=complex)
    g0 = ga[0]
    fa_padded = np.zeros(n_terms, dtype=complex)
    take = min(n_terms, len(fa))
    fa_padded[:take] = fa[:take]
    for k in range(n_terms):
        acc = fa_padded[k]
        j_max = min(k, len(ga) - 1)
        if j_max >= 1:
            stop = k - j_max - 1
            acc -= np.dot(ga[1 : j_max + 1], out[k - 1 : (stop if stop >= 0 else None) : -1])
        out[k] = acc / g0
    return FracQSeries(f.h, D, r_start, out, order=order)


# -- built-in scalar series ----------------------------------------------------


@lru_cache(maxsize=32)
def _euler_product(n_terms: int) -> tuple:
    """Integer-grid coefficients of prod_{n>=1} (1 - x^n) up to x^n_terms."""
    out = np.zeros(n_terms + 1)
    k = 0
    while True:
        advanced = False
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e <= n_terms:
                out[e] += (-1) ** kk
                advanced = True
        if not advanced:
            break
        k += 1
    return tuple(out)


def eta_series(n_terms: int) -> FracQSeries:
    """The Dedekind eta expansion exp(pi i tau/12) prod (1 - exp(2 pi i n tau)).

    Coefficients live on the grid with denominator 24 and leading exponent
    1/24; complete through exponent n_terms + 1/24.
    """
    if n_terms < 1:
        raise ValueError("need at least one term")
    euler = np.array(_euler_product(n_terms))
    coeffs = np.zeros(24 * n_terms + 1, dtype=complex)
    coeffs[::24] = euler
    return FracQSeries(1, 24, 1, coeffs, order=Fraction(24 * (n_terms + 1) + 1, 24))


def eta_power_series(power: int, n_terms: int) -> FracQSeries:
    """Integer power of eta; the weight-12 cusp form is the 24th power."""
    if power < 1:
        raise ValueError("power must be positive")
    euler = np.array(_euler_product(n_terms), dtype=complex)
    acc = np.ones(1, dtype=complex)
    base = euler
    p = power
    while p:
        if p & 1:
            acc = _convolve(acc, base)[: n_terms + 1]
        p >>= 1
        if p:
            base = _convolve(base, base)[: n_terms + 1]
    num = power  # leading exponent power/24
    den = 24
    g = math.gcd(num, den)
    num, den = num // g, den // g
    coeffs = np.zeros(den * n_terms + 1, dtype=complex)
    coeffs[::den] = acc
    return FracQSeries(1, den, num, coeffs, order=Fraction(den * (n_terms + 1) + num, den))


def theta_series(variant: int, n_terms: int) -> FracQSeries:
    """Jacobi theta constants as q-series.

    Variant 2 sums exp(pi i tau (n + 1/2)^2) over the integers (grid
    denominator 8), variants 3 and 4 sum exp(pi i tau n^2) with and without
    the alternating sign (grid denominator 2).
    """
    if n_terms < 1:
        raise ValueError("need at least one term")
    if variant == 2:
        coeffs = np.zeros(8 * n_terms + 1, dtype=complex)
        n = 0
        while (2 * n + 1) ** 2 <= 8 * n_terms + 1:
            coeffs[(2 * n + 1) ** 2 - 1] += 2.0
            n += 1
        return FracQSeries(1, 8, 1, coeffs, order=Fraction(8 * n_terms + 2, 8))
    if variant in (3, 4):
        coeffs = np.zeros(2 * n_terms + 1, dtype=complex)
        coeffs[0] = 1.0
        n = 1
        while n * n <= 2 * n_terms:
            coeffs[n * n] += 2.0 if variant == 3 else 2.0 * (-1) ** n
            n += 1
        return FracQSeries(1, 2, 0, coeffs, order=Fraction(2 * n_terms + 1, 2))
    raise ValueError("variant must be 2, 3 or 4")


# -- coefficient extraction -----------------------------------------------------


def coefficient_integral(f, n: int, offset, y: float = 1.0, T: int = 256, h: int = 1, periods: int | None = None) -> complex:
    """Recover the coefficient at exponent n + offset by a trapezoid sum.

    Averages f(x + iy) exp(-2 pi i (n + offset)(x + iy)/h) over equally
    spaced x.  The sum runs over as many base periods as the integrand
    needs to be exactly periodic: one for a single-offset expansion, more
    when the exponent grid mixes offset classes (``periods`` overrides the
    automatic choice for black-box callables).  The trapezoid rule is exact
    on trigonometric polynomials, so for a truncated expansion the result
    is exact once the per-period sample count T clears the frequency span.

    Exactness holds up to rounding amplified by exp(2 pi y (n + offset)/h):
    the target term is exponentially small inside f at height y, so keep
    y at most of order h/(n + offset) when extracting the n-th coefficient.
    """
    offset = Fraction(offset)
    if isinstance(f, FracQSeries):
        h = f.h
        p = 1
        target = offset + n
        for e, _ in f.occupied():
            delta = e - target
            p = _lcm(p, delta.denominator)
        span = 0
        for e, _ in f.occupied():
            span = max(span, abs(int((e - target) * p)))
        T = max(T, 2 * span // max(p, 1) + 8)
        func = f.evaluate
    else:
        p = 1 if periods is None else periods
        func = f
    total = T * p
    xs = np.arange(total) * (h / T)
    taus = xs + 1j * y
    freq = -2j * math.pi * float(offset + n) / h
    values = np.array([func(complex(tau)) for tau in taus])
    return complex(np.sum(values * np.exp(freq * taus)) / total)


# -- logarithmic expansions -------------------------------------------------------


class LogQExpansion:
    """A stack of q-expansions against powers of log q.

    ``terms`` maps the log power j to a FracQSeries; admissible expansions
    have the single power zero.
    """

    __slots__ = ("terms", "h")

    def __init__(self, terms, h: int | None = None):
        collected: dict = {}
        for j, series in dict(terms).items():
            j = int(j)
            if j < 0:
                raise ValueError("log powers must be nonnegative")
            if h is None:
                h = series.h
            elif series.h != h:
                raise ValueError("inconsistent widths in expansion terms")
            if not series.is_zero() or series.order is not None:
                collected[j] = series
        self.terms = dict(sorted(collected.items()))
        self.h = h if h is not None else 1

    @staticmethod
    def from_series(series: FracQSeries) -> "LogQExpansion":
        return LogQExpansion({0: series})

    def max_log_power(self) -> int:
        powers = [j for j, s in self.terms.items() if not s.is_zero()]
        return max(powers) if powers else 0

    def is_pure(self, tol: float = 0.0) -> bool:
        """True when only the log-free term carries coefficients."""
        for j, series in self.terms.items():
            if j == 0 or series.is_zero():
                continue
            if tol and float(np.max(np.abs(series.coeffs))) <= tol:
                continue
            return False
        return True

    def occupied_exponents(self) -> list:
        out = set()
        for series in self.terms.values():
            out.update(e for e, _ in series.occupied())
        return sorted(out)

    def evaluate(self, tau: complex, with_tail: bool = False):
        log_q = 2j * math.pi * tau / self.h
        value = 0j
        tail = 0.0
        for j, series in self.terms.items():
            weight = log_q**j
            if with_tail:
                v, t = series.evaluate(tau, with_tail=True)
                value += weight * v
                tail += abs(weight) * t
            else:
                value += weight * series.evaluate(tau)
        return (value, tail) if with_tail else value

    def __call__(self, tau: complex) -> complex:
        return self.evaluate(tau)

    def scale(self, factor) -> "LogQExpansion":
        return LogQExpansion({j: combine("scale", s, factor=factor) for j, s in self.terms.items()}, h=self.h)

    def __add__(self, other: "LogQExpansion") -> "LogQExpansion":
        terms = dict(self.terms)
        for j, series in other.terms.items():
            terms[j] = combine("add", terms[j], series) if j in terms else series
        return LogQExpansion(terms, h=self.h)

    def as_dict(self) -> dict:
        return {"terms": [{"log_power": j, "series": s.as_dict()} for j, s in self.terms.items()]}

    @staticmethod
    def from_dict(data: dict) -> "LogQExpansion":
        return LogQExpansion(
            {item["log_power"]: FracQSeries.from_dict(item["series"]) for item in data["terms"]}
        )


# -- recoupling between log stacks and pure expansions -------------------------


def _binom_poly(shift: Fraction, j: int) -> np.ndarray:
    """Coefficients (ascending, in u = tau/h) of binom(u + shift, j)."""
    poly = np.array([1.0 + 0j])
    for l in range(j):
        # multiply by (u + shift - l)
        root = complex(shift - l)
        poly = np.concatenate([poly * root, [0j]]) + np.concatenate([[0j], poly])
    return poly / math.factorial(j)


def _expansion_to_upoly(x: LogQExpansion) -> dict:
    """Rewrite (log q)^j stacks as coefficients of u^j, u = tau/h."""
    out = {}
    for j, series in x.terms.items():
        out[j] = combine("scale", series, factor=(2j * math.pi) ** j)
    return out


def _upoly_to_expansion(poly: dict, h: int) -> LogQExpansion:
    terms = {}
    for j, series in poly.items():
        terms[j] = combine("scale", series, factor=(2j * math.pi) ** (-j))
    return LogQExpansion(terms, h=h)


def _upoly_scalar_mul(poly: dict, scalar_poly: np.ndarray) -> dict:
    out: dict = {}
    for j, series in poly.items():
        for k, c in enumerate(scalar_poly):
            if c == 0:
                continue
            scaled = combine("scale", series, factor=c)
            key = j + k
            out[key] = combine("add", out[key], scaled) if key in out else scaled
    return out


def _upoly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for j, series in b.items():
        out[j] = combine("add", out[j], series) if j in out else series
    return out


def log_recouple(direction: str, components: list, h: int = 1, purity_tol: float = 1e-9) -> list:
    """Recouple the components of a single Jordan block.

    Inputs transform under tau -> tau + h by the lower bidiagonal block
    action X_i -> lambda (X_i + X_{i-1}).  The forward direction produces
    the pure q-expansions obtained by alternating binomial combinations;
    the backward direction reassembles the original components from pure
    expansions.  Forward outputs that keep a log term above ``purity_tol``
    raise, since that means the inputs were not closed under the block
    action.
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    polys = [_expansion_to_upoly(x) for x in components]
    out = []
    for i in range(len(components)):
        acc: dict = {}
        for j in range(i + 1):
            if direction == "forward":
                scalar = ((-1) ** j) * _binom_poly(Fraction(j - 1), j)
            else:
                scalar = _binom_poly(Fraction(0), j)
            acc = _upoly_add(acc, _upoly_scalar_mul(polys[i - j], scalar))
        result = _upoly_to_expansion(acc, h)
        if direction == "forward":
            if not result.is_pure(tol=purity_tol):
                raise ValueError(
                    f"component {i} is not closed under the block action; "
                    "a log term survives the recoupling"
                )
            result = LogQExpansion({0: result.terms.get(0, FracQSeries.zero(h))}, h=h)
        out.append(result)
    return out

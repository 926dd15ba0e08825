"""Exact arithmetic and word machinery for elements of PSL2(Z).

Elements are 2x2 determinant-one matrices identified up to sign.  Integer
entries are kept exact (Python ints), cusp-scaling matrices may carry
rational (``fractions.Fraction``) or float entries.  Everything here is
immutable and side-effect free, so the whole module is safe to use from
multiple threads.

The point at infinity is represented by ``math.inf`` and is a first-class
value for the Moebius action.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

__all__ = [
    "INF",
    "GroupElement",
    "Word",
    "SubgroupDescriptor",
    "psl2z",
    "gamma_n",
    "gamma0_n",
    "identity",
    "gen_s",
    "gen_t",
    "t_power",
    "apply_moebius",
    "classify",
    "j_factor",
    "word_decompose",
    "scaling_matrix",
    "integral_scaling_matrix",
    "cusp_width",
    "eichler_shift",
    "left_transversal",
    "cusp_classes",
]

INF = math.inf

_FLOAT_DET_TOL = 1e-12


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class GroupElement:
    """A determinant-one 2x2 matrix up to sign.

    The sign is normalized so that the first nonzero entry of the bottom
    row ``(c, d)`` is positive; normalizing twice is the same as
    normalizing once, and ``g`` and ``-g`` normalize identically.
    """

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        det = a * d - b * c
        if all(_is_exact(x) for x in (a, b, c, d)):
            if det != 1:
                raise ValueError(f"determinant must be 1, got {det}")
        else:
            if abs(det - 1.0) > _FLOAT_DET_TOL:
                raise ValueError(f"determinant must be 1 within {_FLOAT_DET_TOL}, got {det}")
        # sign normalization: first nonzero of (c, d) positive
        if c != 0:
            flip = c < 0
        else:
            flip = d < 0
        if flip:
            object.__setattr__(self, "a", -a)
            object.__setattr__(self, "b", -b)
            object.__setattr__(self, "c", -c)
            object.__setattr__(self, "d", -d)

    # -- basic structure ------------------------------------------------

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for x in self.entries())

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def trace(self):
        return self.a + self.d

    def norm(self) -> float:
        """Euclidean norm of the four entries."""
        a, b, c, d = (float(x) for x in self.entries())
        return math.sqrt(a * a + b * b + c * c + d * d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        # adjugate; valid because det = 1
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "GroupElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.is_integral and other.is_integral:
            return self.entries() == other.entries()
        return all(
            abs(float(x) - float(y)) <= 1e-9 * max(1.0, abs(float(x)))
            for x, y in zip(self.entries(), other.entries())
        )

    def __hash__(self):
        return hash(self.entries())

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        def enc(x):
            return x if isinstance(x, int) else str(x)

        return json.dumps([[enc(self.a), enc(self.b)], [enc(self.c), enc(self.d)]])

    @staticmethod
    def from_json(text: str) -> "GroupElement":
        rows = json.loads(text)

        def dec(x):
            if isinstance(x, int):
                return x
            if isinstance(x, float):
                return x
            if "/" in x:
                return Fraction(x)
            try:
                return int(x)
            except ValueError:
                return float(x)

        return GroupElement(dec(rows[0][0]), dec(rows[0][1]), dec(rows[1][0]), dec(rows[1][1]))


def identity() -> GroupElement:
    return GroupElement(1, 0, 0, 1)


def gen_s() -> GroupElement:
    return GroupElement(0, -1, 1, 0)


def gen_t() -> GroupElement:
    return GroupElement(1, 1, 0, 1)


def t_power(n: int, h: int = 1) -> GroupElement:
    return GroupElement(1, n * h, 0, 1)


# -- Moebius action --------------------------------------------------------


def apply_moebius(g: GroupElement, tau):
    """Moebius image of ``tau`` under ``g``; ``tau`` may be INF.

    Maps the upper half plane to itself; a real fixed point of the
    denominator or the point at infinity returns ``INF`` or ``a/c``.
    """
    a, b, c, d = (complex(x) if not isinstance(x, (int, float, Fraction)) else x for x in g.entries())
    if tau == INF:
        if c == 0:
            return INF
        return a / c
    num = a * tau + b
    den = c * tau + d
    if den == 0:
        return INF
    w = num / den
    if isinstance(tau, complex) and tau.imag != 0:
        # det = 1 makes Im(g tau) = Im(tau)/|c tau + d|^2 exactly; computing it
        # this way avoids the cancellation of the plain complex quotient
        det = float(a * d - b * c)
        return complex(w.real, tau.imag * det / abs(den) ** 2)
    return w


def classify(g: GroupElement) -> str:
    """One of 'identity', 'elliptic', 'parabolic', 'hyperbolic'."""
    if g == identity():
        return "identity"
    tr = abs(g.trace())
    if g.is_integral:
        if tr < 2:
            return "elliptic"
        if tr == 2:
            return "parabolic"
        return "hyperbolic"
    tr = float(tr)
    if abs(tr - 2.0) <= 1e-9:
        return "parabolic"
    return "elliptic" if tr < 2.0 else "hyperbolic"


def j_factor(g: GroupElement, tau) -> complex:
    """Automorphy factor c*tau + d."""
    return complex(g.c) * tau + complex(g.d)


# -- words in the generators -----------------------------------------------


@dataclass(frozen=True)
class Word:
    """A reduced word in the generators s and t.

    Letters are (generator, exponent) pairs; adjacent letters never share a
    generator, t-exponents are nonzero and s-exponents are always 1
    (s has order two in PSL2(Z), so negative powers are folded away).
    """

    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def evaluate(self) -> GroupElement:
        g = identity()
        for gen, exp in self.letters:
            if gen == "s":
                g = g * gen_s()
            else:
                g = g * t_power(exp)
        return g

    def apply(self, images: dict, multiply: Callable, power: Callable):
        """Fold the word through arbitrary generator images.

        ``images`` maps 's' and 't' to objects combined with ``multiply``
        and raised to integer powers with ``power``.
        """
        result = None
        for gen, exp in self.letters:
            factor = images[gen] if gen == "s" else power(images["t"], exp)
            result = factor if result is None else multiply(result, factor)
        return result

    def to_json(self) -> str:
        return json.dumps([{"gen": g, "exp": e} for g, e in self.letters])

    @staticmethod
    def from_json(text: str) -> "Word":
        return Word(tuple((item["gen"], item["exp"]) for item in json.loads(text)))


def _reduce_letters(letters: Iterable) -> tuple:
    """Merge adjacent same-generator letters and drop trivial ones."""
    out: list = []
    for gen, exp in letters:
        exp = int(exp)
        if gen == "s":
            exp = exp % 2  # s^2 = 1 in PSL2(Z)
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp if gen == "t" else (out[-1][1] + exp) % 2
            out.pop()
            if merged:
                out.append((gen, merged))
            # a cancellation may expose a new adjacency; re-reduce below
            out = list(_reduce_letters(out))
        else:
            out.append((gen, exp))
    return tuple(out)


def word_decompose(g: GroupElement) -> Word:
    """Write an integral element as a word in s and t.

    Euclidean reduction on the bottom row: peel t^n from the left with n
    the nearest integer to a/c, then swap rows with s.  The magnitude of c
    at least halves per round, so the word length is O(log max entry).
    Evaluating the word reproduces ``g`` up to sign.
    """
    if not g.is_integral:
        raise ValueError("word decomposition requires integer entries")
    letters: list = []
    a, b, c, d = g.entries()
    while c != 0:
        # nearest integer to a/c
        n = (2 * a + c) // (2 * c) if c > 0 else (2 * a - c) // (2 * c)
        if abs(a - n * c) * 2 > abs(c):  # guard against ties rounding badly
            n += 1 if (a - n * c) * c > 0 else -1
        if n:
            letters.append(("t", n))
        letters.append(("s", 1))
        # g <- s^{-1} t^{-n} g, i.e. rows ((c, d), (-(a - n c), -(b - n d)))
        a, b, c, d = c, d, -(a - n * c), -(b - n * d)
    # remainder is +-t^m
    m = b * d  # d = +-1 and m = b/d
    if m:
        letters.append(("t", m))
    return Word(tuple(letters))


# -- cusps and scaling matrices ---------------------------------------------


def scaling_matrix(cusp) -> GroupElement:
    """The real scaling matrix sending infinity to the cusp.

    Finite cusps get ((cusp, -1), (1, 0)); infinity maps to the identity.
    """
    if cusp == INF:
        return identity()
    if isinstance(cusp, float) and not cusp.is_integer():
        return GroupElement(cusp, -1.0, 1.0, 0.0)
    value = Fraction(cusp) if not isinstance(cusp, Fraction) else cusp
    return GroupElement(value, Fraction(-1), Fraction(1), Fraction(0))


def integral_scaling_matrix(cusp) -> GroupElement:
    """An element of PSL2(Z) sending infinity to the rational cusp."""
    if cusp == INF:
        return identity()
    frac = Fraction(cusp)
    p, q = frac.numerator, frac.denominator
    # p*d - b*q = 1 via the extended Euclidean algorithm
    d, b = _xgcd_pair(p, q)
    return GroupElement(p, b, q, d)


def _xgcd_pair(p: int, q: int) -> tuple:
    """Return (d, b) with p*d - b*q = 1 for coprime p, q."""
    g, x, y = _xgcd(p, q)
    if g != 1:
        raise ValueError("cusp must be given in lowest terms")
    # p*x + q*y = 1  ->  d = x, b = -y
    return x, -y


def _xgcd(a: int, b: int) -> tuple:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# -- subgroup descriptors ---------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    """A finite-index subgroup given by a membership predicate.

    ``contains`` accepts an integral GroupElement; ``index`` bounds the
    index in PSL2(Z) and also bounds all coset searches.
    """

    name: str
    contains: Callable
    index: int

    def __repr__(self):
        return f"SubgroupDescriptor({self.name}, index={self.index})"


def psl2z() -> SubgroupDescriptor:
    return SubgroupDescriptor("PSL2Z", lambda g: g.is_integral, 1)


def _prime_factors(n: int) -> list:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gamma_n(n: int) -> SubgroupDescriptor:
    """Principal congruence subgroup: g == +-I mod n."""
    if n < 1:
        raise ValueError("level must be positive")
    if n == 1:
        return psl2z()

    def contains(g: GroupElement) -> bool:
        if not g.is_integral:
            return False
        a, b, c, d = g.entries()
        for sign in (1, -1):
            if (
                (sign * a - 1) % n == 0
                and (sign * b) % n == 0
                and (sign * c) % n == 0
                and (sign * d - 1) % n == 0
            ):
                return True
        return False

    index = n**3
    for p in _prime_factors(n):
        index = index // (p * p) * (p * p - 1)
    if n > 2:
        index //= 2
    return SubgroupDescriptor(f"Gamma({n})", contains, index)


def gamma0_n(n: int) -> SubgroupDescriptor:
    """Hecke congruence subgroup: lower-left entry divisible by n."""
    if n < 1:
        raise ValueError("level must be positive")
    if n == 1:
        return psl2z()

    def contains(g: GroupElement) -> bool:
        return g.is_integral and g.c % n == 0

    index = n
    for p in _prime_factors(n):
        index = index // p * (p + 1)
    return SubgroupDescriptor(f"Gamma0({n})", contains, index)


def cusp_width(group: SubgroupDescriptor, cusp) -> int:
    """Smallest h > 0 whose translation stabilizes the cusp inside the group.

    Uses an integral scaling matrix for finite cusps, so widths agree with
    the usual congruence-subgroup tables.  Raises if no width at most the
    index bound exists, which signals an inconsistent descriptor.
    """
    sigma = integral_scaling_matrix(cusp)
    sigma_inv = sigma.inverse()
    for h in range(1, group.index + 1):
        if group.contains(sigma * t_power(h) * sigma_inv):
            return h
    raise ValueError(f"no cusp width <= index bound {group.index} found for cusp {cusp}")


def eichler_shift(g: GroupElement, h: int = 1) -> tuple:
    """Split off the translation part: g = t^(n*h) * g~ with minimal top row.

    The integer n minimizes a~^2 + b~^2; the quadratic in n is convex so
    testing the two integers around the real minimizer suffices.
    """
    a, b, c, d = g.entries()
    denom = h * h * (c * c + d * d)
    if denom == 0:
        raise ValueError("degenerate element")
    n_real = (a * c + b * d) / (h * (c * c + d * d))
    best = None
    for n in {math.floor(n_real), math.ceil(n_real)}:
        aa = a - n * h * c
        bb = b - n * h * d
        size = aa * aa + bb * bb
        if best is None or size < best[0]:
            best = (size, n, aa, bb)
    _, n, aa, bb = best
    return n, GroupElement(aa, bb, c, d)


# -- coset machinery --------------------------------------------------------


def left_transversal(group: SubgroupDescriptor) -> list:
    """Coset representatives g_i with PSL2(Z) the disjoint union of g_i H.

    Breadth-first search over right multiplication by the generators; the
    first representative is the identity.
    """
    reps = [identity()]
    frontier = [identity()]
    gens = (gen_s(), gen_t(), gen_t().inverse())
    while frontier and len(reps) < group.index:
        nxt = []
        for r in frontier:
            for gen in gens:
                cand = r * gen
                if not any(group.contains(known.inverse() * cand) for known in reps):
                    reps.append(cand)
                    nxt.append(cand)
        frontier = nxt
    if len(reps) != group.index:
        raise ValueError(f"transversal search found {len(reps)} cosets, expected {group.index}")
    return reps


def _right_transversal(group: SubgroupDescriptor) -> list:
    """Representatives g_i with PSL2(Z) the disjoint union of H g_i."""
    reps = [identity()]
    frontier = [identity()]
    gens = (gen_s(), gen_t(), gen_t().inverse())
    while frontier and len(reps) < group.index:
        nxt = []
        for r in frontier:
            for gen in gens:
                cand = r * gen
                if not any(group.contains(cand * known.inverse()) for known in reps):
                    reps.append(cand)
                    nxt.append(cand)
        frontier = nxt
    if len(reps) != group.index:
        raise ValueError(f"transversal search found {len(reps)} cosets, expected {group.index}")
    return reps


def cusp_classes(group: SubgroupDescriptor) -> list:
    """Cusp classes of a finite-index subgroup.

    Returns (cusp, width, stabilizer generator) triples, one per class.
    Right cosets are grouped into orbits of the translation action; the
    orbit length is the width and the conjugated translation generates the
    stabilizer of the representative cusp.
    """
    reps = _right_transversal(group)

    def same_right_coset(x: GroupElement, y: GroupElement) -> bool:
        return group.contains(x * y.inverse())

    t = gen_t()
    unseen = list(range(len(reps)))
    classes = []
    while unseen:
        i0 = unseen[0]
        orbit = [i0]
        current = reps[i0] * t
        while not same_right_coset(current, reps[i0]):
            idx = next(j for j in unseen if same_right_coset(current, reps[j]))
            orbit.append(idx)
            current = current * t
        for j in orbit:
            unseen.remove(j)
        width = len(orbit)
        g = reps[i0]
        cusp = apply_moebius(g, INF)
        if cusp != INF:
            cusp = Fraction(g.a, g.c)
        generator = g * t_power(width) * g.inverse()
        classes.append((cusp, width, generator))
    return classes


def random_element(rng, entry_bound: int = 10**6) -> GroupElement:
    """A pseudorandom integral element with entries up to the bound.

    Draws a coprime bottom row and completes it to determinant one; the
    completion is shifted by a random multiple of the bottom row while the
    top row stays inside the bound.
    """
    while True:
        c = int(rng.integers(-entry_bound, entry_bound + 1))
        d = int(rng.integers(-entry_bound, entry_bound + 1))
        if math.gcd(c, d) == 1 and (c, d) != (0, 0):
            break
    g, x, y = _xgcd(c, d)
    # c*x + d*y = 1, so a = y, b = -x gives a*d - b*c = 1
    a, b = y, -x
    shifts = [m for m in range(-5, 6) if abs(a + m * c) <= entry_bound and abs(b + m * d) <= entry_bound]
    m = int(rng.choice(shifts)) if shifts else 0
    return GroupElement(a + m * c, b + m * d, c, d)

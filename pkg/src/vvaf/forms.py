"""Vector-valued forms: assembly, evaluation, transformation checks.

A :class:`VVAF` couples an even weight, a representation and one expansion
per component.  Expansions are stored in the basis that makes the
translation image diagonal (or in Jordan form); the optional diagonalizer
P recovers the plain components as linear combinations, so the n-th
Fourier coefficient vector is P applied to the per-component grid reads.

Built-in forms: the weight-0 theta/eta quotient vector, its weight-2 cusp
form twist by the fourth eta power, the weight-12 discriminant form, and a
synthetic logarithmic fixture driven by the symmetric-square unipotent
block.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from vvaf.moebius import GroupElement, apply_moebius, j_factor
from vvaf.qseries import (
    FracQSeries,
    LogQExpansion,
    combine,
    eta_power_series,
    eta_series,
    log_recouple,
    theta_series,
)
from vvaf.representation import Representation, builtin, jordan_form

__all__ = [
    "VVAF",
    "assemble_vvaf",
    "check_transformation",
    "theta_eta_form",
    "eta4_theta_eta_form",
    "delta_form",
    "sym2_log_form",
    "builtin_form",
    "BUILTIN_FORMS",
]


class VVAF:
    """Weight, representation and per-component expansions.

    ``basis_components`` are expansions in the basis where the translation
    image is diagonal (or Jordan); ``diagonalizer`` maps that basis back to
    plain components.  Flags are always recomputed from the exponents,
    never taken on trust.
    """

    def __init__(self, k: int, rep: Representation, basis_components, diagonalizer=None, mu_offsets=None):
        if k % 2 != 0:
            raise ValueError("weight must be even")
        if len(basis_components) != rep.m:
            raise ValueError(f"expected {rep.m} component expansions, got {len(basis_components)}")
        self.k = int(k)
        self.rep = rep
        self.basis_components = [
            comp if isinstance(comp, LogQExpansion) else LogQExpansion.from_series(comp)
            for comp in basis_components
        ]
        self.P = np.eye(rep.m, dtype=complex) if diagonalizer is None else np.array(diagonalizer, dtype=complex)
        self.P.setflags(write=False)
        widths = {comp.h for comp in self.basis_components}
        if len(widths) != 1:
            raise ValueError("all component expansions must share one width")
        self.h = widths.pop()
        if mu_offsets is None:
            mu_offsets = [_lead_offset(comp) for comp in self.basis_components]
        self.mu_offsets = [Fraction(x) for x in mu_offsets]
        for comp, off in zip(self.basis_components, self.mu_offsets):
            for e in comp.occupied_exponents():
                if (e - off).denominator != 1:
                    raise ValueError(
                        f"component exponent {e} is not an integer shift of its offset {off}"
                    )
        self.holomorphic_at_infinity = all(
            e >= 0 for comp in self.basis_components for e in comp.occupied_exponents()
        )
        self.cusp_form = all(
            e > 0 for comp in self.basis_components for e in comp.occupied_exponents()
        )
        self.is_logarithmic = any(comp.max_log_power() > 0 for comp in self.basis_components)

    @property
    def m(self) -> int:
        return self.rep.m

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, tau: complex, with_tail: bool = False):
        """Component vector at tau; optionally with a tail estimate."""
        values = np.empty(self.m, dtype=complex)
        tails = np.zeros(self.m)
        for i, comp in enumerate(self.basis_components):
            if with_tail:
                values[i], tails[i] = comp.evaluate(tau, with_tail=True)
            else:
                values[i] = comp.evaluate(tau)
        out = self.P @ values
        if with_tail:
            return out, float(np.max(np.abs(self.P) @ tails))
        return out

    def component_expansion(self, i: int) -> LogQExpansion:
        """The plain i-th component as a mixed-offset expansion."""
        acc = None
        for j in range(self.m):
            weight = self.P[i, j]
            if weight == 0:
                continue
            piece = self.basis_components[j].scale(weight)
            acc = piece if acc is None else acc + piece
        return acc if acc is not None else LogQExpansion({0: FracQSeries.zero(self.h)}, h=self.h)

    # -- coefficient access ------------------------------------------------------

    def basis_coefficients(self, nmax: int) -> np.ndarray:
        """Array v[n, i]: coefficient of the i-th basis component at n + mu_i.

        Logarithmic components contribute the log-free slot; use
        :meth:`log_slot_coefficients` for the full slot table.
        """
        out = np.zeros((nmax + 1, self.m), dtype=complex)
        for i, (comp, off) in enumerate(zip(self.basis_components, self.mu_offsets)):
            series = comp.terms.get(0)
            if series is not None:
                out[:, i] = series.coefficients_on_offset(off, nmax)
        return out

    def fourier_vectors(self, nmax: int) -> np.ndarray:
        """Array X[n] = P v[n] of Fourier coefficient vectors."""
        return self.basis_coefficients(nmax) @ self.P.T

    def log_slots(self) -> list:
        """(component index, offset, log power, series) for every slot."""
        out = []
        for i, (comp, off) in enumerate(zip(self.basis_components, self.mu_offsets)):
            for j, series in comp.terms.items():
                out.append((i, off, j, series))
        return out

    # -- serialization --------------------------------------------------------------

    def to_json(self, truncation_order: int | None = None) -> str:
        payload = {
            "weight": self.k,
            "representation": json.loads(self.rep.to_json()),
            "diagonalizer": [[[float(z.real), float(z.imag)] for z in row] for row in self.P],
            "mu_offsets": [[off.numerator, off.denominator] for off in self.mu_offsets],
            "components": [comp.as_dict() for comp in self.basis_components],
            "flags": {
                "holomorphic_at_infinity": self.holomorphic_at_infinity,
                "cusp_form": self.cusp_form,
                "logarithmic": self.is_logarithmic,
            },
            "truncation_order": truncation_order,
        }
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "VVAF":
        data = json.loads(text)
        rep = Representation.from_json(json.dumps(data["representation"]))
        P = np.array([[complex(re, im) for re, im in row] for row in data["diagonalizer"]])
        comps = [LogQExpansion.from_dict(item) for item in data["components"]]
        offsets = [Fraction(num, den) for num, den in data["mu_offsets"]]
        return VVAF(data["weight"], rep, comps, diagonalizer=P, mu_offsets=offsets)


def _lead_offset(comp: LogQExpansion) -> Fraction:
    exps = comp.occupied_exponents()
    if not exps:
        return Fraction(0)
    lead = min(exps)
    return lead - math.floor(lead)


def assemble_vvaf(rep: Representation, k: int, components, diagonalizer=None, mu_offsets=None) -> VVAF:
    """Bundle expansions into a form; flags are recomputed from exponents."""
    return VVAF(k, rep, components, diagonalizer=diagonalizer, mu_offsets=mu_offsets)


def check_transformation(X: VVAF, gamma: GroupElement, taus, tail_bound: float = 1e-10) -> float:
    """Max residual of the weight-k functional equation over sample points.

    Compares j(gamma, tau)^-k X(gamma tau) against rho(gamma) X(tau); a
    truncation tail above ``tail_bound`` at any sample raises, since the
    residual would be meaningless there.
    """
    rho_gamma = X.rep.evaluate(gamma)
    worst = 0.0
    for tau in taus:
        tau = complex(tau)
        image = apply_moebius(gamma, tau)
        lhs, tail1 = X.evaluate(image, with_tail=True)
        rhs, tail2 = X.evaluate(tau, with_tail=True)
        if max(tail1, tail2) > tail_bound:
            raise ValueError(
                f"truncation tail {max(tail1, tail2):.2e} exceeds {tail_bound:.2e} at tau={tau}"
            )
        j = j_factor(gamma, tau)
        residual = float(np.linalg.norm(j ** (-X.k) * lhs - rho_gamma @ rhs))
        worst = max(worst, residual)
    return worst


# -- built-in forms ---------------------------------------------------------------


_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _theta_eta_diagonalizer() -> np.ndarray:
    # mixes the swapped pair of components into translation eigenvectors
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, _SQRT_HALF, _SQRT_HALF],
            [0.0, _SQRT_HALF, -_SQRT_HALF],
        ],
        dtype=complex,
    )


@lru_cache(maxsize=8)
def theta_eta_form(n_terms: int = 60) -> VVAF:
    """The weight-0 vector (theta2, theta3, theta4)/eta.

    Basis components are the translation eigencombinations; their leading
    offsets 1/12, 23/24 and 11/24 match the exponents of the eigenvalues
    of the translation image.
    """
    eta = eta_series(n_terms + 2)
    t2 = theta_series(2, n_terms + 2)
    t3 = theta_series(3, n_terms + 2)
    t4 = theta_series(4, n_terms + 2)
    comp0 = combine("div", t2, eta)
    plus = combine("scale", combine("add", t3, t4), factor=_SQRT_HALF)
    minus = combine("scale", combine("add", t3, combine("scale", t4, factor=-1)), factor=_SQRT_HALF)
    comp1 = combine("div", plus, eta)
    comp2 = combine("div", minus, eta)
    rep = builtin("theta-eta")
    return VVAF(
        0,
        rep,
        [comp0, comp1, comp2],
        diagonalizer=_theta_eta_diagonalizer(),
        mu_offsets=[Fraction(1, 12), Fraction(-1, 24), Fraction(11, 24)],
    )


@lru_cache(maxsize=8)
def eta4_theta_eta_form(n_terms: int = 60) -> VVAF:
    """The weight-2 cusp form eta^4 (theta2, theta3, theta4)/eta.

    Twisting multiplies the s-image by -1 and the t-image by exp(pi i/3);
    the leading exponents 1/4, 1/8 and 5/8 are strictly positive.
    """
    eta3 = eta_power_series(3, n_terms + 2)
    t2 = theta_series(2, n_terms + 2)
    t3 = theta_series(3, n_terms + 2)
    t4 = theta_series(4, n_terms + 2)
    comp0 = combine("mul", eta3, t2)
    plus = combine("scale", combine("add", t3, t4), factor=_SQRT_HALF)
    minus = combine("scale", combine("add", t3, combine("scale", t4, factor=-1)), factor=_SQRT_HALF)
    comp1 = combine("mul", eta3, plus)
    comp2 = combine("mul", eta3, minus)
    base = builtin("theta-eta")
    twisted = Representation(-base.mat_s, np.exp(1j * np.pi / 3) * base.mat_t)
    return VVAF(
        2,
        twisted,
        [comp0, comp1, comp2],
        diagonalizer=_theta_eta_diagonalizer(),
        mu_offsets=[Fraction(1, 4), Fraction(1, 8), Fraction(5, 8)],
    )


@lru_cache(maxsize=8)
def delta_form(n_terms: int = 200) -> VVAF:
    """The weight-12 cusp form on the trivial line (24th eta power)."""
    rep = builtin("delta-multiplier-weight-12-trivial")
    return VVAF(12, rep, [eta_power_series(24, n_terms)], mu_offsets=[Fraction(0)])


@lru_cache(maxsize=8)
def sym2_log_form(n_terms: int = 40) -> VVAF:
    """Synthetic logarithmic fixture for the symmetric-square block.

    Components are built from three pure seed expansions through the
    inverse recoupling, so the vector transforms under tau -> tau + 1
    exactly by the unipotent translation image.  Only the translation
    consistency is meaningful; this is not a full modular vector.
    """
    rep = builtin("sym2")
    data = jordan_form(rep.mat_t)
    # the unipotent block in lower bidiagonal form is the reversal conjugate
    # of the canonical one, so B = P_c R maps block components to the plain basis
    R = np.eye(3)[::-1]
    B = data.P @ R
    # pure seeds with the eigenvalue-1 offset (integer exponents, all positive)
    seeds = []
    for start, value in ((1, 1.0), (2, 1.0), (1, 0.5)):
        coeffs = np.zeros(n_terms - start, dtype=complex)
        coeffs[0] = value
        if len(coeffs) > 2:
            coeffs[2] = -0.25 * value
        seeds.append(FracQSeries(1, 1, start, coeffs, order=Fraction(n_terms)))
    pure = [LogQExpansion.from_series(s) for s in seeds]
    block_components = log_recouple("backward", pure, h=1)
    return VVAF(
        0,
        rep,
        block_components,
        diagonalizer=B,
        mu_offsets=[Fraction(0), Fraction(0), Fraction(0)],
    )


BUILTIN_FORMS = {
    "theta-eta": theta_eta_form,
    "eta4-theta-eta": eta4_theta_eta_form,
    "delta": delta_form,
    "sym2-log": sym2_log_form,
}


def builtin_form(name: str, n_terms: int | None = None) -> VVAF:
    """Built-in forms by name; ``n_terms`` overrides the default order."""
    try:
        factory = BUILTIN_FORMS[name]
    except KeyError:
        raise ValueError(f"unknown builtin form {name!r}; choose from {sorted(BUILTIN_FORMS)}")
    return factory() if n_terms is None else factory(n_terms)

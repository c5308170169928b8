"""Exact sign-average certificates.

The average of |sum_j eps_j a_j| over all 2^n sign patterns dominates
sqrt(sum |a_j|^2 / 2); the constant is sharp, with equality at
a = (1, 1). The average here is an exact enumeration over all patterns,
never a sample, so a reported violation would be a genuine counterexample
rather than noise.

``chain_check`` evaluates the same inequality chain for a concrete
extension operator: the root-mean-square lower bound on the norm, the
Cauchy-Schwarz passage to the summed generator norms, and the resulting
sqrt(n/2) floor, each against a certified upper bound of the operator
norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetError
from .operators import (
    SIGN_ENUM_MAX_N,
    ExtensionOperator,
    NormCertificate,
    generator_norms,
    norm_certified,
)

_RESYNC = 1 << 10


@dataclass(frozen=True)
class KhinchinReport:
    """Exact sign-pattern average of one coefficient vector vs its RMS floor."""

    n: int
    coefficients: tuple[complex, ...]
    exact_average: float
    rhs: float
    ratio: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.ratio >= 1.0 - self.tolerance


def khinchin_average(a: Sequence[complex], max_n: int = SIGN_ENUM_MAX_N) -> float:
    """Mean of |sum_j eps_j a_j| over all 2^n sign patterns, exactly enumerated.

    Patterns are visited in Gray-code order so each step updates the
    running sum with a single flipped term; the sum is rebuilt from
    scratch periodically to keep incremental rounding far below any
    tolerance in use.
    """
    coeffs = [complex(z) for z in a]
    n = len(coeffs)
    if n < 1:
        raise ValueError("need at least one coefficient")
    if n > max_n:
        raise BudgetError(f"sign enumeration needs 2^{n} patterns, budget allows n <= {max_n}")

    signs = [1.0] * n
    running = sum(coeffs)

    def magnitudes():
        nonlocal running
        yield abs(running)
        for k in range(1, 1 << n):
            j = (k & -k).bit_length() - 1
            signs[j] = -signs[j]
            running += 2.0 * signs[j] * coeffs[j]
            if k % _RESYNC == 0:
                running = sum(s * c for s, c in zip(signs, coeffs))
            yield abs(running)

    return math.fsum(magnitudes()) / (1 << n)


def khinchin_check(
    a: Sequence[complex], tolerance: float = 1e-12, max_n: int = SIGN_ENUM_MAX_N
) -> KhinchinReport:
    """Compare the exact sign average against sqrt(sum |a_j|^2 / 2).

    The ratio average/rhs should be >= 1; a ratio below 1 - tolerance
    marks the report as failed (never raises). An all-zero vector passes
    with infinite ratio.
    """
    coeffs = tuple(complex(z) for z in a)
    average = khinchin_average(coeffs, max_n=max_n)
    rhs = math.sqrt(math.fsum(abs(z) ** 2 for z in coeffs) / 2.0)
    ratio = average / rhs if rhs > 0.0 else math.inf
    return KhinchinReport(
        n=len(coeffs),
        coefficients=coeffs,
        exact_average=average,
        rhs=rhs,
        ratio=ratio,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class ChainReport:
    """Margins of the lower-bound inequality chain for one operator."""

    n: int
    norm_hi: float
    rms_integral: float
    generator_norm_sum: float
    lower_bound: float
    rms_margin: float
    generator_margin: float
    lower_margin: float
    cauchy_schwarz_defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        margins_ok = min(self.rms_margin, self.generator_margin, self.lower_margin) >= -self.tolerance
        return margins_ok and self.cauchy_schwarz_defect <= 1e-12

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "norm_hi": self.norm_hi,
            "rms_integral": self.rms_integral,
            "generator_norm_sum": self.generator_norm_sum,
            "lower_bound": self.lower_bound,
            "rms_margin": self.rms_margin,
            "generator_margin": self.generator_margin,
            "lower_margin": self.lower_margin,
            "cauchy_schwarz_defect": self.cauchy_schwarz_defect,
            "passed": self.passed,
        }


def chain_check(
    op: ExtensionOperator,
    resolution: int,
    certificate: NormCertificate | None = None,
    tolerance: float = 1e-9,
) -> ChainReport:
    """Verify the norm lower-bound chain against a certified upper bound.

    Checks, with hi the certified upper end of the operator norm:

      * (1/sqrt(2)) * sum_x sqrt(sum_j |Phi_j(x)|^2)  <=  hi
      * (1/sqrt(2)) * sum_j ||Psi_j||_A               <=  sqrt(n) * hi
      * sqrt(n/2)                                     <=  hi

    plus the pointwise Cauchy-Schwarz step linking the first two. Margins
    are reported (rhs - lhs); negatives beyond the tolerance fail the
    report, nothing is raised.
    """
    if certificate is None:
        certificate = norm_certified(op, resolution)
    hi = certificate.hi
    n = op.n

    magnitudes = np.abs(op.phi)
    rms_profile = np.sqrt((magnitudes**2).sum(axis=0))
    rms_integral = math.fsum(rms_profile.tolist()) / math.sqrt(2.0)

    norms = generator_norms(op)
    generator_norm_sum = math.fsum(norms) / math.sqrt(2.0)

    lower_bound = math.sqrt(n / 2.0)

    cs_defect = float(np.max(magnitudes.sum(axis=0) - math.sqrt(n) * rms_profile))

    return ChainReport(
        n=n,
        norm_hi=hi,
        rms_integral=rms_integral,
        generator_norm_sum=generator_norm_sum,
        lower_bound=lower_bound,
        rms_margin=hi - rms_integral,
        generator_margin=math.sqrt(n) * hi - generator_norm_sum,
        lower_margin=hi - lower_bound,
        cauchy_schwarz_defect=max(0.0, cs_defect),
        tolerance=tolerance,
    )

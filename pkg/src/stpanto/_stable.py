"""Shared truncation kernel for the infinite sums in this package.

One rule everywhere: a sum stops once three consecutive terms satisfy
|term| <= tol * (1 + |partial sum|).  A sum whose term magnitudes instead
keep growing past 1 for many consecutive steps is declared divergent
early (convergent sums here have at most a short growth prefix before
the factorials win), as is a sum still running at the term cap.
"""

from fractions import Fraction

from .errors import ConvergenceFailure

TERM_CAP = 10_000
STABLE_RUN = 3
GROW_RUN = 64
DEFAULT_TOL = 1e-15


def _threshold(tol, magnitude):
    # Keep Fraction arithmetic exact: float * huge Fraction can overflow.
    if isinstance(magnitude, Fraction):
        return Fraction(tol) * (1 + magnitude)
    return tol * (1 + magnitude)


def stable_sum(terms, tol=DEFAULT_TOL, cap=TERM_CAP, what="series"):
    """Sum ``terms`` (an iterable) under the decay rule.

    Returns (value, terms_consumed).  Raises ConvergenceFailure when the
    cap is hit or the terms grow without settling.
    """
    total = None
    small = 0
    growing = 0
    prev_mag = None
    for n, term in enumerate(terms):
        total = term if total is None else total + term
        if n >= cap:
            raise ConvergenceFailure(f"{what}: no convergence within {cap} terms")
        mag = abs(term)
        if mag <= _threshold(tol, abs(total)):
            small += 1
            if small >= STABLE_RUN:
                return total, n + 1
        else:
            small = 0
        if prev_mag is not None and mag > prev_mag and mag > 1:
            growing += 1
            if growing >= GROW_RUN:
                raise ConvergenceFailure(f"{what}: terms grow without bound")
        else:
            growing = 0
        prev_mag = mag
    if total is None:
        raise ConvergenceFailure(f"{what}: empty term stream")
    return total, cap

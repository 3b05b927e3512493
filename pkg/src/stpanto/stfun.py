"""Special functions of the theory, as coefficient generators and point
evaluators: the deformed exponential exp(z, u) = sum u^C(n,2) z^n/{n}!,
the two-parameter product exponential with (alpha (+) beta)^n_{phi,phi'}
coefficients, the pantograph function

    E(a, b; z, u) = sum (a (+) b)^n_{1,u} z^n / {n}!,

which solves D y = a y(x) + b y(u x), and Ramanujan's partial Theta
function Theta0(x, y) = sum y^C(n,2) x^n.

The (+)-products are always computed from their defining factor products
(a + b u^k resp. alpha phi^k + beta phi'^k); the closed q-Pochhammer
rewrite a^n (-b/a; u)_n is kept as a cross-check only.

Point evaluation truncates by the shared decay rule (three consecutive
terms below tol); convergence domains are checked empirically through that
rule rather than analytically.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._stable import DEFAULT_TOL, stable_sum
from .errors import ConvergenceFailure, IndexOutOfRange
from .stnum import Params, st_number_range
from .stseries import Series


@dataclass(frozen=True)
class PantographSpec:
    """The (a, b, u) triple of E(a, b; x, u): undelayed weight a, delayed
    weight b, proportional delay u.  a = -b is legal and collapses every
    n >= 1 coefficient (first product factor a + b u^0 = 0)."""

    a: object
    b: object
    u: object


class OplusProduct:
    """Cached prefix products (alpha (+) beta)^n.

    golden mode: factors alpha phi^k + beta phi'^k (exponential products);
    delay mode: factors a + b u^k (pantograph weights).  n = 0 is the
    empty product 1.  The cache is append-only, so sharing one object
    across readers is safe.
    """

    __slots__ = ("_step", "_state", "_cache")

    def __init__(self, step, state, one, capacity: int = 64):
        self._step = step          # step(state) -> (next factor, next state)
        self._state = state
        self._cache = [one]
        self.value(capacity)

    @classmethod
    def golden(cls, params: Params, alpha, beta, capacity: int = 64) -> "OplusProduct":
        alpha, beta = params.wrap(alpha), params.wrap(beta)
        phi, phi_p = params.phi, params.phi_prime

        def step(state):
            pk, ppk = state
            return alpha * pk + beta * ppk, (pk * phi, ppk * phi_p)

        return cls(step, (params.one(), params.one()), params.one(), capacity)

    @classmethod
    def delay(cls, a, b, u, params: Params | None = None, capacity: int = 64) -> "OplusProduct":
        if params is not None:
            a, b, u = params.wrap(a), params.wrap(b), params.wrap(u)
        one = a * 0 + 1

        def step(uk):
            return a + b * uk, uk * u

        return cls(step, one, one, capacity)

    def value(self, n: int):
        if n < 0:
            raise IndexOutOfRange(f"n = {n} must be nonnegative")
        cache = self._cache
        while len(cache) <= n:
            factor, self._state = self._step(self._state)
            cache.append(cache[-1] * factor)
        return cache[n]


def oplus_pow(product: OplusProduct, n: int):
    """(alpha (+) beta)^n for the given prefix-product object."""
    return product.value(n)


def oplus_delay_pow(a, b, u, n: int):
    """(a (+) b)^n_{1,u} = prod_{k<n} (a + b u^k), directly."""
    prod, uk = a * 0 + 1, a * 0 + 1
    for _ in range(n):
        prod *= a + b * uk
        uk *= u
    return prod


def oplus_golden_pow(params: Params, alpha, beta, n: int):
    """(alpha (+) beta)^n_{phi,phi'} = prod_{k<n} (alpha phi^k + beta phi'^k)."""
    alpha, beta = params.wrap(alpha), params.wrap(beta)
    prod = params.one()
    pk, ppk = params.one(), params.one()
    for _ in range(n):
        prod *= alpha * pk + beta * ppk
        pk *= params.phi
        ppk *= params.phi_prime
    return prod


# -- deformed exponential --------------------------------------------------


def deformed_exp(params: Params, u, N: int) -> Series:
    """Series of exp(z, u): coefficients u^C(n,2) / {n}!; u = 0 gives 1 + z."""
    u = params.wrap(u)
    if u == 0:
        return Series.constant(params, 1, N) + Series.monomial(params, 1, order=N)
    nums = st_number_range(params, N)
    coeffs, w, p, fact = [], params.one(), params.one(), params.one()
    for n in range(N + 1):
        if n > 0:
            fact *= nums[n]
        coeffs.append(w / fact)
        w *= p
        p *= u
    return Series(params, coeffs)


def deformed_exp_at(params: Params, u, z, tol: float = DEFAULT_TOL):
    """exp(z, u) at a point, by the decay-truncated term sum."""
    u, z = params.wrap(u), params.wrap(z)
    if u == 0:
        return 1 + z
    nums = _NumStream(params)

    def terms():
        t, p, n = params.one(), params.one(), 0
        while True:
            yield t
            t = t * p * z / nums[n + 1]
            p *= u
            n += 1

    value, _ = stable_sum(terms(), tol, what="exp(z, u)")
    return value


def product_exp(params: Params, alpha, beta, N: int) -> Series:
    """Series with coefficients (alpha (+) beta)^n_{phi,phi'} / {n}!.

    Equals the product Exp(alpha x) Exp'(beta x) of the two golden-pair
    exponentials Exp = exp(., phi), Exp' = exp(., phi').
    """
    alpha, beta = params.wrap(alpha), params.wrap(beta)
    nums = st_number_range(params, N)
    coeffs, w, fact = [], params.one(), params.one()
    pk, ppk = params.one(), params.one()
    for n in range(N + 1):
        if n > 0:
            fact *= nums[n]
        coeffs.append(w / fact)
        w *= alpha * pk + beta * ppk
        pk *= params.phi
        ppk *= params.phi_prime
    return Series(params, coeffs)


# -- pantograph function ---------------------------------------------------


def pantograph(params: Params, spec: PantographSpec, N: int) -> Series:
    """Series of E(a, b; z, u): coefficients (a (+) b)^n_{1,u} / {n}!."""
    a, b, u = params.wrap(spec.a), params.wrap(spec.b), params.wrap(spec.u)
    nums = st_number_range(params, N)
    coeffs, w, uk, fact = [], params.one(), params.one(), params.one()
    for n in range(N + 1):
        if n > 0:
            fact *= nums[n]
        coeffs.append(w / fact)
        w *= a + b * uk
        uk *= u
    return Series(params, coeffs)


def pantograph_at(params: Params, spec: PantographSpec, x, tol: float = DEFAULT_TOL):
    """E(a, b; x, u) at a point."""
    a, b, u = params.wrap(spec.a), params.wrap(spec.b), params.wrap(spec.u)
    x = params.wrap(x)
    nums = _NumStream(params)

    def terms():
        t, uk, n = params.one(), params.one(), 0
        while True:
            yield t
            t = t * (a + b * uk) * x / nums[n + 1]
            uk *= u
            n += 1

    value, _ = stable_sum(terms(), tol, what="E(a, b; x, u)")
    return value


class _NumStream:
    """Lazy {n} lookup shared by the point evaluators."""

    def __init__(self, params: Params):
        self.params = params
        self.vals = [params.zero(), params.one()]

    def __getitem__(self, n):
        while len(self.vals) <= n:
            self.vals.append(self.params.s * self.vals[-1] + self.params.t * self.vals[-2])
        return self.vals[n]


# -- partial Theta ---------------------------------------------------------


def partial_theta(x, y, tol: float = DEFAULT_TOL):
    """Theta0(x, y) = sum_n y^C(n,2) x^n at a point.

    Needs |y| <= 1, and |x| < 1 on the boundary |y| = 1; outside that the
    terms cannot decay and the sum is rejected.
    """
    if abs(y) > 1:
        raise ConvergenceFailure(f"Theta0 needs |y| <= 1, got y = {y}")
    if abs(y) == 1 and abs(x) >= 1:
        raise ConvergenceFailure("Theta0 at |y| = 1 needs |x| < 1")

    def terms():
        t, p = x * 0 + 1, x * 0 + 1
        while True:
            yield t
            t = t * p * x
            p = p * y

    value, _ = stable_sum(terms(), tol, what="Theta0(x, y)")
    return value


def partial_theta_series(y, N: int) -> list:
    """[y^C(n,2) for n <= N]: the coefficient sequence of Theta0(., y)."""
    out, w, p = [], y * 0 + 1, y * 0 + 1
    for _ in range(N + 1):
        out.append(w)
        w = w * p
        p = p * y
    return out


def psi_theta(q, tol: float = DEFAULT_TOL):
    """psi(q) = Theta0(q, q) = sum q^C(n+1,2)."""
    return partial_theta(q, q, tol)

"""Node families on [-1, 1] and the (mu, -mu) Gauss-Lobatto rule."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketingError, NumericalError, ParameterError
from .jacobi import jacobi_deriv, jacobi_eval

ROOT_TOL = 1e-14
MIN_GAP = 1e-12


class Role(str, enum.Enum):
    REPRESENTATION = "representation"
    COLLOCATION = "collocation"


@dataclass(frozen=True)
class Grid:
    """Strictly increasing nodes in [-1, 1].

    ``family`` names the construction (``"chebyshev_lobatto"``,
    ``"jacobi_mu_lobatto"``, ``"psi_zeros"``...) and ``params`` records its
    parameters, e.g. ``{"mu": 0.5}``.
    """

    nodes: np.ndarray
    role: Role = Role.REPRESENTATION
    family: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).ravel()
        if nodes.size == 0:
            raise ParameterError("a grid needs at least one node")
        if np.any(nodes < -1.0) or np.any(nodes > 1.0):
            raise ParameterError("grid nodes must lie in [-1, 1]")
        if nodes.size > 1 and np.min(np.diff(nodes)) <= MIN_GAP:
            raise ParameterError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "role", Role(self.role))

    def __len__(self):
        return self.nodes.size

    @property
    def includes_left(self):
        return self.nodes[0] == -1.0

    @property
    def includes_right(self):
        return self.nodes[-1] == 1.0

    def drop_left(self):
        """Nodes strictly greater than -1 (``x_1 .. x_N``)."""
        return self.with_nodes(self.nodes[1:] if self.includes_left else self.nodes)

    def interior(self):
        nodes = self.nodes
        if self.includes_left:
            nodes = nodes[1:]
        if self.includes_right:
            nodes = nodes[:-1]
        return self.with_nodes(nodes)

    def with_nodes(self, nodes, role=None):
        return Grid(nodes, role=role or self.role, family=self.family, params=dict(self.params))

    def as_role(self, role):
        return self.with_nodes(self.nodes, role=role)

    def to_csv(self):
        return "".join(f"{v:.17g}\n" for v in self.nodes)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: Grid
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (len(self.nodes),):
            raise ParameterError("one weight per node is required")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def integrate(self, f):
        """Sum ``f(x_m) w_m``; ``f`` is integrated against the rule's weight function."""
        return float(np.dot(self.weights, f(self.nodes.nodes)))


def chebyshev_lobatto(N):
    """``x_j = -cos(j pi / N)``, ``j = 0..N``."""
    if N < 2:
        raise ParameterError(f"N must be at least 2, got {N}")
    j = np.arange(N + 1)
    # sine form keeps the set exactly symmetric and the endpoints exactly +-1
    nodes = np.sin(np.pi * (2 * j - N) / (2 * N))
    return Grid(nodes, family="chebyshev_lobatto", params={"N": N})


def jacobi_zeros(m, alpha, beta, tol=ROOT_TOL, maxiter=200):
    """Zeros of ``P_m^{(alpha, beta)}`` in increasing order.

    Simultaneous Newton iteration with deflation, started from Chebyshev
    angles; each root is then checked for a sign-change bracket and, if the
    check fails, the zeros are recovered by scan and bisection.
    """
    if m == 0:
        return np.empty(0)
    k = np.arange(1, m + 1)
    x = -np.cos((2 * k - 1) * np.pi / (2 * m))
    for _ in range(maxiter):
        p = jacobi_eval(m, alpha, beta, x)
        dp = jacobi_deriv(m, alpha, beta, x)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        step = p / (dp - p * np.sum(1.0 / diff, axis=1))
        x = x - step
        if np.max(np.abs(step)) <= tol:
            break
    x = np.sort(x)
    if _roots_are_bracketed(lambda t: jacobi_eval(m, alpha, beta, t), x):
        return x
    return scan_roots(lambda t: jacobi_eval(m, alpha, beta, t), m, panels=max(2000, 50 * m))


def _roots_are_bracketed(f, roots):
    if not np.all(np.isfinite(roots)) or np.any(np.abs(roots) >= 1.0):
        return False
    if roots.size > 1 and np.min(np.diff(roots)) <= MIN_GAP:
        return False
    edges = np.concatenate([[-1.0], 0.5 * (roots[1:] + roots[:-1]), [1.0]])
    values = f(edges)
    return bool(np.all(values[:-1] * values[1:] < 0))


def bisect(f, a, b, tol=1e-13, fa=None, maxiter=200):
    """Plain bisection on a sign-change bracket ``[a, b]``."""
    fa = f(a) if fa is None else fa
    for _ in range(maxiter):
        if b - a <= tol:
            break
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def scan_roots(f, expected, panels=2000, lo=-1.0, hi=1.0, tol=1e-13):
    """Roots of ``f`` on the open interval by a uniform sign scan plus bisection."""
    mesh = np.linspace(lo, hi, panels + 1)[1:-1]
    values = np.array([f(t) for t in mesh])
    roots = list(mesh[values == 0.0])
    for i in np.nonzero(values[:-1] * values[1:] < 0)[0]:
        roots.append(bisect(f, mesh[i], mesh[i + 1], tol=tol, fa=values[i]))
    roots = np.sort(np.array(roots))
    if roots.size != expected:
        raise BracketingError(f"found {roots.size} roots, expected {expected}")
    return roots


def jacobi_deriv_zeros(N, alpha, beta, with_endpoints=True, role=Role.REPRESENTATION):
    """Zeros of ``d/dx P_N^{(alpha, beta)}``, optionally with -1 and +1 appended."""
    if N < 2:
        raise ParameterError(f"N must be at least 2, got {N}")
    z = jacobi_zeros(N - 1, alpha + 1, beta + 1)
    if z.size != N - 1:
        raise BracketingError(f"expected {N - 1} interior zeros, found {z.size}")
    if with_endpoints:
        z = np.concatenate([[-1.0], z, [1.0]])
    if alpha == beta == 0:
        family = "legendre_lobatto"
    elif alpha == -beta:
        family = "jacobi_mu_lobatto"
    else:
        family = "jacobi_lobatto"
    return Grid(z, role=role, family=family, params={"N": N, "alpha": alpha, "beta": beta})


def jacobi_mu_lobatto(N, mu):
    """Zeros of ``d/dx P_N^{(mu, -mu)}`` plus both endpoints (``N + 1`` nodes)."""
    return jacobi_deriv_zeros(N, mu, -mu, with_endpoints=True)


def legendre_lobatto(N):
    return jacobi_deriv_zeros(N, 0.0, 0.0, with_endpoints=True)


def legendre_zeros(N):
    """The ``N`` zeros of the Legendre polynomial ``P_N``."""
    if N < 1:
        raise ParameterError(f"N must be at least 1, got {N}")
    z = jacobi_zeros(N, 0.0, 0.0)
    if N % 2 == 1:
        z[N // 2] = 0.0
    z = 0.5 * (z - z[::-1])
    return Grid(z, role=Role.COLLOCATION, family="legendre_zeros", params={"N": N})


def _beta_moment(k, mu):
    """``int_{-1}^{1} (1+x)^k (1-x)^mu (1+x)^-mu dx = 2^{k+1} B(k+1-mu, 1+mu)``."""
    return math.exp(
        (k + 1) * math.log(2.0) + math.lgamma(k + 1 - mu) + math.lgamma(1 + mu) - math.lgamma(k + 2)
    )


def gauss_lobatto_weights(N, mu, grid=None):
    """Gauss-Lobatto rule for the weight ``(1-x)^mu (1+x)^-mu`` on ``N + 1`` nodes.

    Interior weights use the closed form
    ``w_m = 2 G(N+mu) G(N-mu) / ((N+1) ((N-1)!)^2) * (-1) / (P_N(x_m) P'_{N-1}(x_m))``
    with ``P = P^{(mu, -mu)}``; the two endpoint weights are fixed by requiring
    exactness on ``1`` and ``x``.
    """
    if not 0.0 < mu < 1.0:
        raise ParameterError(f"mu must lie in (0, 1), got {mu}")
    grid = jacobi_mu_lobatto(N, mu) if grid is None else grid
    x = grid.nodes
    xi = x[1:-1]
    log_pref = (
        math.log(2.0)
        + math.lgamma(N + mu)
        + math.lgamma(N - mu)
        - math.log(N + 1)
        - 2 * math.lgamma(N)
    )
    denom = jacobi_eval(N, mu, -mu, xi) * jacobi_deriv(N - 1, mu, -mu, xi)
    if np.any(np.abs(denom) < 1e-300):
        raise NumericalError("degenerate Gauss-Lobatto node")
    w_int = -math.exp(log_pref) / denom
    m0 = _beta_moment(0, mu)
    m1 = _beta_moment(1, mu) - m0  # moment of x
    r0 = m0 - np.sum(w_int)
    r1 = m1 - np.sum(w_int * xi)
    w_left = 0.5 * (r0 - r1)
    w_right = 0.5 * (r0 + r1)
    return QuadratureRule(grid, np.concatenate([[w_left], w_int, [w_right]]))

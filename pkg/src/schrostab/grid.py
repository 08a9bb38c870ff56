"""Uniform meshes on [0, 1] and the discrete calculus built on them.

Everything downstream (generators, multiplier identities, energy norms) is
expressed through four objects defined here: the midpoint average, the scaled
first difference, the bidiagonal scheme matrices, and the weighted inner
product induced by the lower-bidiagonal averaging matrix.

Index conventions: a *state* vector holds nodes 1..N+1, a *shadow* vector
holds nodes 0..N, and an *extended* vector holds nodes 0..N+1.  Mixing them
up is the classic off-by-one trap of this scheme, so vectors that cross
module boundaries carry an explicit convention tag (see GridVector).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "Mesh",
    "GridVector",
    "SchemeMatrices",
    "make_mesh",
    "average",
    "difference",
    "build_scheme_matrices",
    "yh_inner",
    "yh_norm",
    "shadow_element",
    "extend_state",
    "extend_shadow",
    "triple_sum_identity_gap",
]

STATE = "state"
SHADOW = "shadow"
EXTENDED = "extended"

_CONVENTION_LENGTHS = {STATE: 1, SHADOW: 1, EXTENDED: 2}


@dataclass(frozen=True)
class Mesh:
    """Equidistant partition of [0, 1] with N interior steps parameter.

    h = 1/(N+1); nodes are x_j = j*h for j = 0..N+1.
    """

    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"mesh needs n >= 1, got n={self.n}")
        h = 1.0 / (self.n + 1)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", np.arange(self.n + 2) * h)

    @property
    def state_size(self) -> int:
        return self.n + 1

    def midpoints(self) -> np.ndarray:
        """The N+1 cell midpoints x_{j+1/2} = (j + 1/2) h, j = 0..N."""
        return (np.arange(self.n + 1) + 0.5) * self.h


def make_mesh(n: int) -> Mesh:
    return Mesh(n)


@dataclass(frozen=True)
class GridVector:
    """A complex grid sequence tagged with its index convention.

    convention is one of "state" (nodes 1..N+1), "shadow" (nodes 0..N) or
    "extended" (nodes 0..N+1); the length must match the tag.
    """

    values: np.ndarray
    convention: str
    mesh: Mesh

    def __post_init__(self):
        if self.convention not in _CONVENTION_LENGTHS:
            raise ValueError(f"unknown convention {self.convention!r}")
        values = np.asarray(self.values, dtype=complex)
        expected = self.mesh.n + _CONVENTION_LENGTHS[self.convention]
        if values.shape[0] != expected:
            raise ValueError(
                f"{self.convention} vector on mesh n={self.mesh.n} needs "
                f"length {expected}, got {values.shape[0]}"
            )
        object.__setattr__(self, "values", values)


def average(u: np.ndarray) -> np.ndarray:
    """Midpoint averages (u_j + u_{j+1}) / 2 along the first axis."""
    u = np.asarray(u)
    if u.shape[0] < 2:
        raise ValueError("average needs at least two entries")
    return 0.5 * (u[:-1] + u[1:])


def difference(u: np.ndarray, h: float) -> np.ndarray:
    """Scaled first differences (u_{j+1} - u_j) / h along the first axis."""
    u = np.asarray(u)
    if u.shape[0] < 2:
        raise ValueError("difference needs at least two entries")
    if h <= 0:
        raise ValueError(f"step size must be positive, got h={h}")
    return (u[1:] - u[:-1]) / h


@dataclass(frozen=True)
class SchemeMatrices:
    """Dense forms of the four scheme matrices for a given mesh.

    D is (N+1)x(N+1) lower bidiagonal (midpoint averaging of a state vector
    with an implicit leading zero), M is (N+1)x(N+1) upper bidiagonal
    (scaled differencing with an implicit trailing zero).  Sigma and Delta
    act on extended vectors and are therefore (N+1)x(N+2): Sigma produces
    the N+1 midpoint averages, Delta the N+1 scaled differences, so that
    h*||Sigma z||^2 = h * sum |z_{j+1/2}|^2 exactly.
    """

    D: np.ndarray
    M: np.ndarray
    Sigma: np.ndarray
    Delta: np.ndarray


def build_scheme_matrices(mesh: Mesh) -> SchemeMatrices:
    n = mesh.n
    h = mesh.h
    D = 0.5 * (np.eye(n + 1) + np.diag(np.ones(n), -1))
    M = (np.diag(np.ones(n), 1) - np.eye(n + 1)) / h
    Sigma = 0.5 * (np.eye(n + 1, n + 2) + np.eye(n + 1, n + 2, 1))
    Delta = (np.eye(n + 1, n + 2, 1) - np.eye(n + 1, n + 2)) / h
    return SchemeMatrices(D=D, M=M, Sigma=Sigma, Delta=Delta)


def _as_state(Y, mesh: Mesh) -> np.ndarray:
    Y = np.asarray(Y, dtype=complex)
    if Y.shape[0] != mesh.state_size:
        raise ValueError(
            f"state vector on mesh n={mesh.n} needs length {mesh.state_size}, "
            f"got {Y.shape[0]}"
        )
    return Y


def apply_d(Y: np.ndarray) -> np.ndarray:
    """D @ Y without forming D: midpoint averages of (0, Y)."""
    out = 0.5 * Y.copy()
    out[1:] += 0.5 * Y[:-1]
    return out


def apply_m(u: np.ndarray, h: float) -> np.ndarray:
    """M @ u without forming M: scaled differences of (u, 0)."""
    out = -u / h
    out[:-1] += u[1:] / h
    return out


def apply_mt(u: np.ndarray, h: float) -> np.ndarray:
    """M.T @ u: (u_{j-1} - u_j) / h with an implicit leading zero."""
    out = -u / h
    out[1:] += u[:-1] / h
    return out


def solve_d(b: np.ndarray) -> np.ndarray:
    """Forward substitution with the lower bidiagonal D, O(N)."""
    n = b.shape[0]
    ab = np.zeros((2, n), dtype=complex)
    ab[0] = 0.5
    ab[1, :-1] = 0.5
    return solve_banded((1, 0), ab, b)


def solve_dt(b: np.ndarray) -> np.ndarray:
    """Back substitution with the upper bidiagonal D.T, O(N)."""
    n = b.shape[0]
    ab = np.zeros((2, n), dtype=complex)
    ab[0, 1:] = 0.5
    ab[1] = 0.5
    return solve_banded((0, 1), ab, b)


def yh_inner(Y, Ytilde, mesh: Mesh) -> complex:
    """The weighted inner product h * <D Y, D Ytilde>.

    Hermitian and positive definite since D is invertible.
    """
    Y = _as_state(Y, mesh)
    Ytilde = _as_state(Ytilde, mesh)
    a = apply_d(Y)
    b = apply_d(Ytilde)
    return mesh.h * np.sum(a * np.conj(b), axis=0)


def yh_norm(Y, mesh: Mesh) -> float:
    Y = _as_state(Y, mesh)
    a = apply_d(Y)
    return np.sqrt(mesh.h * np.sum(np.abs(a) ** 2, axis=0))


def shadow_element(Y, k: float, mesh: Mesh) -> np.ndarray:
    """The auxiliary derivative vector Z (nodes 0..N) attached to a state Y.

    Z solves D.T Z = -M.T Y + (0, ..., 0, i k y_{N+1} / 2), computed by
    back substitution in O(N).  Equivalently, after padding y_0 = 0 and
    z_{N+1} = -i k y_{N+1}, the midpoint averages of z equal the scaled
    differences of y on every cell.
    """
    if k <= 0:
        raise ValueError(f"feedback gain must be positive, got k={k}")
    Y = _as_state(Y, mesh)
    rhs = -apply_mt(Y, mesh.h)
    rhs[-1] += 0.5j * k * Y[-1]
    return solve_dt(rhs)


def extend_state(Y, mesh: Mesh) -> GridVector:
    """Pad a state vector with its Dirichlet value: (0, y_1, ..., y_{N+1})."""
    Y = _as_state(Y, mesh)
    zeros = np.zeros((1,) + Y.shape[1:], dtype=complex)
    return GridVector(np.concatenate([zeros, Y]), EXTENDED, mesh)


def extend_shadow(Z, Y, k: float, mesh: Mesh) -> GridVector:
    """Pad a shadow vector with its feedback value z_{N+1} = -i k y_{N+1}."""
    Z = np.asarray(Z, dtype=complex)
    Y = _as_state(Y, mesh)
    if Z.shape[0] != mesh.state_size:
        raise ValueError(
            f"shadow vector on mesh n={mesh.n} needs length {mesh.state_size}, "
            f"got {Z.shape[0]}"
        )
    tail = (-1j * k * Y[-1])[None, ...]
    return GridVector(np.concatenate([Z, tail]), EXTENDED, mesh)


def triple_sum_identity_gap(u, v, w) -> complex:
    """Defect of the telescoping triple-product summation identity.

    For sequences u, v, w of equal length m, the four quarter-sums over
    difference/average combinations telescope to u v w evaluated at the
    endpoints.  Returns (left side) - (u_{m-1} v_{m-1} w_{m-1} -
    u_0 v_0 w_0); zero in exact arithmetic.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if not (u.shape == v.shape == w.shape):
        raise ValueError("sequences must share a common shape")
    if u.shape[0] < 2:
        raise ValueError("sequences must have length >= 2")
    du, su = u[1:] - u[:-1], u[1:] + u[:-1]
    dv, sv = v[1:] - v[:-1], v[1:] + v[:-1]
    dw, sw = w[1:] - w[:-1], w[1:] + w[:-1]
    left = 0.25 * np.sum(du * sv * sw + du * dv * dw + su * dv * sw + su * sv * dw, axis=0)
    return left - (u[-1] * v[-1] * w[-1] - u[0] * v[0] * w[0])

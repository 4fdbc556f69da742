"""Parameterized pure-state families with exact analytic Jacobians.

The reference family is a product of exponentials

    psi(theta) = exp(-i theta_m H_m) ... exp(-i theta_1 H_1) psi0

with seeded random Hermitian generators H_j = (G_j + G_j*)/(2 sqrt(N)),
G_j a matrix of i.i.d. complex Gaussians, and a seeded random normalized
base state.  The generators' spectral norm concentrates near 2 for large
N, so Jacobian magnitudes stay O(1) as N grows.  Columns of the Jacobian
follow from the product rule, with exp(-i theta H) applied through the
cached eigendecomposition of each generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .haar import SeededStream, mix_seed

# purpose tags keeping ansatz/theta streams disjoint from per-sample streams
_ANSATZ_TAG = 0x616E7361747A  # "ansatz"
_THETA_TAG = 0x7468657461  # "theta"


@dataclass(frozen=True)
class StateWithJacobian:
    """A normalized state and the matrix of its parameter derivatives
    (column j = d psi / d theta_j)."""

    state: np.ndarray  # (N,) complex, unit norm
    jacobian: np.ndarray  # (N, m) complex

    @property
    def dim(self) -> int:
        return self.state.shape[0]

    @property
    def num_params(self) -> int:
        return self.jacobian.shape[1]


@dataclass(frozen=True, eq=False)
class ProductExponentialAnsatz:
    """Product-of-exponentials state family; immutable after construction.

    Generators, base state and the cached generator eigendecompositions
    are a pure function of (dim_n, num_params, seed).
    """

    dim_n: int
    num_params: int
    seed: int
    generators: tuple[np.ndarray, ...]
    base_state: np.ndarray
    _eigs: tuple[tuple[np.ndarray, np.ndarray], ...] = field(repr=False)

    def evaluate(self, theta: np.ndarray) -> StateWithJacobian:
        return evaluate(self, theta)

    def to_json(self) -> str:
        return json.dumps({"type": "product-exp", "n": self.dim_n, "m": self.num_params,
                           "seed": self.seed}, sort_keys=True)


def build_ansatz(n: int, m: int, seed: int) -> ProductExponentialAnsatz:
    """Construct the reference family for (n, m, seed).

    Deterministic: the same arguments give bit-identical generators and
    base state.
    """
    if n < 2:
        raise ValueError("state dimension must be at least 2")
    if m < 1:
        raise ValueError("need at least one parameter")
    gen = SeededStream(mix_seed(seed, n, m), _ANSATZ_TAG).generator()
    gens = []
    eigs = []
    scale = 2.0 * np.sqrt(n)
    for _ in range(m):
        x = gen.standard_normal((n, 2 * n))
        g = x[:, :n] + 1j * x[:, n:]
        h = (g + g.conj().T) / scale
        gens.append(h)
        w, v = np.linalg.eigh(h)
        eigs.append((w, v))
    x = gen.standard_normal(2 * n)
    psi0 = x[:n] + 1j * x[n:]
    psi0 = psi0 / np.linalg.norm(psi0)
    return ProductExponentialAnsatz(
        dim_n=n, num_params=m, seed=seed,
        generators=tuple(gens), base_state=psi0, _eigs=tuple(eigs),
    )


def _apply_factor(ansatz: ProductExponentialAnsatz, j: int, theta_j: float, vecs: np.ndarray) -> np.ndarray:
    """Apply exp(-i theta_j H_j) to one vector or to the columns of a matrix."""
    w, v = ansatz._eigs[j]
    phases = np.exp(-1j * theta_j * w)
    if vecs.ndim == 1:
        return v @ (phases * (v.conj().T @ vecs))
    return v @ (phases[:, None] * (v.conj().T @ vecs))


def _check_theta(ansatz: ProductExponentialAnsatz, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.shape[0] != ansatz.num_params:
        raise ValueError(f"theta has {theta.shape[0]} entries, family has {ansatz.num_params} parameters")
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    return theta


def state_at(ansatz: ProductExponentialAnsatz, theta: np.ndarray) -> np.ndarray:
    """The state alone, without derivatives."""
    theta = _check_theta(ansatz, theta)
    psi = ansatz.base_state
    for j in range(ansatz.num_params):
        psi = _apply_factor(ansatz, j, theta[j], psi)
    return psi


def evaluate(ansatz: ProductExponentialAnsatz, theta: np.ndarray) -> StateWithJacobian:
    """State and exact Jacobian at theta.

    Column j collects exp(-i theta_m H_m)..exp(-i theta_{j+1} H_{j+1})
    (-i H_j) exp(-i theta_j H_j)..exp(-i theta_1 H_1) psi0, the product
    rule applied to the factor chain.
    """
    theta = _check_theta(ansatz, theta)
    n, m = ansatz.dim_n, ansatz.num_params
    jac = np.zeros((n, m), dtype=complex)
    psi = ansatz.base_state
    for j in range(m):
        psi = _apply_factor(ansatz, j, theta[j], psi)
        if j > 0:
            jac[:, :j] = _apply_factor(ansatz, j, theta[j], jac[:, :j])
        jac[:, j] = -1j * (ansatz.generators[j] @ psi)
    return StateWithJacobian(state=psi, jacobian=jac)


def jacobian_fd(ansatz: ProductExponentialAnsatz, theta: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite-difference Jacobian, the independent cross-check
    for `evaluate`; error decays as step^2."""
    if step <= 0:
        raise ValueError("step must be positive")
    theta = _check_theta(ansatz, theta)
    m = ansatz.num_params
    cols = []
    for j in range(m):
        tp = theta.copy()
        tm = theta.copy()
        tp[j] += step
        tm[j] -= step
        cols.append((state_at(ansatz, tp) - state_at(ansatz, tm)) / (2 * step))
    return np.column_stack(cols)


def seeded_uniform_theta(m: int, seed: int) -> np.ndarray:
    """Deterministic theta draw, uniform over [-pi, pi]^m."""
    gen = SeededStream(seed, _THETA_TAG).generator()
    return gen.uniform(-np.pi, np.pi, size=m)


def resolve_theta(policy, m: int, seed: int) -> np.ndarray:
    """Resolve a theta policy: the string "seeded-uniform" or an explicit
    vector of length m."""
    if isinstance(policy, str):
        if policy == "seeded-uniform":
            return seeded_uniform_theta(m, seed)
        raise ValueError(f"unknown theta policy {policy!r}")
    theta = np.asarray(policy, dtype=float).ravel()
    if theta.shape[0] != m:
        raise ValueError(f"explicit theta has {theta.shape[0]} entries, expected {m}")
    return theta


def ansatz_from_json(text: str) -> ProductExponentialAnsatz:
    """Rebuild a family from its JSON spec {type, n, m, seed}."""
    spec = json.loads(text)
    if spec.get("type") != "product-exp":
        raise ValueError(f"unknown ansatz type {spec.get('type')!r}")
    return build_ansatz(int(spec["n"]), int(spec["m"]), int(spec["seed"]))

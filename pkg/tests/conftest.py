"""Shared test fixtures: small closed-form state families."""

import numpy as np
import pytest

from haarfisher.ansatz import StateWithJacobian


class CosSinFamily:
    """psi(theta) = (cos theta, sin theta) in C^2: one real parameter,
    QFIM identically 1."""

    dim_n = 2
    num_params = 1

    def evaluate(self, theta) -> StateWithJacobian:
        th = float(np.asarray(theta, dtype=float).ravel()[0])
        state = np.array([np.cos(th), np.sin(th)], dtype=complex)
        jac = np.array([[-np.sin(th)], [np.cos(th)]], dtype=complex)
        return StateWithJacobian(state=state, jacobian=jac)


class GlobalPhaseFamily:
    """psi(theta) = exp(-i theta) psi0: pure gauge, QFIM identically 0."""

    num_params = 1

    def __init__(self, psi0):
        self.psi0 = np.asarray(psi0, dtype=complex)
        self.psi0 = self.psi0 / np.linalg.norm(self.psi0)
        self.dim_n = self.psi0.shape[0]

    def evaluate(self, theta) -> StateWithJacobian:
        th = float(np.asarray(theta, dtype=float).ravel()[0])
        state = np.exp(-1j * th) * self.psi0
        return StateWithJacobian(state=state, jacobian=(-1j * state)[:, None])


@pytest.fixture
def cos_sin_family():
    return CosSinFamily()


@pytest.fixture
def global_phase_family():
    gen = np.random.default_rng(77)
    psi0 = gen.standard_normal(6) + 1j * gen.standard_normal(6)
    return GlobalPhaseFamily(psi0)

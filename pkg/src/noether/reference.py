"""Space-time gauge currents in matrix form.

Written against matrix-valued fields A_mu = D_mu,a T_a and a periodic
difference of its own, so that it can serve as an oracle for the
adjoint-component assembly in ``noether``."""

from __future__ import annotations

import numpy as np


def _shift_difference(field: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """Periodic central difference along site ``axis`` of a (sites..., matrix...) array."""
    size = field.shape[axis]
    ahead = np.take(field, (np.arange(size) + 1) % size, axis=axis)
    behind = np.take(field, (np.arange(size) - 1) % size, axis=axis)
    return (ahead - behind) / (2 * spacing)


def _components(matrices: np.ndarray, generators: np.ndarray) -> np.ndarray:
    """Return tr(X T_a) / tr(T_a T_a) for every generator, appended as the last axis."""
    norms = np.array([np.trace(t @ t).real for t in generators])
    traces = np.stack([np.trace(matrices @ t, axis1=-2, axis2=-1) for t in generators], axis=-1)
    return traces / norms


def reference_currents(
    generators: np.ndarray,
    gauge: np.ndarray,
    matter: np.ndarray,
    spacing: float,
    g: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Return (J1, J2) for a space-time gauge field D[a, mu, *sites] and matter phi[k, *sites].

    G_mu_nu = d_nu A_mu - d_mu A_nu - i g [A_mu, A_nu];
    J1^mu_a = g (-2 Im((Dhat_mu phi)^dagger T_a phi) - i tr([G^mu_nu, A_nu] T_a) / k);
    J2^nu_a = sum_mu d_mu G^mu_nu components."""
    generators = np.asarray(generators, dtype=np.complex128)
    dims = 4
    # site axes first, matrix axes last
    potential = np.moveaxis(np.asarray(gauge, dtype=np.complex128), (0, 1), (-2, -1))
    A = [np.tensordot(potential[..., mu], generators, axes=([-1], [0])) for mu in range(dims)]
    phi = np.moveaxis(np.asarray(matter, dtype=np.complex128), 0, -1)[..., None]

    def d(field: np.ndarray, mu: int) -> np.ndarray:
        return _shift_difference(field, mu, spacing)

    G = [[None] * dims for _ in range(dims)]
    for mu in range(dims):
        for nu in range(dims):
            commutator = A[mu] @ A[nu] - A[nu] @ A[mu]
            G[mu][nu] = d(A[mu], nu) - d(A[nu], mu) - 1j * g * commutator

    covariant = [d(phi, mu) + 1j * g * (A[mu] @ phi) for mu in range(dims)]
    J1 = []
    for mu in range(dims):
        matter_term = np.stack(
            [
                -2 * np.imag(np.conj(covariant[mu]).swapaxes(-2, -1) @ t @ phi)[..., 0, 0]
                for t in generators
            ],
            axis=-1,
        )
        bracket = sum(G[mu][nu] @ A[nu] - A[nu] @ G[mu][nu] for nu in range(dims))
        gauge_term = np.real(-1j * _components(bracket, generators))
        J1.append(g * (matter_term + gauge_term))

    J2 = []
    for nu in range(dims):
        divergence = sum(d(G[mu][nu], mu) for mu in range(dims))
        J2.append(np.real(_components(divergence, generators)))

    J1_values = np.moveaxis(np.stack(J1, axis=-1), (-2, -1), (0, 1))
    J2_values = np.moveaxis(np.stack(J2, axis=-1), (-2, -1), (0, 1))
    return J1_values, J2_values

"""Stroboscopic evolution and the physical observables.

Trajectories record expectation values at t = nT for n = 0..n_max, with
the state advanced by repeated application of the one-period propagator
(never by matrix powers).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import states
from .model import FloquetOperator, ModelSpec, as_operator

MZ = "mz"
CZZ = "czz"


@dataclass(frozen=True, eq=False)
class DiagonalObservable:
    """An observable diagonal in the computational basis."""

    label: str
    diag: np.ndarray


def total_magnetization(n_qubits: int) -> DiagonalObservable:
    """M_z = sum_i sigma_z^i; diagonal value N - 2*popcount(s)."""
    diag = (n_qubits - 2 * states.popcounts(n_qubits)).astype(float)
    return DiagonalObservable(MZ, diag)


def pair_correlation(
    n_qubits: int, pairs: list[tuple[int, int]] | None = None
) -> DiagonalObservable:
    """C_zz = sum over listed pairs of sigma_z^i sigma_z^j.

    Defaults to the nearest-neighbour pairs (i, i+1), i = 1..N-1, for any
    boundary condition: for three qubits that is (1,2) and (2,3).
    """
    if n_qubits < 2:
        raise ValueError("pair correlations require at least 2 qubits")
    if pairs is None:
        pairs = [(i, i + 1) for i in range(1, n_qubits)]
    diag = np.zeros(1 << n_qubits)
    for i, j in pairs:
        diag += states.z_values(n_qubits, i) * states.z_values(n_qubits, j)
    return DiagonalObservable(CZZ, diag)


def observable_by_label(label: str, n_qubits: int) -> DiagonalObservable:
    if label == MZ:
        return total_magnetization(n_qubits)
    if label == CZZ:
        return pair_correlation(n_qubits)
    raise ValueError(f"unknown observable label {label!r}")


@dataclass
class TimeSeries:
    """Stroboscopic record of one observable, values[n] at t = nT."""

    times: np.ndarray
    values: np.ndarray
    label: str
    spec: ModelSpec | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def period(self) -> float:
        return self.spec.protocol.period if self.spec is not None else 1.0


def stroboscopic_trajectory(
    model: ModelSpec | FloquetOperator,
    psi0: np.ndarray,
    n_max: int,
    observables: list[DiagonalObservable],
) -> list[TimeSeries]:
    """Evolve psi0 for n_max periods, recording each observable at every n."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    op = as_operator(model)
    op._require_dim(psi0)
    for obs in observables:
        if len(obs.diag) != op.dim:
            raise ValueError(f"observable {obs.label!r} has dimension {len(obs.diag)}, state has {op.dim}")
    records = np.empty((len(observables), n_max + 1))
    psi = np.asarray(psi0, dtype=np.complex128)
    for n in range(n_max + 1):
        for k, obs in enumerate(observables):
            records[k, n] = states.expectation_diagonal(psi, obs.diag)
        if n < n_max:
            psi = op.apply(psi)
    times = np.arange(n_max + 1)
    return [
        TimeSeries(times=times, values=records[k], label=obs.label, spec=op.spec)
        for k, obs in enumerate(observables)
    ]


def magnetization_series(
    model: ModelSpec | FloquetOperator, psi0: np.ndarray, n_max: int
) -> TimeSeries:
    op = as_operator(model)
    return stroboscopic_trajectory(op, psi0, n_max, [total_magnetization(op.spec.n_qubits)])[0]


def pair_correlation_series(
    model: ModelSpec | FloquetOperator, psi0: np.ndarray, n_max: int
) -> TimeSeries:
    op = as_operator(model)
    return stroboscopic_trajectory(op, psi0, n_max, [pair_correlation(op.spec.n_qubits)])[0]

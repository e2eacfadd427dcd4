"""The differential of the squared-modulus map as a real Jacobian, its
rank/kernel analysis, and the sweep verifying that the kernel dimension
always equals the Berezin multiplicity of the eigenvalue 1."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotSkewHermitianError, NotTangentError, ZeroEntryError
from .matrices import ENTRY_FLOOR, Unitary, haar_random_unitary
from .spectral import spectrum
from .symbols import WeightedSpace, build_berezin, operator_to_c_symbol, operator_to_d_symbol

JACOBIAN_RANK_TOL = 1e-8  # relative: scaled by sigma_max * n


def skew_hermitian_basis(n: int) -> list[np.ndarray]:
    """A real-linear basis of the skew-Hermitian n x n matrices (the
    tangent space of the unitary group at the identity): n imaginary
    diagonal units, then antisymmetric-real and symmetric-imaginary units
    for each off-diagonal pair.  n^2 elements in total."""
    basis = []
    for k in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[k, k] = 1j
        basis.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1.0, -1.0
            basis.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = m[j, i] = 1j
            basis.append(m)
    return basis


def tangent_direction(u: Unitary, x: np.ndarray) -> np.ndarray:
    """Push the tangent vector X (skew-Hermitian, acting as u' = X u)
    through the squared-modulus map: p'[k, l] = 2 Re((X u)[k, l] conj(u[k, l])).

    The result has vanishing row and column sums (it is tangent to the
    affine space of doubly stochastic matrices)."""
    x = np.asarray(x, dtype=complex)
    if np.max(np.abs(x + x.conj().T)) > 1e-12:
        raise NotSkewHermitianError("X + X* must vanish")
    return 2.0 * np.real((x @ u.matrix) * np.conj(u.matrix))


def symbol_pair_of_direction(u: Unitary, u_dot: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The (c-symbol, d-symbol) pair of the skew-Hermitian operator behind
    a tangent direction u_dot: f[k, l] = u_dot[k, l] / u[k, l] and
    g[k, l] = -conj(u_dot[k, l]) / conj(u[k, l]), so f = -conj(g)."""
    if not u.nonzero_entries:
        raise ZeroEntryError("symbols need all entries nonzero")
    u_dot = np.asarray(u_dot, dtype=complex)
    x = u_dot @ u.matrix.conj().T
    if np.max(np.abs(x + x.conj().T)) > 1e-10:
        raise NotTangentError("u_dot u* is not skew-Hermitian")
    f = u_dot / u.matrix
    return f, -np.conj(f)


@dataclass
class JacobianReport:
    n: int
    singular_values: np.ndarray
    rank: int
    kernel_dim: int
    berezin_multiplicity_of_one: int
    theorem_holds: bool
    is_submersion: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            "berezin_multiplicity_of_one": self.berezin_multiplicity_of_one,
            "theorem_holds": self.theorem_holds,
            "is_submersion": self.is_submersion,
            "singular_values": [float(s) for s in self.singular_values],
        }


def jacobian_report(u: Unitary) -> JacobianReport:
    """Assemble the real n^2 x n^2 Jacobian of the squared-modulus map at u
    (columns indexed by the skew-Hermitian basis), rank it by SVD, and
    compare its kernel dimension with the Berezin multiplicity of 1
    computed by the entirely independent spectral pipeline."""
    if not u.nonzero_entries:
        raise ZeroEntryError("kernel analysis needs all entries nonzero")
    n = u.n
    cols = [tangent_direction(u, x).ravel() for x in skew_hermitian_basis(n)]
    jac = np.stack(cols, axis=1)
    sv = np.linalg.svd(jac, compute_uv=False)
    # entries of the Jacobian are O(1), so the scale never drops below 1;
    # without the floor an all-zero Jacobian (n = 1) would rank itself
    smax = max(float(sv[0]), 1.0) if sv.size else 1.0
    rank = int(np.sum(sv > JACOBIAN_RANK_TOL * smax * n))
    kernel_dim = n * n - rank

    space = WeightedSpace.from_unitary(u)
    mult = spectrum(build_berezin(u), space).kernel_method_dim
    return JacobianReport(
        n=n,
        singular_values=sv,
        rank=rank,
        kernel_dim=kernel_dim,
        berezin_multiplicity_of_one=mult,
        theorem_holds=(kernel_dim == mult),
        is_submersion=(rank == (n - 1) ** 2),
    )


def finite_difference_direction(u: Unitary, x: np.ndarray, h: float) -> np.ndarray:
    """One-sided difference quotient of the squared-modulus map along the
    curve t -> exp(tX) u; first-order accurate, used to validate the
    analytic differential."""
    curve = scipy.linalg.expm(h * np.asarray(x, dtype=complex)) @ u.matrix
    return (np.abs(curve) ** 2 - np.abs(u.matrix) ** 2) / h


@dataclass
class SweepReport:
    n: int
    samples: int
    skipped: int
    submersive_fraction: float
    theorem_violations: int
    kernel_dim_histogram: dict
    min_kernel_dim: int
    max_kernel_dim: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "skipped": self.skipped,
            "submersive_fraction": self.submersive_fraction,
            "theorem_violations": self.theorem_violations,
            "kernel_dim_histogram": {str(k): v for k, v in sorted(self.kernel_dim_histogram.items())},
            "min_kernel_dim": self.min_kernel_dim,
            "max_kernel_dim": self.max_kernel_dim,
        }


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("BEREZIN_LAB_THREADS", "1")))
    except ValueError:
        return 1


def submersion_sweep(
    n: int,
    samples: int,
    seed: int,
    workers: int | None = None,
    on_sample=None,
) -> SweepReport:
    """Haar-sample unitaries and collect Jacobian reports.

    Each sample gets its own derived seed (seed, index), so results do not
    depend on scheduling order.  Samples with an entry at or below the
    entry floor are skipped and counted, not perturbed.  on_sample, if
    given, is called with (index, JacobianReport or None) as results
    complete (streaming hook for the CLI)."""
    if n < 2:
        raise ValueError("sweep needs n >= 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    def run_one(i: int):
        u = haar_random_unitary(n, [seed, i])
        if np.min(np.abs(u.matrix)) <= ENTRY_FLOOR:
            return i, None
        return i, jacobian_report(u)

    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, range(samples)))
    else:
        results = [run_one(i) for i in range(samples)]

    skipped = 0
    submersive = 0
    violations = 0
    histogram: dict[int, int] = {}
    kdims = []
    for i, report in results:
        if on_sample is not None:
            on_sample(i, report)
        if report is None:
            skipped += 1
            continue
        kdims.append(report.kernel_dim)
        histogram[report.kernel_dim] = histogram.get(report.kernel_dim, 0) + 1
        submersive += report.is_submersion
        violations += not report.theorem_holds
    used = samples - skipped
    return SweepReport(
        n=n,
        samples=samples,
        skipped=skipped,
        submersive_fraction=(submersive / used) if used else 0.0,
        theorem_violations=violations,
        kernel_dim_histogram=histogram,
        min_kernel_dim=min(kdims) if kdims else 0,
        max_kernel_dim=max(kdims) if kdims else 0,
    )

"""The two concrete matrix families with large symmetry groups, their group
actions on symbols, and the structure checks built on them:

* the discrete Fourier matrix on Z/nZ, acted on by phase/shift operators
  satisfying the Weyl commutation relations;
* the permutation-invariant family u = Id + (theta - 1)/n, acted on by the
  symmetric group, with its four isotypic components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotApplicableError, ThetaDegenerateError
from .matrices import Unitary, validate_unitary
from .symbols import (
    WeightedSpace,
    build_berezin,
    c_symbol_to_operator,
    d_symbol_to_operator,
)

THETA_DEGENERACY_TOL = 1e-8


def unit_root(n: int, k) -> complex | np.ndarray:
    """exp(2 pi i k / n); k may be an integer or an array of exponents."""
    return np.exp(2j * np.pi * np.asarray(k) / n)


def fourier_matrix(n: int) -> Unitary:
    """The discrete Fourier matrix u[k, l] = exp(2 pi i k l / n) / sqrt(n)."""
    k = np.arange(n)
    return validate_unitary(unit_root(n, np.outer(k, k)) / np.sqrt(n), tol=1e-12)


def check_theta(theta: complex) -> complex:
    theta = complex(theta)
    if abs(abs(theta) - 1.0) > 1e-8:
        raise ValueError(f"|theta| must equal 1, got {abs(theta):.6f}")
    if abs(theta - 1.0) < THETA_DEGENERACY_TOL or abs(theta + 1.0) < THETA_DEGENERACY_TOL:
        raise ThetaDegenerateError("theta must stay away from +-1")
    return theta


def symmetric_family_matrix(n: int, theta: complex) -> Unitary:
    """u = Id + (theta - 1)/n: identity off the constants, phase theta on
    them.  Commutes with every permutation matrix and has no zero entries."""
    theta = check_theta(theta)
    m = np.eye(n, dtype=complex) + (theta - 1.0) / n
    return validate_unitary(m)


def phase_operator(n: int, r: int) -> np.ndarray:
    """Diagonal multiplication by exp(2 pi i r k / n)."""
    return np.diag(unit_root(n, r * np.arange(n)))


def shift_operator(n: int, r: int) -> np.ndarray:
    """(Z_r phi)[k] = phi[k + r] (indices mod n)."""
    return np.eye(n)[(np.arange(n) + r) % n]


def check_weyl_relations(n: int) -> float:
    """Max deviation over all (r, s) of the commutation relation
    Z_s W_r = eps(rs) W_r Z_s, together with the Fourier conjugations
    F* W_r F = Z_{-r} and F* Z_r F = W_r."""
    f = fourier_matrix(n).matrix
    dev = 0.0
    for r in range(n):
        wr = phase_operator(n, r)
        dev = max(dev, np.max(np.abs(f.conj().T @ wr @ f - shift_operator(n, -r))))
        dev = max(dev, np.max(np.abs(f.conj().T @ shift_operator(n, r) @ f - wr)))
        for s in range(n):
            zs = shift_operator(n, s)
            dev = max(
                dev, np.max(np.abs(zs @ wr - unit_root(n, r * s) * wr @ zs))
            )
    return float(dev)


def character_symbol(n: int, r: int, s: int) -> np.ndarray:
    """f[k, l] = exp(2 pi i (r k + s l) / n), an eigenfunction of the
    Fourier-matrix Berezin transform with eigenvalue exp(2 pi i r s / n)."""
    k = np.arange(n)
    return unit_root(n, r * k)[:, np.newaxis] * unit_root(n, s * k)[np.newaxis, :]


def invariant_pair_count(n: int) -> int:
    """#{(r, s): 0 <= r, s < n, r s = 0 mod n} by enumeration.  Equals
    2n - 1 exactly when n is prime."""
    return sum(1 for r in range(n) for s in range(n) if (r * s) % n == 0)


@dataclass
class CharacterReport:
    n: int
    max_residual: float
    invariant_pair_count: int
    multiplicity_of_one: int

    @property
    def counts_agree(self) -> bool:
        return self.invariant_pair_count == self.multiplicity_of_one


def fourier_eigenfunction_check(n: int, residual_tol: float = 1e-9) -> CharacterReport:
    """Verify every character symbol is an eigenfunction of the Fourier
    Berezin transform with the predicted unit-root eigenvalue, and compare
    the pair-count oracle against the spectral multiplicity of 1."""
    from .spectral import spectrum

    u = fourier_matrix(n)
    space = WeightedSpace.from_unitary(u)
    b = build_berezin(u)
    worst = 0.0
    for r in range(n):
        for s in range(n):
            f = character_symbol(n, r, s)
            worst = max(worst, space.norm(b.apply(f) - unit_root(n, r * s) * f))
    mult = spectrum(b, space).kernel_method_dim
    report = CharacterReport(
        n=n,
        max_residual=float(worst),
        invariant_pair_count=invariant_pair_count(n),
        multiplicity_of_one=mult,
    )
    if worst > residual_tol:
        raise AssertionError(f"character residual {worst:.3e} above {residual_tol:g}")
    return report


# ---------------------------------------------------------------------------
# group actions on symbols


def permute_symbol(f: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """(R_sigma f)[k, l] = f[sigma^-1(k), sigma^-1(l)]."""
    inv = np.argsort(sigma)
    return f[np.ix_(inv, inv)]


def permutation_operator(sigma: np.ndarray) -> np.ndarray:
    """(S_sigma phi)[k] = phi[sigma^-1(k)]."""
    return np.eye(len(sigma))[np.argsort(sigma)]


def shift_symbol(f: np.ndarray, s: int, t: int) -> np.ndarray:
    """The translation action on Fourier symbols: result[k, l] = f[k+t, l-s]."""
    return np.roll(f, shift=(-t, s), axis=(0, 1))


def intertwining_deviation(
    u: Unitary,
    perm_k: np.ndarray,
    perm_l: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
) -> float:
    """Max deviation of a[k] u[g^-1 k, g^-1 l] conj(b[l]) from u[k, l]:
    zero iff (perm_k, perm_l, a, b) is a symmetry of the matrix."""
    inv_k = np.argsort(np.asarray(perm_k))
    inv_l = np.argsort(np.asarray(perm_l))
    lhs = np.asarray(a)[:, np.newaxis] * u.matrix[np.ix_(inv_k, inv_l)] * np.conj(b)[np.newaxis, :]
    return float(np.max(np.abs(lhs - u.matrix)))


def check_permutation_equivariance(
    n: int, theta: complex, trials: int, seed
) -> float:
    """For random permutations sigma and random symbols f on the symmetric
    family: both symbol-to-operator maps must intertwine conjugation by the
    permutation operator with the index action on symbols, and the Berezin
    transform must commute with that action.  Returns the max deviation."""
    u = symmetric_family_matrix(n, theta)
    b = build_berezin(u)
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(trials):
        sigma = rng.permutation(n)
        s_op = permutation_operator(sigma)
        f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rf = permute_symbol(f, sigma)
        dev = max(
            dev,
            np.max(np.abs(c_symbol_to_operator(u, rf) - s_op @ c_symbol_to_operator(u, f) @ s_op.T)),
            np.max(np.abs(d_symbol_to_operator(u, rf) - s_op @ d_symbol_to_operator(u, f) @ s_op.T)),
            np.max(np.abs(b.apply(rf) - permute_symbol(b.apply(f), sigma))),
        )
    return float(dev)


def check_shift_commutation(n: int, trials: int, seed) -> float:
    """The Fourier Berezin transform commutes with all n^2 translations of
    the symbol grid; returns the max deviation over random symbols."""
    u = fourier_matrix(n)
    b = build_berezin(u)
    rng = np.random.default_rng(seed)
    dev = 0.0
    for _ in range(trials):
        f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for s in range(n):
            for t in range(n):
                rf = shift_symbol(f, s, t)
                dev = max(dev, np.max(np.abs(b.apply(rf) - shift_symbol(b.apply(f), s, t))))
    return float(dev)


# ---------------------------------------------------------------------------
# isotypic decomposition for the symmetric family


def _zero_sum_basis(n: int) -> list[np.ndarray]:
    """n - 1 vectors spanning {a: sum(a) = 0}."""
    out = []
    for i in range(n - 1):
        v = np.zeros(n)
        v[i], v[n - 1] = 1.0, -1.0
        out.append(v)
    return out


def _nullspace_combos(generators: list[np.ndarray], constraint_rows: np.ndarray) -> list[np.ndarray]:
    """Basis of the span of generators killed by the linear constraints."""
    gen = np.stack([g.ravel() for g in generators], axis=1)
    mat = constraint_rows @ gen
    _, sv, vh = np.linalg.svd(mat)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0))) if sv.size else 0
    null = vh[rank:].T
    cols = gen @ null
    return [c.reshape(generators[0].shape) for c in cols.T]


def isotypic_bases(n: int) -> tuple[list, list, list, list]:
    """Bases of the four invariant subspaces of symbols under simultaneous
    permutation of both indices:

    1. constants plus multiples of the diagonal indicator (dim 2);
    2. a_k + b_l + c_k delta_kl with a, b, c summing to zero (dim 3(n-1));
    3. antisymmetric with vanishing row sums (dim (n-1)(n-2)/2);
    4. symmetric, zero diagonal, vanishing row sums (dim n(n-3)/2).
    """
    if n < 3:
        raise NotApplicableError("isotypic split needs n >= 3")
    ones = np.ones((n, n))
    v1 = [ones, np.eye(n)]

    v2 = []
    for a in _zero_sum_basis(n):
        v2.append(np.outer(a, np.ones(n)))
    for b in _zero_sum_basis(n):
        v2.append(np.outer(np.ones(n), b))
    for c in _zero_sum_basis(n):
        v2.append(np.diag(c))

    row_sums = np.zeros((n, n * n))
    for k in range(n):
        row_sums[k, k * n : (k + 1) * n] = 1.0

    anti = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            anti.append(m)
    v3 = _nullspace_combos(anti, row_sums)

    sym = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j] = m[j, i] = 1.0
            sym.append(m)
    v4 = _nullspace_combos(sym, row_sums) if n > 3 else []
    return v1, v2, v3, v4


def isotypic_projectors(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four projectors onto the isotypic subspaces, as n^2 x n^2
    matrices on flattened symbols.

    The subspaces form a direct sum of the whole symbol space, so each
    projector is taken along the sum of the other three; that projector is
    metric-independent and turns out orthogonal in the weighted product of
    any symmetric-family matrix.
    """
    bases = isotypic_bases(n)
    blocks = [np.stack([b.ravel() for b in basis], axis=1) if basis else
              np.zeros((n * n, 0)) for basis in bases]
    full = np.concatenate(blocks, axis=1)
    if full.shape[1] != n * n:
        raise AssertionError("isotypic bases do not fill the symbol space")
    inv = np.linalg.inv(full)
    out = []
    start = 0
    for blk in blocks:
        d = blk.shape[1]
        out.append(blk @ inv[start : start + d])
        start += d
    return tuple(out)


# ---------------------------------------------------------------------------
# predicted spectrum of the symmetric family


def predicted_clusters(n: int, theta: complex) -> list[tuple[complex, int]]:
    """The five eigenvalue clusters of the symmetric family's Berezin
    transform with their multiplicities (some may be empty for small n)."""
    theta = check_theta(theta)
    tb = np.conj(theta)
    denom = theta + n - 1
    return [
        (1.0 + 0j, 2 * n - 1),
        (-theta * (tb + n - 1) / denom, 1),
        (-(tb + n - 1) / denom, n - 1),
        (tb, (n * n - 3 * n + 2) // 2),
        (-tb, (n * n - 3 * n) // 2),
    ]


@dataclass
class TableCluster:
    value: complex
    predicted_multiplicity: int
    observed_multiplicity: int
    max_deviation: float
    merged: bool

    @property
    def matches(self) -> bool:
        return self.observed_multiplicity == self.predicted_multiplicity


@dataclass
class TableReport:
    n: int
    theta: complex
    clusters: list
    multiplicity_of_one: int

    @property
    def all_match(self) -> bool:
        return all(c.matches for c in self.clusters)


def verify_symmetric_family_spectrum(
    n: int, theta: complex, match_tol: float = 1e-8
) -> TableReport:
    """Compute the Berezin spectrum of the symmetric family and match it
    against the five predicted clusters.

    Predicted values that collide (within match_tol) are merged with summed
    multiplicities rather than reported as failures.
    """
    from .spectral import spectrum

    if n < 3:
        raise NotApplicableError("spectrum table needs n >= 3")
    u = symmetric_family_matrix(n, theta)
    space = WeightedSpace.from_unitary(u)
    b = build_berezin(u)
    summary = spectrum(b, space)

    merged: list[list] = []  # [value, multiplicity, was_merged]
    for value, mult in predicted_clusters(n, theta):
        for entry in merged:
            if abs(entry[0] - value) <= match_tol:
                entry[1] += mult
                entry[2] = True
                break
        else:
            merged.append([value, mult, False])

    reps = np.array([entry[0] for entry in merged])
    assigned = np.argmin(np.abs(summary.eigenvalues[:, np.newaxis] - reps), axis=1)
    clusters = []
    for idx, (value, mult, was_merged) in enumerate(merged):
        dists = np.abs(summary.eigenvalues[assigned == idx] - value)
        # only eigenvalues actually within tolerance count toward the cluster
        count = int(np.sum(dists <= match_tol))
        dev = float(np.max(dists)) if dists.size else 0.0
        clusters.append(
            TableCluster(
                value=complex(value),
                predicted_multiplicity=mult,
                observed_multiplicity=count,
                max_deviation=dev,
                merged=was_merged,
            )
        )
    return TableReport(
        n=n,
        theta=theta,
        clusters=clusters,
        multiplicity_of_one=summary.kernel_method_dim,
    )

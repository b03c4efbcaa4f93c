"""Finite-dimensional biorthogonal algebra for Jordan-cell spectra.

Everything lives in C^N with dense matrices.  A chain spec fixes the
operator as a direct sum of Jordan blocks; the module tracks how the
paired (direct, conjugate) bases behave under the triangle group of
basis redefinitions, in the transposition-symmetric representation
(Jordan form along the secondary diagonal), and under the complex
rotations that diagonalize the resolution of identity.  The bilinear
pairing u^t v without conjugation is the finite stand-in for the
integral pairing of the differential models: a rotated cell of size
p >= 2 keeps a single eigenvector whose bilinear self-pairing vanishes
identically, yet the resolution of identity stays intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ParameterError, SingularTransform

__all__ = [
    "CellGroup",
    "JordanSpec",
    "BiorthSystem",
    "TriangleTransform",
    "RotatedSystem",
    "jordan_block",
    "build",
    "chain_residual",
    "triangle",
    "hat_basis",
    "t_symmetric_form",
    "cell_rotation",
    "diagonalize_identity",
    "mansym_matrix",
    "FORCED_ZERO",
    "ANTIDIAG",
    "FREE",
    "binorm_structure",
    "intertwiner_space",
    "rank_profile",
    "expected_rank_profile",
    "random_spec",
    "random_transform",
]

FORCED_ZERO, ANTIDIAG, FREE = 0, 1, 2


@dataclass(frozen=True)
class CellGroup:
    """One eigenvalue with the sizes of every Jordan cell attached to it."""

    value: complex
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "sizes", tuple(int(p) for p in self.sizes))
        if not self.sizes:
            raise ParameterError("eigenvalue carries no cells")
        if any(p < 1 for p in self.sizes):
            raise ParameterError("cell sizes must be positive")


@dataclass(frozen=True)
class JordanSpec:
    groups: tuple[CellGroup, ...]

    def __post_init__(self):
        groups = tuple(
            g if isinstance(g, CellGroup) else CellGroup(*g) for g in self.groups
        )
        object.__setattr__(self, "groups", groups)
        if not groups:
            raise ParameterError("empty spec")
        values = [g.value for g in groups]
        for i, v in enumerate(values):
            for w in values[i + 1 :]:
                if v == w:
                    raise ParameterError(
                        "repeated eigenvalue: merge its cells into one group"
                    )

    @property
    def dimension(self) -> int:
        return sum(sum(g.sizes) for g in self.groups)

    def cells(self) -> Iterator[tuple[complex, int, int]]:
        """Yield (eigenvalue, size, offset) for every cell in storage order."""
        off = 0
        for g in self.groups:
            for p in g.sizes:
                yield g.value, p, off
                off += p


@dataclass
class BiorthSystem:
    """Paired bases as column matrices; column order follows spec.cells()."""

    direct: np.ndarray
    conjugate: np.ndarray

    def pairing(self) -> np.ndarray:
        return self.conjugate.conj().T @ self.direct

    def identity_resolution(self) -> np.ndarray:
        return self.direct @ self.conjugate.conj().T


def jordan_block(value: complex, size: int) -> np.ndarray:
    J = np.eye(size, dtype=complex) * value
    if size > 1:
        J += np.diag(np.ones(size - 1), 1)
    return J


def _reversal(size: int) -> np.ndarray:
    return np.eye(size)[::-1].copy()


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    off = 0
    for b in blocks:
        p = b.shape[0]
        out[off : off + p, off : off + p] = b
        off += p
    return out


def build(spec: JordanSpec) -> tuple[np.ndarray, BiorthSystem]:
    """Operator matrix (block Jordan) plus the canonical paired bases.

    In the canonical frame both bases are the standard unit vectors, so
    biorthogonality and the resolution of identity hold exactly.
    """
    H = _block_diag([jordan_block(v, p) for v, p, _ in spec.cells()])
    n = spec.dimension
    eye = np.eye(n, dtype=complex)
    return H, BiorthSystem(direct=eye.copy(), conjugate=eye.copy())


def chain_residual(spec: JordanSpec, H: np.ndarray, system: BiorthSystem) -> float:
    """Sup-norm violation of the chain relations and of biorthogonality.

    Checks, cell by cell: (H - lam) psi_0 = 0, (H - lam) psi_i = psi_{i-1},
    (H^+ - lam*) tpsi_{p-1} = 0, (H^+ - lam*) tpsi_{p-i-1} = tpsi_{p-i},
    and globally <tpsi_j | psi_k> = delta_{jk}.
    """
    n = spec.dimension
    P, Q = system.direct, system.conjugate
    Hd = H.conj().T
    worst = float(np.max(np.abs(system.pairing() - np.eye(n))))
    for value, p, off in spec.cells():
        shift = H - value * np.eye(n)
        shift_d = Hd - np.conj(value) * np.eye(n)
        cols = range(off, off + p)
        for i, c in enumerate(cols):
            want = np.zeros(n, dtype=complex) if i == 0 else P[:, c - 1]
            worst = max(worst, float(np.max(np.abs(shift @ P[:, c] - want))))
        for i, c in enumerate(cols):
            # conjugate chain runs downward from the top element
            want = (
                np.zeros(n, dtype=complex) if i == p - 1 else Q[:, c + 1]
            )
            worst = max(worst, float(np.max(np.abs(shift_d @ Q[:, c] - want))))
    return worst


@dataclass(frozen=True)
class TriangleTransform:
    """Per-cell first columns a = (alpha_00, alpha_10, ...) of the Toeplitz action."""

    coefficients: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "coefficients",
            tuple(np.asarray(a, dtype=complex) for a in self.coefficients),
        )


def _toeplitz_lower(a: np.ndarray) -> np.ndarray:
    p = len(a)
    M = np.zeros((p, p), dtype=complex)
    for i in range(p):
        M[i, : i + 1] = a[i::-1]
    return M


def triangle(
    spec: JordanSpec, system: BiorthSystem, transform: TriangleTransform
) -> BiorthSystem:
    """Re-express both bases under the triangle group.

    The direct basis mixes downward through a lower-triangular Toeplitz
    matrix alpha-hat; biorthogonality then forces the conjugate action
    beta-hat = (alpha-hat^{-1})^dagger, which is upper-triangular Toeplitz,
    so the chain relations survive on both sides.
    """
    cells = list(spec.cells())
    if len(transform.coefficients) != len(cells):
        raise ParameterError("one coefficient row per cell required")
    P = system.direct.copy()
    Q = system.conjugate.copy()
    for (value, p, off), a in zip(cells, transform.coefficients):
        if len(a) != p:
            raise ParameterError("coefficient row length must equal cell size")
        if a[0] == 0:
            raise SingularTransform("leading triangle coefficient vanishes")
        A = _toeplitz_lower(a)
        B = np.linalg.inv(A).conj().T
        sl = slice(off, off + p)
        P[:, sl] = system.direct[:, sl] @ A.T
        Q[:, sl] = system.conjugate[:, sl] @ B.T
    return BiorthSystem(direct=P, conjugate=Q)


def hat_basis(spec: JordanSpec, system: BiorthSystem) -> np.ndarray:
    """Conjugate basis renumbered cell-wise: hat_j = tilde_{p-j-1}."""
    Q = system.conjugate.copy()
    for _, p, off in spec.cells():
        Q[:, off : off + p] = Q[:, off : off + p][:, ::-1]
    return Q


def t_symmetric_form(
    spec: JordanSpec, system: BiorthSystem
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrix of the operator over (direct, hat) pairs.

    Returns (M, hat) with  H = P M hat^dagger.  M is symmetric — per cell
    it is the Jordan block flipped onto the secondary diagonal — and the
    coefficient matrix of the identity in the same pairs is the per-cell
    anti-diagonal reversal, exactly.
    """
    H, _ = build(spec)
    Qhat = hat_basis(spec, system)
    Rev = _block_diag([_reversal(p) for _, p, _ in spec.cells()])
    M = system.conjugate.conj().T @ H @ system.direct @ Rev
    return M, Qhat


def cell_rotation(size: int, kappa: float = 1.0) -> np.ndarray:
    """Complex rotation S with S^t Rev S = I for one cell.

    size 2 uses the explicit one-parameter form

        Psi_1 = (kappa psi_0 + psi_1 / kappa) / sqrt2
        Psi_2 = i (kappa psi_0 - psi_1 / kappa) / sqrt2

    whose freedom survives in the rotated operator matrix; other sizes
    take the orthogonal eigenframe of the reversal and rescale its
    negative-pairing columns by i.
    """
    if size < 1:
        raise ParameterError("cell size must be positive")
    if kappa == 0:
        raise ParameterError("kappa must be nonzero")
    if size == 2:
        return np.array(
            [[kappa, 1j * kappa], [1 / kappa, -1j / kappa]], dtype=complex
        ) / np.sqrt(2)
    d, Om = np.linalg.eigh(_reversal(size))
    return Om.astype(complex) @ np.diag(np.where(d < 0, 1j, 1.0 + 0j))


@dataclass
class RotatedSystem:
    """Diagonal-identity frame: paired bases plus the symmetric cell matrix."""

    direct: np.ndarray
    conjugate: np.ndarray
    matrix: np.ndarray

    def pairing(self) -> np.ndarray:
        return self.conjugate.conj().T @ self.direct

    def identity_resolution(self) -> np.ndarray:
        return self.direct @ self.conjugate.conj().T


def diagonalize_identity(
    spec: JordanSpec, system: BiorthSystem, kappa: float = 1.0
) -> RotatedSystem:
    """Rotate each cell so the resolution of identity becomes the unit matrix.

    The operator's coefficient matrix turns into S^{-1} M S^{-t}: still
    symmetric, similar to the original Jordan block, hence exactly as
    non-diagonalizable as before — its lone eigenvector per cell has zero
    bilinear self-pairing.
    """
    M, Qhat = t_symmetric_form(spec, system)
    S = _block_diag([cell_rotation(p, kappa) for _, p, _ in spec.cells()])
    Sinv = np.linalg.inv(S)
    return RotatedSystem(
        direct=system.direct @ S,
        conjugate=Qhat @ S.conj(),
        matrix=Sinv @ M @ Sinv.T,
    )


def mansym_matrix(value: complex, kappa: float = 1.0) -> np.ndarray:
    """Closed form of the rotated 2x2 cell matrix."""
    k2 = 1.0 / (2.0 * kappa**2)
    return np.array(
        [[value + k2, -1j * k2], [-1j * k2, value - k2]], dtype=complex
    )


def binorm_structure(p: int) -> np.ndarray:
    """Pattern of bilinear pairings forced by the chain algebra inside a cell.

    Entry classes: FORCED_ZERO where i + j <= p - 2, ANTIDIAG on
    i + j = p - 1 (all equal and nonzero), FREE above.  For p = 1 the
    single entry is the nonvanishing diagonal pairing.
    """
    if p < 1:
        raise ParameterError("cell size must be positive")
    i = np.arange(p)[:, None]
    j = np.arange(p)[None, :]
    out = np.full((p, p), FREE, dtype=int)
    out[i + j <= p - 2] = FORCED_ZERO
    out[i + j == p - 1] = ANTIDIAG
    return out


def intertwiner_space(value: complex, p: int) -> np.ndarray:
    """Basis of symmetric B with J^t B = B J for one Jordan block.

    Independent oracle for binorm_structure: the space is spanned by the
    constant anti-diagonal (Hankel) matrices supported on i + j >= p - 1,
    so its dimension is p and every member obeys the pattern.
    """
    J = jordan_block(value, p)
    pairs = [(i, j) for i in range(p) for j in range(i, p)]
    cols = []
    for i, j in pairs:
        B = np.zeros((p, p), dtype=complex)
        B[i, j] = B[j, i] = 1.0
        cols.append((J.T @ B - B @ J).ravel())
    A = np.array(cols).T
    _, s, vh = np.linalg.svd(A)
    tol = 1e-10 * (s[0] if len(s) else 1.0)
    null = vh[np.sum(s > tol) :]
    basis = np.zeros((len(null), p, p), dtype=complex)
    for k, row in enumerate(null):
        for c, (i, j) in zip(row, pairs):
            basis[k, i, j] = basis[k, j, i] = c
    return basis


def rank_profile(H: np.ndarray, value: complex, pmax: int) -> list[int]:
    """Ranks of (H - value)^m for m = 1..pmax."""
    n = H.shape[0]
    shift = H - value * np.eye(n)
    out = []
    power = np.eye(n, dtype=complex)
    for _ in range(pmax):
        power = power @ shift
        out.append(int(np.linalg.matrix_rank(power, tol=1e-8)))
    return out


def expected_rank_profile(spec: JordanSpec, value: complex, pmax: int) -> list[int]:
    n = spec.dimension
    return [
        n - sum(min(m, p) for v, p, _ in spec.cells() if v == value)
        for m in range(1, pmax + 1)
    ]


def random_spec(rng: np.random.Generator, max_dim: int = 12) -> JordanSpec:
    """Random cell structure with distinct eigenvalues, N <= max_dim."""
    target = int(rng.integers(1, max_dim + 1))
    groups: list[CellGroup] = []
    values: list[complex] = []
    left = target
    while left > 0:
        while True:
            v = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if all(abs(v - w) > 0.2 for w in values):
                break
        n_cells = 1 + int(rng.integers(0, 2)) if left >= 2 else 1
        sizes = []
        for _ in range(n_cells):
            if left == 0:
                break
            p = int(rng.integers(1, min(5, left) + 1))
            sizes.append(p)
            left -= p
        values.append(v)
        groups.append(CellGroup(value=v, sizes=tuple(sizes)))
    return JordanSpec(groups=tuple(groups))


def random_transform(rng: np.random.Generator, spec: JordanSpec) -> TriangleTransform:
    rows = []
    for _, p, _ in spec.cells():
        a = 0.5 * (rng.standard_normal(p) + 1j * rng.standard_normal(p))
        while abs(a[0]) < 0.3:
            a[0] = rng.standard_normal() + 1j * rng.standard_normal()
        rows.append(a)
    return TriangleTransform(coefficients=tuple(rows))

"""Labeled operators on tensor products of finite-dimensional systems.

Every operator in this package carries an ordered tuple of ``(label, dim)``
pairs naming its subsystems.  Composite indices are row-major with the first
label most significant, so ``kron(a, b)`` agrees with ``numpy.kron`` and a
matrix on labels ``("X", "Y")`` reshapes to a 4-index tensor as
``m.reshape(dx, dy, dx, dy)`` with row axes first.

All structural operations (permutation, partial trace, partial transpose) are
label-driven; callers never handle raw axis arithmetic.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

# Numerical contract shared across the package.
PSD_TOL = 1e-9      # eigenvalues below -PSD_TOL are a hard error
TRACE_TOL = 1e-8    # allowed deviation of traces / norms from their target
HERM_TOL = 1e-8     # allowed max-norm deviation from Hermiticity
RECON_TOL = 1e-9    # entrywise tolerance for reconstruction identities
RANK_REL_TOL = 1e-9  # eigenvalues below RANK_REL_TOL * lambda_max do not count toward rank


class LabeledDims:
    """Ordered collection of uniquely labeled subsystem dimensions."""

    __slots__ = ("_labels", "_dims")

    def __init__(self, entries: Iterable[tuple[str, int]]):
        labels = []
        dims = []
        for label, dim in entries:
            if not isinstance(label, str) or not label:
                raise ValueError(f"subsystem label must be a non-empty string, got {label!r}")
            if int(dim) != dim or dim < 1:
                raise ValueError(f"dimension of {label!r} must be a positive integer, got {dim!r}")
            labels.append(label)
            dims.append(int(dim))
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate subsystem labels in {labels}")
        self._labels = tuple(labels)
        self._dims = tuple(dims)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def total(self) -> int:
        return int(np.prod(self._dims, dtype=np.int64)) if self._dims else 1

    def dim(self, label: str) -> int:
        return self._dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self._labels.index(label)
        except ValueError:
            raise KeyError(f"no subsystem labeled {label!r} in {self._labels}") from None

    def restrict(self, labels: Sequence[str]) -> "LabeledDims":
        """Sub-collection containing ``labels``, kept in this object's order."""
        wanted = set(labels)
        missing = wanted - set(self._labels)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not present in {self._labels}")
        return LabeledDims((l, d) for l, d in self if l in wanted)

    def __iter__(self):
        return iter(zip(self._labels, self._dims))

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDims):
            return NotImplemented
        return self._labels == other._labels and self._dims == other._dims

    def __hash__(self) -> int:
        return hash((self._labels, self._dims))

    def __repr__(self) -> str:
        inner = ", ".join(f"{l}:{d}" for l, d in self)
        return f"LabeledDims({inner})"


def as_dims(entries: LabeledDims | Iterable[tuple[str, int]]) -> LabeledDims:
    return entries if isinstance(entries, LabeledDims) else LabeledDims(entries)


class LabeledOperator:
    """Square matrix acting on the tensor product described by ``dims``."""

    __slots__ = ("matrix", "dims")

    def __init__(self, matrix: np.ndarray, dims: LabeledDims | Iterable[tuple[str, int]]):
        dims = as_dims(dims)
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (dims.total, dims.total):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match total dimension {dims.total} of {dims}"
            )
        self.matrix = matrix
        self.dims = dims

    @property
    def labels(self) -> tuple[str, ...]:
        return self.dims.labels

    def tensor(self) -> np.ndarray:
        """Reshape to one row axis and one column axis per subsystem."""
        shape = self.dims.dims
        return self.matrix.reshape(shape + shape)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def relabel(self, mapping: dict[str, str]) -> "LabeledOperator":
        """Rename subsystems without touching the matrix."""
        new = LabeledDims((mapping.get(l, l), d) for l, d in self.dims)
        return LabeledOperator(self.matrix, new)

    def __repr__(self) -> str:
        return f"LabeledOperator({self.dims})"


class DensityOperator:
    """Unit-trace positive semidefinite :class:`LabeledOperator`.

    Construction enforces Hermiticity (within ``HERM_TOL``, then symmetrizes),
    unit trace (within ``TRACE_TOL``) and positivity: eigenvalues in
    ``[-PSD_TOL, 0)`` are clipped to zero and the spectrum renormalized, while
    anything more negative is a hard error.
    """

    __slots__ = ("op",)

    def __init__(self, matrix: np.ndarray | LabeledOperator,
                 dims: LabeledDims | Iterable[tuple[str, int]] | None = None):
        if isinstance(matrix, LabeledOperator):
            if dims is not None:
                raise ValueError("pass dims only with a raw matrix")
            op = matrix
        else:
            op = LabeledOperator(matrix, dims)
        m = op.matrix
        herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if herm_dev > HERM_TOL:
            raise ValueError(f"matrix is not Hermitian: max deviation {herm_dev:.3e} > {HERM_TOL}")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} is not 1 within {TRACE_TOL}")
        lam_min = float(np.linalg.eigvalsh(m)[0])
        if lam_min < -PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {lam_min:.3e}")
        if lam_min < 0.0:
            lam, v = np.linalg.eigh(m)
            lam = np.clip(lam, 0.0, None)
            lam /= lam.sum()
            m = (v * lam) @ v.conj().T
        self.op = LabeledOperator(m, op.dims)

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dims(self) -> LabeledDims:
        return self.op.dims

    @property
    def labels(self) -> tuple[str, ...]:
        return self.op.labels

    def __repr__(self) -> str:
        return f"DensityOperator({self.dims})"


class PureState:
    """Unit-norm state vector on labeled subsystems."""

    __slots__ = ("amplitudes", "dims")

    def __init__(self, amplitudes: np.ndarray,
                 dims: LabeledDims | Iterable[tuple[str, int]]):
        dims = as_dims(dims)
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (dims.total,):
            raise ValueError(
                f"amplitude vector of length {amplitudes.shape[0]} does not match {dims}"
            )
        nrm2 = float(np.vdot(amplitudes, amplitudes).real)
        if abs(nrm2 - 1.0) > TRACE_TOL:
            raise ValueError(f"squared norm {nrm2!r} is not 1 within {TRACE_TOL}")
        self.amplitudes = amplitudes
        self.dims = dims

    @property
    def labels(self) -> tuple[str, ...]:
        return self.dims.labels

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def __repr__(self) -> str:
        return f"PureState({self.dims})"


def _op(a: LabeledOperator | DensityOperator) -> LabeledOperator:
    return a.op if isinstance(a, DensityOperator) else a


def kron(a: LabeledOperator | DensityOperator,
         b: LabeledOperator | DensityOperator) -> LabeledOperator:
    """Tensor product; label sets must be disjoint."""
    a, b = _op(a), _op(b)
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise ValueError(f"kron operands share labels {sorted(overlap)}")
    dims = LabeledDims(list(a.dims) + list(b.dims))
    return LabeledOperator(np.kron(a.matrix, b.matrix), dims)


def permute(a: LabeledOperator | DensityOperator, order: Sequence[str]) -> LabeledOperator:
    """Reorder subsystems; ``order`` must be a permutation of the labels."""
    a = _op(a)
    if sorted(order) != sorted(a.labels):
        raise ValueError(f"{list(order)} is not a permutation of {a.labels}")
    if tuple(order) == a.labels:
        return LabeledOperator(a.matrix, a.dims)
    n = len(a.dims)
    perm = [a.dims.index(l) for l in order]
    axes = perm + [p + n for p in perm]
    dims = LabeledDims((l, a.dims.dim(l)) for l in order)
    return LabeledOperator(a.tensor().transpose(axes).reshape(dims.total, dims.total), dims)


def partial_trace(a: LabeledOperator | DensityOperator, keep: Sequence[str]) -> LabeledOperator:
    """Trace out everything except ``keep`` (result keeps a's original label order)."""
    a = _op(a)
    kept = set(keep)
    missing = kept - set(a.labels)
    if missing:
        raise KeyError(f"labels {sorted(missing)} not present in {a.labels}")
    if kept == set(a.labels):
        return LabeledOperator(a.matrix, a.dims)
    n = len(a.dims)
    row = list(range(n))
    col = [n + i if a.labels[i] in kept else i for i in range(n)]
    out = [i for i in range(n) if a.labels[i] in kept]
    out_axes = out + [n + i for i in out]
    dims = a.dims.restrict(keep)
    reduced = np.einsum(a.tensor(), row + col, out_axes)
    return LabeledOperator(reduced.reshape(dims.total, dims.total), dims)


def partial_transpose(a: LabeledOperator | DensityOperator, subset: Sequence[str]) -> LabeledOperator:
    """Transpose the listed subsystems in place."""
    a = _op(a)
    chosen = set(subset)
    missing = chosen - set(a.labels)
    if missing:
        raise KeyError(f"labels {sorted(missing)} not present in {a.labels}")
    n = len(a.dims)
    axes = list(range(2 * n))
    for i in range(n):
        if a.labels[i] in chosen:
            axes[i], axes[n + i] = n + i, i
    return LabeledOperator(a.tensor().transpose(axes).reshape(a.matrix.shape), a.dims)


def herm_eig(a: LabeledOperator | DensityOperator | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvectors.

    The input must be Hermitian within ``HERM_TOL``; it is symmetrized before
    the solve so the decomposition is exactly real.
    """
    m = a if isinstance(a, np.ndarray) else _op(a).matrix
    m = np.asarray(m, dtype=complex)
    herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if herm_dev > HERM_TOL:
        raise ValueError(f"matrix is not Hermitian: max deviation {herm_dev:.3e} > {HERM_TOL}")
    lam, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return lam[::-1].copy(), v[:, ::-1].copy()


def max_entangled(d: int, labels: tuple[str, str] = ("M0", "M1")) -> PureState:
    """Normalized maximally entangled pair of dimension ``d`` on two fresh labels."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    amp = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return PureState(amp, LabeledDims([(labels[0], d), (labels[1], d)]))


def purify(rho: DensityOperator, purifier_label: str = "REF") -> PureState:
    """Purification with a purifier of dimension equal to ``rank(rho)``.

    The reduced state on the original labels reproduces ``rho`` (after clipping
    eigenvalues below ``RANK_REL_TOL * lambda_max``).
    """
    if purifier_label in rho.labels:
        raise ValueError(f"purifier label {purifier_label!r} collides with {rho.labels}")
    lam, v = herm_eig(rho.op)
    cut = RANK_REL_TOL * float(lam[0]) if lam.size else 0.0
    support = lam > cut
    lam = np.clip(lam[support], 0.0, None)
    lam /= lam.sum()
    vecs = v[:, support]
    rank = int(lam.size)
    # sum_i sqrt(lam_i) |v_i> ⊗ |i>, row-major with the purifier least significant
    amp = (vecs * np.sqrt(lam)).reshape(-1)
    dims = LabeledDims(list(rho.dims) + [(purifier_label, rank)])
    return PureState(amp, dims)


def identity(dims: LabeledDims | Iterable[tuple[str, int]]) -> LabeledOperator:
    dims = as_dims(dims)
    return LabeledOperator(np.eye(dims.total, dtype=complex), dims)


def trace_distance(a: LabeledOperator | DensityOperator,
                   b: LabeledOperator | DensityOperator) -> float:
    """Half the trace norm of ``a - b`` after aligning label order."""
    a, b = _op(a), _op(b)
    if set(a.labels) != set(b.labels):
        raise ValueError(f"label sets differ: {a.labels} vs {b.labels}")
    diff = a.matrix - permute(b, a.labels).matrix
    lam = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return 0.5 * float(np.sum(np.abs(lam)))

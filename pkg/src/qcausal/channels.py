"""Kraus channels, Choi-Jamiolkowski representations, and random sampling.

Conventions:
  * the CJ vector of a linear map ``T`` is ``sum_i |i> ⊗ T|i>``;
  * the Choi operator of a channel lives on ``in ⊗ out`` with the input first;
  * random sampling uses numpy's seeded PCG64 generators, so every sampled
    object is reproducible from an explicit integer seed.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .labeled import (
    HERM_TOL,
    PSD_TOL,
    TRACE_TOL,
    DensityOperator,
    LabeledDims,
    LabeledOperator,
    as_dims,
    identity,
    partial_trace,
    permute,
)

UNITARY_TOL = 1e-10


def ensure_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class KrausChannel:
    """Completely positive map given by a list of Kraus operators.

    ``sum_t K_t† K_t`` must equal the identity within ``TRACE_TOL``
    (trace preserving) or be dominated by it within ``PSD_TOL``
    (trace non-increasing, flagged via ``trace_preserving=False``).
    """

    __slots__ = ("in_dims", "out_dims", "kraus", "trace_preserving")

    def __init__(self, in_dims, out_dims, kraus: Sequence[np.ndarray]):
        in_dims = as_dims(in_dims)
        out_dims = as_dims(out_dims)
        if not kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        ops = []
        for k in kraus:
            k = np.asarray(k, dtype=complex)
            if k.shape != (out_dims.total, in_dims.total):
                raise ValueError(
                    f"Kraus operator shape {k.shape} does not match "
                    f"{out_dims.total} x {in_dims.total} for {in_dims} -> {out_dims}"
                )
            ops.append(k)
        stack = np.stack(ops)
        gram = np.einsum("tij,til->jl", stack.conj(), stack)
        dev = float(np.max(np.abs(gram - np.eye(in_dims.total))))
        if dev <= TRACE_TOL:
            tp = True
        else:
            top = float(np.linalg.eigvalsh(gram)[-1])
            if top > 1.0 + PSD_TOL:
                raise ValueError(
                    f"Kraus operators are not trace non-increasing: "
                    f"max eigenvalue of sum K†K is {top!r}"
                )
            tp = False
        self.in_dims = in_dims
        self.out_dims = out_dims
        self.kraus = tuple(ops)
        self.trace_preserving = tp

    @classmethod
    def from_unitary(cls, u: np.ndarray, in_dims, out_dims) -> "KrausChannel":
        in_dims = as_dims(in_dims)
        out_dims = as_dims(out_dims)
        u = np.asarray(u, dtype=complex)
        if in_dims.total != out_dims.total:
            raise ValueError(f"unitary channel needs equal dimensions, got {in_dims} -> {out_dims}")
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(in_dims.total))))
        if dev > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary: max deviation {dev:.3e} > {UNITARY_TOL}")
        return cls(in_dims, out_dims, [u])

    @classmethod
    def identity(cls, dims) -> "KrausChannel":
        dims = as_dims(dims)
        return cls(dims, dims, [np.eye(dims.total, dtype=complex)])

    @property
    def kraus_stack(self) -> np.ndarray:
        return np.stack(self.kraus)

    def __repr__(self) -> str:
        return (f"KrausChannel({self.in_dims} -> {self.out_dims}, "
                f"{len(self.kraus)} Kraus, tp={self.trace_preserving})")


class ChoiOperator:
    """Choi operator of a channel, on the labels ``in_dims + out_dims``."""

    __slots__ = ("op", "in_labels", "out_labels", "trace_preserving")

    def __init__(self, op: LabeledOperator, in_labels: tuple[str, ...],
                 out_labels: tuple[str, ...], trace_preserving: bool = True):
        if set(in_labels) | set(out_labels) != set(op.labels):
            raise ValueError(
                f"in {in_labels} + out {out_labels} must cover the operator labels {op.labels}"
            )
        if set(in_labels) & set(out_labels):
            raise ValueError("input and output labels overlap")
        self.op = op
        self.in_labels = tuple(in_labels)
        self.out_labels = tuple(out_labels)
        self.trace_preserving = trace_preserving

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    def __repr__(self) -> str:
        return f"ChoiOperator(in={self.in_labels}, out={self.out_labels})"


def cj_vector(t: np.ndarray) -> np.ndarray:
    """CJ vector ``sum_i |i> ⊗ T|i>`` of a (dout x din) matrix, unnormalized.

    The result is indexed row-major with the input copy most significant:
    component ``(i, a)`` equals ``T[a, i]``.
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {t.shape}")
    return t.T.reshape(-1).copy()


def choi_from_kraus(c: KrausChannel) -> ChoiOperator:
    """Choi operator ``sum_t |K_t>><<K_t|`` on ``in ⊗ out`` labels."""
    overlap = set(c.in_dims.labels) & set(c.out_dims.labels)
    if overlap:
        raise ValueError(f"input and output share labels {sorted(overlap)}; relabel first")
    vecs = np.stack([cj_vector(k) for k in c.kraus])
    j = np.einsum("ti,tj->ij", vecs, vecs.conj())
    dims = LabeledDims(list(c.in_dims) + list(c.out_dims))
    op = LabeledOperator(j, dims)
    marg = partial_trace(op, c.in_dims.labels).matrix
    eye = np.eye(c.in_dims.total)
    if c.trace_preserving:
        dev = float(np.max(np.abs(marg - eye)))
        if dev > TRACE_TOL:
            raise ValueError(f"Choi marginal deviates from identity by {dev:.3e} > {TRACE_TOL}")
    else:
        top = float(np.linalg.eigvalsh(marg - eye)[-1])
        if top > PSD_TOL:
            raise ValueError(f"Choi marginal exceeds the identity by {top:.3e} > {PSD_TOL}")
    return ChoiOperator(op, c.in_dims.labels, c.out_dims.labels, c.trace_preserving)


def apply_channel(c: KrausChannel,
                  rho: DensityOperator | LabeledOperator) -> DensityOperator | LabeledOperator:
    """Apply a CPTP channel to a state, possibly on a subsystem of it.

    The channel's input labels must all appear in ``rho``; untouched labels
    ride along unchanged.  The output labels replace the input labels at the
    position of the first consumed label, so an identity channel returns the
    state unchanged.
    """
    if not c.trace_preserving:
        raise ValueError("apply_channel requires a trace-preserving channel")
    wrap = isinstance(rho, DensityOperator)
    op = rho.op if wrap else rho
    consumed = list(c.in_dims.labels)
    for l in consumed:
        if l not in op.labels:
            raise KeyError(f"channel input label {l!r} not present in state labels {op.labels}")
        if op.dims.dim(l) != c.in_dims.dim(l):
            raise ValueError(
                f"dimension mismatch on {l!r}: state has {op.dims.dim(l)}, "
                f"channel expects {c.in_dims.dim(l)}"
            )
    rest = [l for l in op.labels if l not in set(consumed)]
    collide = set(c.out_dims.labels) & set(rest)
    if collide:
        raise ValueError(f"channel output labels {sorted(collide)} collide with untouched labels")
    front = permute(op, consumed + rest)
    din = c.in_dims.total
    drest = front.dims.total // din
    t4 = front.matrix.reshape(din, drest, din, drest)
    ks = c.kraus_stack
    out4 = np.einsum("tax,xrys,tby->arbs", ks, t4, ks.conj())
    dout = c.out_dims.total
    out_dims = LabeledDims(list(c.out_dims) + [(l, op.dims.dim(l)) for l in rest])
    out_op = LabeledOperator(out4.reshape(dout * drest, dout * drest), out_dims)
    # splice the output labels where the consumed block began
    pos = min(op.dims.index(l) for l in consumed)
    before = [l for l in op.labels[:pos] if l not in set(consumed)]
    after = [l for l in op.labels[pos:] if l not in set(consumed)]
    final = before + list(c.out_dims.labels) + after
    out_op = permute(out_op, final)
    return DensityOperator(out_op) if wrap else out_op


def apply_choi(j: ChoiOperator, rho: DensityOperator | LabeledOperator) -> LabeledOperator:
    """Contract a Choi operator against a state on the channel's input labels.

    Independent evaluation route from :func:`apply_channel`:
    ``Λ(ρ) = Tr_in[(ρ^T ⊗ 1) J]`` expressed as an index contraction.
    """
    op = rho.op if isinstance(rho, DensityOperator) else rho
    if set(op.labels) != set(j.in_labels):
        raise ValueError(f"state labels {op.labels} must equal Choi input labels {j.in_labels}")
    jin = permute(j.op, list(j.in_labels) + list(j.out_labels))
    din = op.dims.total
    dout = jin.dims.total // din
    jt = jin.matrix.reshape(din, dout, din, dout)
    r = permute(op, j.in_labels).matrix
    out = np.einsum("xy,xayb->ab", r, jt)
    return LabeledOperator(out, jin.dims.restrict(j.out_labels))


def stinespring(c: KrausChannel) -> tuple[np.ndarray, int]:
    """Isometry ``V: in -> out ⊗ env`` with ``Tr_env V ρ V† = Λ(ρ)``.

    The environment index is least significant in the output composite and its
    dimension equals the number of Kraus operators.
    """
    if not c.trace_preserving:
        raise ValueError("stinespring dilation requires a trace-preserving channel")
    r = len(c.kraus)
    dout, din = c.out_dims.total, c.in_dims.total
    v = np.transpose(c.kraus_stack, (1, 0, 2)).reshape(dout * r, din)
    return v, r


def haar_unitary(d: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-random unitary via the QR decomposition with phase correction."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    rng = ensure_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_pure(d: int, seed: int | np.random.Generator, dims=None) -> np.ndarray:
    """Haar-random unit vector of dimension ``d`` (plain ndarray)."""
    rng = ensure_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, rank: int, seed: int | np.random.Generator,
                   dims=None) -> DensityOperator:
    """Wishart-distributed density operator of the given rank and dimension."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = ensure_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    if dims is None:
        dims = [("S", d)]
    dims = as_dims(dims)
    if dims.total != d:
        raise ValueError(f"dims {dims} do not multiply to {d}")
    return DensityOperator(m, dims)


def random_channel(in_dims, out_dims, kraus_rank: int,
                   seed: int | np.random.Generator) -> KrausChannel:
    """Random CPTP channel sampled from a Haar isometry dilation."""
    in_dims = as_dims(in_dims)
    out_dims = as_dims(out_dims)
    din, dout = in_dims.total, out_dims.total
    if kraus_rank < 1 or dout * kraus_rank < din:
        raise ValueError(
            f"need kraus_rank >= 1 and out*rank >= in, got rank {kraus_rank} "
            f"for {din} -> {dout}"
        )
    u = haar_unitary(dout * kraus_rank, seed)
    v = u[:, :din]
    ks = v.reshape(dout, kraus_rank, din).transpose(1, 0, 2)
    return KrausChannel(in_dims, out_dims, list(ks))


def completely_factorizable(u2: np.ndarray, dim_noise: int, dim_in: int,
                            dim_traced: int, in_label: str = "Q1",
                            out_label: str = "Q2") -> KrausChannel:
    """Channel ``X -> Tr_F[U2 (ω_noise ⊗ X) U2†]`` built from a unitary.

    ``u2`` acts on ``noise ⊗ in -> traced ⊗ out`` (noise/traced most
    significant), so ``dim_out = dim_noise * dim_in / dim_traced`` must be an
    integer.  The noise register enters maximally mixed.
    """
    u2 = np.asarray(u2, dtype=complex)
    d = dim_noise * dim_in
    if u2.shape != (d, d):
        raise ValueError(f"unitary shape {u2.shape} does not match {d} x {d}")
    if d % dim_traced:
        raise ValueError(
            f"traced dimension {dim_traced} does not divide {dim_noise} x {dim_in}"
        )
    dev = float(np.max(np.abs(u2.conj().T @ u2 - np.eye(d))))
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary: max deviation {dev:.3e} > {UNITARY_TOL}")
    dim_out = d // dim_traced
    blocks = u2.reshape(dim_traced, dim_out, dim_noise, dim_in)
    scale = 1.0 / np.sqrt(dim_noise)
    kraus = [scale * blocks[f, :, b, :] for f in range(dim_traced) for b in range(dim_noise)]
    return KrausChannel([(in_label, dim_in)], [(out_label, dim_out)], kraus)

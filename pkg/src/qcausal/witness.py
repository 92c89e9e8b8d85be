"""Certification of processes beyond fixed causal order.

The data-processing witness compares the entropy of the full five-system
interventional state with the entropy of the subsystems that are already
fixed once the first party has acted.  For a process where A acts before B,

    DP_AB = H(A0 A1 B0 B1 F) - H(A0 A1 B0) >= log2(dim B1 / dim F),

because everything after the first slot is one trace-preserving channel from
``(B0, env)`` into ``(B0, B1, F)`` and such a channel cannot decrease entropy
by more than the log-dimension offset.  Mirrored for B before A.  A process
violating the bound for BOTH orders is beyond fixed causal order; violating
one order only excludes that order, and satisfying both is inconclusive.

The marginal witnesses trade tightness for locality: strong subadditivity
applied with the retained entangled partners ``(A1, B1)`` as the middle
system turns the DP witness into combinations of at-most-four-system
entropies.  Grouping ``(A0, B0) | (A1, B1) | F`` gives

    I1_AB = H(B1 | A0 A1 B0) + H(F | A1 B1) >= DP_AB,

and grouping ``(A0, F) | (A1, B1) | B0`` gives

    I2_AB = H(A0 A1 B1 F) + H(A1 B1 B0) - H(A1 B1) - H(A0 A1 B0) >= DP_AB,

both for every five-system state, so each inherits the DP bound on
fixed-order processes and certifies through the same dimension bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .labeled import DensityOperator
from .entropy import VON_NEUMANN, EntropySpec, entropy
from .process import TAU_LABELS, InterventionalState

# A witness counts as violated only when it undercuts its bound by more than
# this; keeps the exact endpoint equalities classified as satisfied.
VIOLATION_TOL = 1e-7

VERDICT_BEYOND = "BeyondFixedOrder"
VERDICT_NOT_AB = "ExcludesOnlyAB"
VERDICT_NOT_BA = "ExcludesOnlyBA"
VERDICT_NONE = "Inconclusive"


def _as_tau(state: InterventionalState | DensityOperator) -> DensityOperator:
    if isinstance(state, InterventionalState):
        return state.tau
    if isinstance(state, DensityOperator):
        if set(state.labels) != set(TAU_LABELS):
            raise ValueError(f"witnesses need the labels {TAU_LABELS}, got {state.labels}")
        return state
    raise TypeError(f"expected an interventional or five-system state, got {type(state).__name__}")


def _bound(tau: DensityOperator, order: str) -> float:
    retained = "B1" if order == "AB" else "A1"
    return math.log2(tau.dims.dim(retained) / tau.dims.dim("F"))


def dp_witness(state: InterventionalState | DensityOperator, order: str,
               spec: EntropySpec = VON_NEUMANN) -> tuple[float, float]:
    """Data-processing witness and its fixed-order bound for one order.

    Returns ``(value, bound)`` with ``value = H(all five) - H(first-party
    past)`` in the requested entropy family and ``bound = log2(dim of the
    second party's retained partner / dim F)``.  Every process with the given
    fixed order satisfies ``value >= bound``; ``value < bound`` excludes it.
    """
    tau = _as_tau(state)
    if order == "AB":
        past = ["A0", "A1", "B0"]
    elif order == "BA":
        past = ["B0", "B1", "A0"]
    else:
        raise ValueError(f"order must be 'AB' or 'BA', got {order!r}")
    value = entropy(tau, spec=spec) - entropy(tau, past, spec=spec)
    return value, _bound(tau, order)


def marginal_witnesses(state: InterventionalState | DensityOperator, order: str,
                       spec: EntropySpec = VON_NEUMANN) -> tuple[float, float, float]:
    """Marginal witnesses ``(i1, i2, bound)`` for one order, von Neumann only.

    Both quantities upper-bound the DP witness of the same order for every
    five-system state (strong subadditivity with the retained partners as the
    conditioning system), so on fixed-order processes they obey the same
    dimension bound, from at-most-four-system marginals.
    """
    if spec.kind != "von_neumann":
        raise ValueError(f"marginal witnesses are defined for von Neumann entropy, got {spec.label}")
    tau = _as_tau(state)
    h = lambda labels: entropy(tau, labels, spec=spec)
    h_pair = h(["A1", "B1"])
    if order == "AB":
        h_past = h(["A0", "A1", "B0"])
        i1 = h(["A0", "A1", "B0", "B1"]) - h_past + h(["A1", "B1", "F"]) - h_pair
        i2 = h(["A0", "A1", "B1", "F"]) + h(["A1", "B1", "B0"]) - h_pair - h_past
    elif order == "BA":
        h_past = h(["B0", "B1", "A0"])
        i1 = h(["A0", "A1", "B0", "B1"]) - h_past + h(["A1", "B1", "F"]) - h_pair
        i2 = h(["B0", "B1", "A1", "F"]) + h(["A1", "B1", "A0"]) - h_pair - h_past
    else:
        raise ValueError(f"order must be 'AB' or 'BA', got {order!r}")
    return i1, i2, _bound(tau, order)


def is_violated(value: float, bound: float) -> bool:
    return value < bound - VIOLATION_TOL


def verdict_token(violated_ab: bool, violated_ba: bool) -> str:
    if violated_ab and violated_ba:
        return VERDICT_BEYOND
    if violated_ab:
        return VERDICT_NOT_AB
    if violated_ba:
        return VERDICT_NOT_BA
    return VERDICT_NONE


@dataclass(frozen=True)
class WitnessReport:
    """Both-order witness values, violation flags, and the verdict.

    ``i1_*``/``i2_*`` are filled (von Neumann) only when marginals were
    requested.  A verdict of ``Inconclusive`` with a range warning means the
    entropy family sits outside the monotonicity-validated range and the raw
    values carry no certification weight.
    """
    tag: str
    family: EntropySpec
    dp_ab: float
    bound_ab: float
    dp_ba: float
    bound_ba: float
    violated_ab: bool
    violated_ba: bool
    verdict: str
    i1_ab: float | None = None
    i2_ab: float | None = None
    i1_ba: float | None = None
    i2_ba: float | None = None
    warnings: tuple[str, ...] = field(default=())


def evaluate(state: InterventionalState | DensityOperator,
             spec: EntropySpec = VON_NEUMANN, tag: str = "",
             marginals: bool | None = None) -> WitnessReport:
    """Full witness report for a state: both orders, verdict, marginals.

    ``marginals=None`` computes them exactly when the family is von Neumann;
    they are always evaluated with von Neumann entropy regardless of the DP
    family, since that is the only family they are derived for.
    """
    tau = _as_tau(state)
    dp_ab, bound_ab = dp_witness(tau, "AB", spec)
    dp_ba, bound_ba = dp_witness(tau, "BA", spec)
    violated_ab = is_violated(dp_ab, bound_ab)
    violated_ba = is_violated(dp_ba, bound_ba)
    warnings: list[str] = []
    if spec.validated:
        verdict = verdict_token(violated_ab, violated_ba)
    else:
        verdict = VERDICT_NONE
        warnings.append(
            f"entropy family {spec.label} is outside the validated range "
            f"(Renyi alpha >= 1/2); verdict withheld"
        )
    if spec.kind == "max":
        warnings.append(
            "max-entropy monotonicity is externally justified and not "
            "exercised by the property campaigns"
        )
    if marginals is None:
        marginals = spec.kind == "von_neumann"
    i1_ab = i2_ab = i1_ba = i2_ba = None
    if marginals:
        i1_ab, i2_ab, _ = marginal_witnesses(tau, "AB", VON_NEUMANN)
        i1_ba, i2_ba, _ = marginal_witnesses(tau, "BA", VON_NEUMANN)
    return WitnessReport(
        tag=tag, family=spec,
        dp_ab=dp_ab, bound_ab=bound_ab, dp_ba=dp_ba, bound_ba=bound_ba,
        violated_ab=violated_ab, violated_ba=violated_ba, verdict=verdict,
        i1_ab=i1_ab, i2_ab=i2_ab, i1_ba=i1_ba, i2_ba=i2_ba,
        warnings=tuple(warnings),
    )

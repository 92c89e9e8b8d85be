"""Process core: link product, combs, switch, process matrices, backends."""
import math

import numpy as np
import pytest

from qcausal import (
    DensityOperator,
    FixedOrderComb,
    KrausChannel,
    ProcessMatrix,
    SwitchSpec,
    apply_channel,
    apply_choi,
    apply_process,
    as_fixed_order,
    choi_from_kraus,
    comb_apply,
    entropy,
    haar_unitary,
    herm_eig,
    interventional_state,
    kron,
    link,
    mix_processes,
    partial_trace,
    process_matrix_of,
    purify_comb,
    random_channel,
    random_density,
    sample_fixed_order_comb,
    sample_purified_comb,
    switch_apply,
    trace_distance,
)

KET0 = DensityOperator(np.diag([1.0, 0.0]), [("T0", 2)])


def qubit_unitary_channel(seed, labels):
    u = haar_unitary(2, seed)
    return KrausChannel.from_unitary(u, [(labels[0], 2)], [(labels[1], 2)])


def slot_channels_for(comb, seed):
    a = random_channel([("A0", comb.slot_dim("A0"))], [("A1", comb.slot_dim("A1"))],
                       kraus_rank=2, seed=seed)
    b = random_channel([("B0", comb.slot_dim("B0"))], [("B1", comb.slot_dim("B1"))],
                       kraus_rank=2, seed=seed + 1)
    return a, b


def comb_apply_dense(comb, a, b):
    """Independent route: chain apply_channel calls and trace the environment."""
    first = comb.order[0]
    chain = {"A": (a, b), "B": (b, a)}[first]
    s = apply_channel(chain[0], comb.rho)
    s = apply_channel(comb.lambda1, s)
    s = apply_channel(chain[1], s)
    s = apply_channel(comb.lambda2, s)
    return partial_trace(s, ["F"])


class TestLink:
    def test_disjoint_is_tensor(self):
        x = random_density(2, 2, 1, dims=[("A", 2)])
        y = random_density(3, 3, 2, dims=[("B", 3)])
        out = link(x, y)
        assert np.allclose(out.matrix, kron(x.op, y.op).matrix)

    def test_state_through_choi(self):
        c = random_channel([("I", 2)], [("O", 3)], kraus_rank=2, seed=3)
        j = choi_from_kraus(c)
        rho = random_density(2, 2, 4, dims=[("I", 2)])
        out = link(rho, j.op)
        assert out.labels == ("O",)
        assert np.allclose(out.matrix, apply_choi(j, rho).matrix)

    def test_choi_composition(self):
        c1 = random_channel([("I", 2)], [("M", 3)], kraus_rank=2, seed=5)
        c2 = random_channel([("M", 3)], [("O", 2)], kraus_rank=2, seed=6)
        j12 = link(choi_from_kraus(c1).op, choi_from_kraus(c2).op)
        composed = KrausChannel([("I", 2)], [("O", 2)],
                                [k2 @ k1 for k1 in c1.kraus for k2 in c2.kraus])
        jc = choi_from_kraus(composed)
        assert set(j12.labels) == {"I", "O"}
        from qcausal import permute
        assert np.allclose(permute(j12, jc.op.labels).matrix, jc.matrix)


class TestFixedOrderComb:
    def test_label_contract_enforced(self):
        comb = sample_fixed_order_comb(0, order="AB")
        wrong = DensityOperator(np.eye(2) / 2, [("X", 2)])
        with pytest.raises(ValueError):
            FixedOrderComb("AB", wrong, comb.lambda1, comb.lambda2)

    def test_order_token_validated(self):
        comb = sample_fixed_order_comb(1)
        with pytest.raises(ValueError):
            FixedOrderComb("XY", comb.rho, comb.lambda1, comb.lambda2)

    @pytest.mark.parametrize("seed,order", [(10, "AB"), (11, "BA")])
    def test_apply_matches_dense_route(self, seed, order):
        comb = sample_fixed_order_comb(seed, order=order)
        a, b = slot_channels_for(comb, seed + 100)
        fast = comb_apply(comb, a, b)
        slow = comb_apply_dense(comb, a, b)
        assert np.allclose(fast.matrix, slow.matrix, atol=1e-10)

    def test_slot_dim_table(self):
        comb = sample_fixed_order_comb(2, order="AB")
        assert comb.slot_dim("A0") == comb.rho.dims.dim("A0")
        assert comb.slot_dim("F") == comb.lambda2.out_dims.dim("F")


class TestPurifiedComb:
    @pytest.mark.parametrize("seed,order", [(20, "AB"), (21, "BA")])
    def test_purification_round_trip(self, seed, order):
        comb = sample_fixed_order_comb(seed, order=order)
        back = as_fixed_order(purify_comb(comb))
        a, b = slot_channels_for(comb, seed + 100)
        assert np.allclose(comb_apply(comb, a, b).matrix,
                           comb_apply(back, a, b).matrix, atol=1e-9)

    def test_sampled_dims_policy(self):
        for seed in range(5):
            pc = sample_purified_comb(seed)
            dims = pc.dims
            for label in ("A0", "A1", "B0", "B1", "F"):
                assert dims[label] in (2, 3)
            tau_dim = int(np.prod([dims[l] for l in ("A0", "A1", "B0", "B1", "F")]))
            assert tau_dim <= 64


class TestSwitch:
    def test_pure_order_endpoints(self):
        a = qubit_unitary_channel(40, ("A0", "A1"))
        b = qubit_unitary_channel(41, ("B0", "B1"))
        rho = KET0.matrix
        ka, kb = a.kraus[0], b.kraus[0]
        # weight 1 on the control's |0> branch runs the A slot first
        first_a = switch_apply(SwitchSpec(1.0, future_mode="trace_control"), a, b)
        assert np.allclose(first_a.matrix, kb @ ka @ rho @ ka.conj().T @ kb.conj().T)
        first_b = switch_apply(SwitchSpec(0.0, future_mode="trace_control"), a, b)
        assert np.allclose(first_b.matrix, ka @ kb @ rho @ kb.conj().T @ ka.conj().T)

    def test_full_future_keeps_control_coherence(self):
        ident = KrausChannel.from_unitary(np.eye(2), [("A0", 2)], [("A1", 2)])
        identb = KrausChannel.from_unitary(np.eye(2), [("B0", 2)], [("B1", 2)])
        out = switch_apply(SwitchSpec(0.5), ident, identb)
        lam, _ = herm_eig(out)
        assert np.isclose(lam[0], 1.0, atol=1e-12)  # pure: branches interfere
        plus = np.array([1.0, 1.0]) / math.sqrt(2)
        expect = np.kron(np.diag([1.0, 0.0]), np.outer(plus, plus))
        assert np.allclose(out.matrix, expect)

    def test_future_mode_dims(self):
        assert SwitchSpec(0.3).future_dim == 4
        assert SwitchSpec(0.3, future_mode="trace_target").future_dim == 2
        out = switch_apply(SwitchSpec(0.3, future_mode="trace_target"),
                           qubit_unitary_channel(1, ("A0", "A1")),
                           qubit_unitary_channel(2, ("B0", "B1")))
        assert out.labels == ("C1",)

    def test_validation(self):
        with pytest.raises(ValueError):
            SwitchSpec(1.5)
        with pytest.raises(ValueError):
            SwitchSpec(0.5, future_mode="partial")
        with pytest.raises(ValueError):
            SwitchSpec(0.5, target=DensityOperator(np.eye(3) / 3, [("T0", 3)]))


class TestProcessMatrix:
    def test_trace_and_hermiticity(self):
        comb = sample_fixed_order_comb(50, order="AB")
        w = process_matrix_of(comb)
        d_expected = comb.slot_dim("A1") * comb.slot_dim("B1")  # trivial P
        assert np.isclose(w.matrix.trace().real, d_expected, atol=1e-8)
        assert np.allclose(w.matrix, w.matrix.conj().T)

    def test_switch_matrix_is_rank_one(self):
        w = process_matrix_of(SwitchSpec(0.37))
        lam, _ = herm_eig(w.op)
        assert lam[0] > 1e-6
        assert abs(lam[1:]).max() < 1e-9

    def test_born_rule_reproduces_comb(self):
        comb = sample_fixed_order_comb(51, order="BA")
        a, b = slot_channels_for(comb, 151)
        w = process_matrix_of(comb)
        ja, jb = choi_from_kraus(a), choi_from_kraus(b)
        out = apply_process(w, ja, jb)
        assert out.in_labels == ("P",) and out.out_labels == ("F",)
        assert np.allclose(out.matrix, comb_apply(comb, a, b).matrix, atol=1e-9)

    def test_born_rule_reproduces_switch(self):
        s = SwitchSpec(0.42)
        a = random_channel([("A0", 2)], [("A1", 2)], kraus_rank=2, seed=52)
        b = random_channel([("B0", 2)], [("B1", 2)], kraus_rank=2, seed=53)
        out = apply_process(process_matrix_of(s), choi_from_kraus(a), choi_from_kraus(b))
        direct = switch_apply(s, a, b)
        assert np.allclose(out.matrix, direct.matrix, atol=1e-9)

    def test_mixture_acts_linearly(self):
        w0 = process_matrix_of(SwitchSpec(0.0))
        w1 = process_matrix_of(SwitchSpec(1.0))
        wm = mix_processes(0.3, w0, w1)
        a = random_channel([("A0", 2)], [("A1", 2)], kraus_rank=1, seed=54)
        b = random_channel([("B0", 2)], [("B1", 2)], kraus_rank=2, seed=55)
        ja, jb = choi_from_kraus(a), choi_from_kraus(b)
        mixed = apply_process(wm, ja, jb).matrix
        parts = (0.3 * apply_process(w0, ja, jb).matrix
                 + 0.7 * apply_process(w1, ja, jb).matrix)
        assert np.allclose(mixed, parts, atol=1e-9)

    def test_mix_weight_validated(self):
        w = process_matrix_of(SwitchSpec(0.5))
        with pytest.raises(ValueError):
            mix_processes(1.2, w, w)

    def test_choi_label_contract(self):
        w = process_matrix_of(SwitchSpec(0.5))
        wrong = choi_from_kraus(random_channel([("X", 2)], [("Y", 2)],
                                               kraus_rank=1, seed=56))
        good = choi_from_kraus(random_channel([("B0", 2)], [("B1", 2)],
                                              kraus_rank=1, seed=57))
        with pytest.raises(ValueError):
            apply_process(w, wrong, good)


class TestInterventionalState:
    @pytest.mark.parametrize("mode", ["full", "trace_control", "trace_target"])
    def test_switch_backends_agree(self, mode):
        s = SwitchSpec(0.3, future_mode=mode)
        sv = interventional_state(s, "statevector")
        ct = interventional_state(s, "contraction")
        assert trace_distance(sv.tau, ct.tau) < 1e-9

    def test_comb_backends_agree(self):
        pc = sample_purified_comb(60)
        sv = interventional_state(pc, "statevector")
        ct = interventional_state(pc, "contraction")
        assert trace_distance(sv.tau, ct.tau) < 1e-9

    def test_slot_outputs_maximally_mixed(self):
        # trace-preserving slots leave their stored partners mixed
        pc = sample_purified_comb(61)
        tau = interventional_state(pc).tau
        d = tau.dims.dim("A1") * tau.dims.dim("B1")
        assert np.isclose(entropy(tau, ["A1", "B1"]), math.log2(d), atol=1e-9)

    def test_switch_state_is_pure(self):
        tau = interventional_state(SwitchSpec(0.7)).tau
        lam, _ = herm_eig(tau)
        assert np.isclose(lam[0], 1.0, atol=1e-10)

    def test_label_order_canonical(self):
        st = interventional_state(SwitchSpec(0.2, future_mode="trace_target"))
        assert st.labels == ("A0", "A1", "B0", "B1", "F")

    def test_invalid_marginal_rejected(self):
        from qcausal import InterventionalState
        m = np.zeros((32, 32))
        m[0, 0] = 1.0
        bad = DensityOperator(m, [("A0", 2), ("A1", 2), ("B0", 2), ("B1", 2), ("F", 2)])
        with pytest.raises(ValueError):
            InterventionalState(bad)

    def test_statevector_needs_wiring(self):
        w = process_matrix_of(SwitchSpec(0.5))
        with pytest.raises(ValueError):
            interventional_state(w, "statevector")
        ct = interventional_state(w, "contraction")
        sv = interventional_state(SwitchSpec(0.5), "statevector")
        assert trace_distance(ct.tau, sv.tau) < 1e-9

"""Coherent control of channel order, seen directly on the output wires.

At the endpoints of the control weight the switch collapses to an ordinary
composition; in between, the two orderings interfere.  With a commuting
channel pair the control wire stays perfectly coherent, with an
anticommuting pair the interference term flips sign.
"""
import argparse

import numpy as np

from qcausal import KrausChannel, SwitchSpec, herm_eig, switch_apply

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def qubit_channel(u, labels):
    return KrausChannel.from_unitary(u, [(labels[0], 2)], [(labels[1], 2)])


def control_block(ua, ub, lam):
    a = qubit_channel(ua, ("A0", "A1"))
    b = qubit_channel(ub, ("B0", "B1"))
    out = switch_apply(SwitchSpec(lam, future_mode="trace_target"), a, b)
    return out.matrix


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lam", type=float, default=0.5, help="control weight")
    args = p.parse_args()

    print("== endpoints are plain compositions ==")
    a = qubit_channel(H, ("A0", "A1"))
    b = qubit_channel(Z, ("B0", "B1"))
    for lam, tag in ((1.0, "slot A first"), (0.0, "slot B first")):
        out = switch_apply(SwitchSpec(lam, future_mode="trace_control"), a, b)
        ka, kb = a.kraus[0], b.kraus[0]
        direct = (kb @ ka if lam == 1.0 else ka @ kb)
        ref = direct @ np.diag([1.0, 0.0]).astype(complex) @ direct.conj().T
        print(f"  lam={lam:.0f} ({tag}): max dev from composition "
              f"{np.abs(out.matrix - ref).max():.2e}")

    print(f"\n== control wire at lam={args.lam} ==")
    # off-diagonal element = sqrt(lam(1-lam)) <(AB)psi|(BA)psi>
    for name, ua, ub in (("commuting    (Z, Z)", Z, Z),
                         ("anticommuting (X, Z)", X, Z),
                         ("orthogonalizing (H, Z)", H, Z)):
        c = control_block(ua, ub, args.lam)
        v = c[0, 1]
        print(f"  {name}: off-diagonal = {v.real:+.4f}{v.imag:+.4f}j")
    print("  the sign flip between commuting and anticommuting pairs is the")
    print("  interference a fixed ordering could never produce")

    print("\n== the process itself is pure ==")
    tau_out = switch_apply(SwitchSpec(args.lam),
                           qubit_channel(np.eye(2), ("A0", "A1")),
                           qubit_channel(np.eye(2), ("B0", "B1")))
    lam_spec, _ = herm_eig(tau_out)
    print(f"  identity slots, full future: spectrum head {np.round(lam_spec[:3], 6)}")


if __name__ == "__main__":
    main()

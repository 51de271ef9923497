"""Spectra of the 4-qubit ring and 5-qubit three-body models at a few couplings.

    python3 scripts/reproduce_models.py [--jz -1]
"""
import argparse
import math

from ghzeig.ghz_sector import eigenstate_conditions
from ghzeig.hamiltonian import five_qubit_three_body, symmetric_ring4
from ghzeig.spectra import analyze


def describe(label, H):
    rep = analyze(H)
    plus = rep.target("ghz+")
    cond = eigenstate_conditions(H)
    print(f"{label}")
    print(f"  levels (value x multiplicity): "
          + ", ".join(f"{rep.eigenvalues[a]:+.6f}x{b - a}" for a, b in rep.clusters))
    print(f"  G+: eigenvalue {plus.eigenvalue:+.6f} rank {plus.rank} multiplicity {plus.multiplicity} "
          f"residual {plus.residual:.1e}")
    print(f"  |phi_bar| = {cond.phi_bar_norm:.6f}  ground energy {rep.ground_energy:+.6f}")
    for h in rep.ghz_states:
        print(f"  GHZ-form eigenvector: E={h.eigenvalue:+.6f} bits={h.bits} phase={h.phase:+.4f} bases={h.bases}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jz", type=float, default=-1.0)
    args = ap.parse_args()
    jz = args.jz
    for jx in (0.5 * abs(jz), 0.0, 1.5 * abs(jz)):
        describe(f"symmetric ring, Jx={jx:g} Jz={jz:g} (sqrt(Jx^2+Jz^2) = {math.hypot(jx, jz):.6f})",
                 symmetric_ring4(jx, jz))
    for jx in (0.0, -0.3 * jz, 0.9 * jz):
        describe(f"five-qubit three-body, Jx={jx:g} Jz={jz:g}", five_qubit_three_body(jx, jz))


if __name__ == "__main__":
    main()

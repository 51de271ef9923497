"""Forced degeneracy below the threshold body order, and witnesses at it.

    python3 scripts/theorem_sweep.py --max-n 7 --samples 100
"""
import argparse
import time

from ghzeig.constraints import find_nondegenerate_witness, verify_forced_degeneracy
from ghzeig.ghz_sector import m_star


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>2} {'m':>2} {'m*':>3} {'kind':>8} {'dim':>6} {'result':>30} {'secs':>6}")
    for n in range(3, args.max_n + 1):
        ms = m_star(n)
        for m in range(1, n):
            t0 = time.perf_counter()
            if m < ms:
                rep = verify_forced_degeneracy(n, m, args.samples, args.seed)
                kind, dim = "theorem", rep.nullspace_dimension
                result = f"{'pass' if rep.all_passed else 'FAIL'} max res {rep.max_residual:.1e}"
            elif m == ms:
                w = find_nondegenerate_witness(n, m, seed=args.seed)
                kind, dim = "witness", "-"
                result = "none found" if w is None else f"|phi_bar|={w.phi_bar_norm:.3f} rank {w.rank}"
            else:
                continue
            print(f"{n:>2} {m:>2} {ms:>3} {kind:>8} {dim:>6} {result:>30} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()

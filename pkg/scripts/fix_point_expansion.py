"""Compare sampled E[fix] of a word with its truncated 1/n expansion."""
import argparse

from surfacelab.expansion import laurent_coefficients, verify_assumption1
from surfacelab.words import parse_word


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--word", default="a1 a1")
    ap.add_argument("--ns", type=int, nargs="+", default=[6, 10, 15, 20])
    ap.add_argument("--draws", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = parse_word(args.word, 2)
    lc = laurent_coefficients(w, q=2)
    print("a_i:", {i: str(v) for i, v in sorted(lc.a.items())})
    rep = verify_assumption1(w, q=1, exact_ns=(), sampled_ns=args.ns, draws=args.draws, seed=args.seed)
    print(f"{'n':>4} {'mean':>10} {'se':>8} {'partial':>10} {'residual':>10}")
    for n, m, se, p, r in rep.rows:
        print(f"{n:4d} {m:10.5f} {se:8.5f} {float(p):10.5f} {float(r):10.5f}")
    print("fitted C:", rep.C)


if __name__ == "__main__":
    main()

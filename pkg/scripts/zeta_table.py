"""Witten zeta values of S_n and the scaled excess n^2 (zeta - 2)."""
import sys

from surfacelab.symmetric import witten_zeta


def main(n_hi=30, s=2):
    for n in range(2, n_hi + 1):
        z = witten_zeta(s, n)
        print(f"{n:3d} {float(z):.8f} {n * n * (float(z) - 2):10.5f}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))

"""Vertex and face branch minima of the torus gap against 4 pi^2 / (s^2 n^2)."""

import argparse

from cvtopo.torus import energy_gap


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[11, 21, 51, 101])
    ap.add_argument("--s", type=float, nargs="+", default=[1.0, 2.0, 5.0])
    args = ap.parse_args()
    print("n,s,vertex_gap,face_gap,asymptotic,vertex_ratio,face_ratio")
    for n in args.n:
        for s in args.s:
            r = energy_gap(n, n, s)
            print(f"{n},{s},{r.vertex_gap:.6e},{r.face_gap:.6e},{r.asymptotic:.6e},"
                  f"{r.vertex_gap / r.asymptotic:.4e},{r.face_gap / r.asymptotic:.6f}")


if __name__ == "__main__":
    main()

"""Print the bidegree rank tables of the twisted cells and their
vertical boundaries, next to the closed binomial formulas."""

import argparse

from bigraded.twisted import twisted_disc, twisted_boundary
from bigraded.verify import disc_rank_formula, boundary_rank_formula


def show(name, ranks, formula):
    match = "ok" if dict(ranks) == formula else "MISMATCH"
    print(f"{name}  [{match}]")
    for (p, q) in sorted(ranks, key=lambda t: (-t[1], t[0])):
        print(f"  ({p:>2},{q:>3}): {ranks[(p, q)]}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-p", type=int, default=4)
    ap.add_argument("-q", type=int, default=0)
    args = ap.parse_args()
    for p in range(args.max_p + 1):
        show(f"cell ({p},{args.q})", twisted_disc(p, args.q).ranks,
             disc_rank_formula(p, args.q))
        show(f"boundary ({p},{args.q})", twisted_boundary(p, args.q).ranks,
             boundary_rank_formula(p, args.q))
        print()


if __name__ == "__main__":
    main()

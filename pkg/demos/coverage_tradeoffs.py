"""When do rank sets hold their nominal level, and what does width buy?

Three Monte Carlo vignettes, all seeded and modest in size (about half
a minute total):

1. Rank sets can be *more* stable than the difference sets they are
   built from: near-zero cell probabilities wreck bootstrap confidence
   sets for probability differences, while the exact rank construction
   keeps its guarantee.
2. On a survey-calibrated design the methods trade width for safety in
   visibly different ways, and the naive percentile-of-ranks bootstrap
   pays for its short intervals with real undercoverage on ties.
3. With many rare categories the calibrated procedures stay valid by
   going wide, while the naive bootstrap collapses entirely.

Run from the repository root:

    python3 demos/coverage_tradeoffs.py
"""

from ranksets.sim import (
    aes_design,
    erratic_coverage_curves,
    large_p_study,
    run_design,
)


def show(title: str) -> None:
    print()
    print(title)
    print("-" * len(title))


def main() -> None:
    show("1. A tiny cell probability breaks difference sets, not rank sets")
    print("truth (0.495, 0.495, 0.01); simultaneous 95% sets for the")
    print("differences involving category 1, vs its exact rank set")
    rows = erratic_coverage_curves(pi_grid=(0.01,), n_grid=(10, 14, 18),
                                   reps=300, B=500, master_seed=0)
    print("  n    diff cover (stud)   rank cover (exactBonf)")
    for r in rows:
        print(f"  {r['n']:>2d}        {r['diff_cov_stud']:.3f}"
              f"                {r['rank_cov_exactBonf']:.3f}")
    print("At n = 10 almost every resample leaves the rare cell empty, the")
    print("studentized pivot degenerates and the difference set covers the")
    print("true differences barely a quarter of the time.  The rank set")
    print("never drops below its level: ranks are integers, and the exact")
    print("pairwise tests only get more conservative as evidence thins.")

    show("2. Width buys safety on a survey-calibrated design")
    print("category shares matched to the packaged survey; n = 234;")
    print("300 replications, B = 1000, seed 0; 95% marginal sets")
    design = aes_design(kappa=1.0, tau_n=1.0,
                        methods=("exactHolm", "cp", "bootStud", "naive"),
                        categories=(3, 6), reps=300, B=1000, master_seed=0)
    report = run_design(design)
    print("  method      mid category (4)          rarest category (7)")
    print("              cover   length            cover   length")
    for m in design.methods:
        c4 = report.cell(m, 3)
        c7 = report.cell(m, 6)
        print(f"  {m:<10s}  {c4.coverage:.3f}   {c4.avg_length:>5.2f}"
              f"             {c7.coverage:.3f}   {c7.avg_length:>5.2f}")
    print("The exact Holm procedure earns short intervals without losing")
    print("coverage.  The studentized bootstrap stays valid but pays a")
    print("width premium whenever rare cells make its threshold explode.")
    print("The naive bootstrap reads ranks off resampled orderings; that")
    print("looks sharp, but on the rarest category it is already below")
    print("its nominal level, and shrinking the sample exposes it:")

    d_naive = aes_design(kappa=1.0, tau_n=0.5, methods=("naive", "exactHolm"),
                         categories=(6,), reps=300, B=1000, master_seed=0)
    r_naive = run_design(d_naive)
    nv = r_naive.cell("naive", 6)
    ex = r_naive.cell("exactHolm", 6)
    print(f"Halving the sample (n = 117), rarest category: naive covers "
          f"{nv.coverage:.3f}\nagainst a nominal 0.95 (exactHolm: "
          f"{ex.coverage:.3f}) -- a real failure, not noise.")

    show("3. Many rare categories: go wide or go wrong")
    print("uniform truth, 95% marginal set for one category; 200")
    print("replications, B = 500, seed 0")
    rows = large_p_study(p_grid=(20, 50), n_grid=(30,), reps=200, B=500,
                         master_seed=0,
                         methods=("exactHolm", "bootStud", "naive"))
    print("   p   method      coverage   avg length (of p-1 possible)")
    for r in rows:
        print(f"  {r['p']:>2d}   {r['method']:<10s}  {r['coverage']:.3f}"
              f"      {r['avg_length']:>5.1f}")
    print("With 20-50 categories and 30 observations nobody can rank")
    print("anything -- the honest answer is the full range, and both")
    print("calibrated procedures give it.  The naive bootstrap instead")
    print("reports narrow, confident, and almost always wrong intervals.")


if __name__ == "__main__":
    main()

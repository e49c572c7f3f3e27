"""Why four evaluation points instead of two.

The classical central finite-difference scheme must choose between a wide
stencil (biased value estimates) and a narrow one (noisy gradients); at
the schedules that make optimization converge, its value estimate keeps a
bias of order T^(1/2 - 2 nu) after normalization, which does not vanish.
The four-point stencil cancels the curvature term, so its normalized
statistic is centered at zero on the same budget.

    python3 demos/03_baseline_comparison.py        (about 1 minute)
"""

from fourpoint import AlgoConfig, make_model, replicate


def main():
    model = make_model("bernoulli_quadratic")
    cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=100_000,
                     k=3.0, m=50, m1=45, m2=5, nu=0.2, c0=30.0, c1=1.0)
    replications = 200

    rows = []
    for method in ("four_point", "central_fd"):
        print(f"replicating {method} x{replications} ...")
        summary, _ = replicate(model, cfg, method, replications,
                               master_seed=7)
        rows.append((method, summary))

    print()
    print(f"{'method':>12}  {'coverage':>8}  {'stat mean':>9}  "
          f"{'stat sd':>7}")
    for method, summary in rows:
        print(f"{method:>12}  {summary.coverage_rate:>8.3f}  "
              f"{summary.stat_mean:>+9.3f}  {summary.stat_sd:>7.3f}")
    print()
    print("the two-point baseline optimizes fine but its intervals are")
    print("centered on a biased estimate; the four-point intervals are not.")


if __name__ == "__main__":
    main()

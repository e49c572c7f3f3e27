"""The central limit theorem behind the confidence intervals.

Replicates the Bernoulli experiment a few hundred times and renders the
normalized statistic

    sqrt(T) (k^2-1) / ((k^2+1) sigma(theta*)) * (mu_hat - mu(theta_hat))

as an ASCII histogram.  If the CLT holds, the bars trace a standard normal
and roughly 95% of intervals cover the truth.

    python3 demos/02_clt_histogram.py        (about 2 minutes)
"""

from fourpoint import AlgoConfig, make_model, replicate


def draw_histogram(bins, width=50):
    peak = max(n for _, _, n in bins) or 1
    for lo, hi, n in bins:
        if lo == float("-inf"):
            label = f"   < {hi:+.1f}"
        elif hi == float("inf"):
            label = f"   > {lo:+.1f}"
        else:
            label = f"{lo:+.1f} {hi:+.1f}"
        bar = "#" * round(width * n / peak)
        print(f"  {label:>12}  {bar}{' ' if bar else ''}{n or ''}")


def main():
    model = make_model("bernoulli_quadratic")
    cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=100_000,
                     k=3.0, m=50, m1=45, m2=5, nu=0.2, c0=30.0, c1=1.0)
    replications = 300
    print(f"running {replications} independent replications ...")
    summary, _ = replicate(model, cfg, "four_point", replications,
                           master_seed=42, bin_width=0.5,
                           bin_range=(-4.0, 4.0))

    print()
    draw_histogram(summary.histogram)
    print()
    print(f"coverage of the 95% interval : {summary.coverage_rate:.3f}")
    print(f"mean of normalized statistic : {summary.stat_mean:+.3f}"
          "   (0 for an unbiased estimator)")
    print(f"sd of normalized statistic   : {summary.stat_sd:.3f}"
          "   (1 under the CLT)")
    print(f"KS distance to N(0,1)        : {summary.ks_statistic:.3f}")


if __name__ == "__main__":
    main()

"""Convergence rate of the iterates.

Tracks the Monte Carlo mean of ||theta^t - theta*||^2 at log-spaced
checkpoints.  With step size c0/t and half-width c1 * t^(-nu), theory
predicts decay at rate t^-(1 - 2 nu); at nu = 0.2 the log-log slope
should sit near -0.6.

    python3 demos/04_convergence_rate.py        (about 1 minute)
"""

from fourpoint import AlgoConfig, convergence_diagnostic, make_model


def main():
    model = make_model("bernoulli_quadratic")
    cfg = AlgoConfig(dim=1, theta0=[0.5], total_budget=100_000,
                     k=3.0, m=50, m1=45, m2=5, nu=0.2, c0=30.0, c1=1.0)
    checkpoints = [100, 158, 251, 398, 631, 1000]
    replications = 100

    print(f"averaging over {replications} replications ...")
    diag = convergence_diagnostic(model, cfg, replications, checkpoints,
                                  master_seed=11)

    print()
    print(f"{'iteration t':>12}  {'E||theta^t - theta*||^2':>24}")
    for t, msd in zip(diag.checkpoints, diag.mean_sq_distance):
        print(f"{t:>12}  {msd:>24.3e}")
    print()
    print(f"fitted log-log slope = {diag.slope:+.3f}"
          f"   (theory: -(1 - 2 nu) = {-(1 - 2 * cfg.nu):+.1f})")


if __name__ == "__main__":
    main()

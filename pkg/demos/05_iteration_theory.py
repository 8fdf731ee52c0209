# # How many iterations?
#
# The RANSAC count grows like (n/m)^(d+1).  The sweep below runs the
# sampler on a grid of d and n/m and sets the empirical means next to the
# closed form.  HM stays bounded when the inlier fraction matches d/p.

from ransac_subspace.bench import ExperimentConfig, run_complexity_sweep
from ransac_subspace.theory import theta2

cfg = ExperimentConfig(kind="sweep", trials=300, seed=1)
for row in run_complexity_sweep(cfg).summary:
    print("d=%d n/m=%.2f  empirical %8.2f  theory %8.2f  z=%+.2f"
          % (row["d"], row["ratio"], row["empirical_mean"], row["theory_mean"], row["z"]))

print()
for n in (40, 80, 160, 320, 640, 1280):
    m = p = n // 2
    d = p // 2
    print("n=%4d  theta2=%.3f  expected HM iterations %.2f" % (n, theta2(n, m, d, p), 1 / theta2(n, m, d, p)))

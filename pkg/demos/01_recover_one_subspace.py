# # Recovering one subspace by sampling tuples
#
# A 4-dimensional subspace of R^10 holds 100 points; 50 more points are
# scattered on the unit sphere.  RANSAC draws 5-tuples until one is linearly
# dependent, and that tuple spans the subspace exactly.

import numpy as np

from ransac_subspace import TheoryParams, make_scene, ransac_recover, recovery_angle
from ransac_subspace.sampling import RngStream
from ransac_subspace.theory import expected_iterations_recovery

params = TheoryParams(d=4, p=10, m=100, m0=50)
scene = make_scene(params, RngStream(2024))
print("points:", scene.points.shape, "inliers:", scene.inliers(1).size)

# One run.

res = ransac_recover(scene.points, d=4, rng=RngStream(2024, 1))
print("iterations:", res.iterations)
print("largest principal angle to the truth:", recovery_angle(res.subspace, scene.subspaces[0]))
print("inlier set exact:", np.array_equal(res.inlier_indices, scene.inliers(1)))

# The iteration count is geometric with success probability C(m,d+1)/C(n,d+1).
# Its mean is about (n/m)^(d+1) = 1.5^5.

its = [ransac_recover(scene.points, 4, rng=RngStream(7, t)).iterations for t in range(2000)]
print("mean over 2000 runs: %.2f" % np.mean(its))
print("theory:              %.2f" % expected_iterations_recovery(params.n, params.m, params.d))

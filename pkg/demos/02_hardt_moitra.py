# # Recovery without knowing the dimension
#
# Sampling p-tuples instead of (d+1)-tuples removes d from the inputs.  A
# p-tuple is dependent as soon as it holds d+1 inliers, which is far more
# likely than a (d+1)-tuple being all inliers when d is close to p.

from ransac_subspace import (TheoryParams, hardt_moitra_recover, make_scene, ransac_recover,
                             recovery_angle)
from ransac_subspace.sampling import RngStream
from ransac_subspace.theory import expected_iterations_hm, expected_iterations_recovery

params = TheoryParams(d=18, p=20, m=100, m0=50)
scene = make_scene(params, RngStream(5))

hm = hardt_moitra_recover(scene.points, rng=RngStream(5, 1))
print("HM: dimension found %d, angle %.1e, iterations %d"
      % (hm.subspace.dim, recovery_angle(hm.subspace, scene.subspaces[0]), hm.iterations))

rs = ransac_recover(scene.points, 18, rng=RngStream(5, 2))
print("RANSAC with d given: angle %.1e, iterations %d"
      % (recovery_angle(rs.subspace, scene.subspaces[0]), rs.iterations))

# Expected counts for this row.

n, m, d, p = params.n, params.m, params.d, params.p
print("expected RANSAC iterations: %.0f" % expected_iterations_recovery(n, m, d))
print("expected HM iterations:     %.1f" % expected_iterations_hm(n, m, d, p))

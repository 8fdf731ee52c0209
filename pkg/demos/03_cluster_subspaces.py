# # Clustering a union of subspaces
#
# RANSAC clustering finds one subspace, removes its points and repeats.
# The HM variant also handles subspaces of different dimensions by peeling
# off the smallest dependent subset of each dependent p-tuple.

from ransac_subspace import (TheoryParams, hm_cluster, make_scene, rand_index, ransac_cluster,
                             recovery_angle)
from ransac_subspace.datagen import make_scene_from_dims
from ransac_subspace.sampling import RngStream
from ransac_subspace.theory import expected_iterations_clustering

params = TheoryParams(d=4, p=8, m=50, m0=50, K=3)
scene = make_scene(params, RngStream(11))
res = ransac_cluster(scene.points, 4, 3, rng=RngStream(11, 1))
print("Rand index:", rand_index(res.labels, scene.labels))
print("iterations per stage:", res.stage_iterations)
exp = expected_iterations_clustering(params)
print("expected total %.1f, bound K/theta1 %.1f" % (exp.expected, exp.bound))

# A line and a plane in R^6 with 20 outliers.

mixed = make_scene_from_dims(6, [1, 2], 20, 20, RngStream(12))
res = hm_cluster(mixed.points, 2, rng=RngStream(12, 1))
for s in res.subspaces:
    truth = mixed.subspaces[s.dim - 1]
    print("found dim %d, angle %.1e" % (s.dim, recovery_angle(s, truth)))
print("Rand index:", rand_index(res.labels, mixed.labels))

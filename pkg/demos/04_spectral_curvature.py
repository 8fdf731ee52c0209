# # Noiseless spectral curvature clustering
#
# Draw c random d-tuples.  Two points are linked once for every drawn tuple
# that is dependent with each of them.  Without noise only points of the
# same subspace ever get linked, so the graph splits into K components.

import numpy as np

from ransac_subspace import TheoryParams, make_scene, rand_index, scc_cluster
from ransac_subspace.clustering import pure_tuple_counts
from ransac_subspace.sampling import RngStream

params = TheoryParams(d=2, p=6, m=30, m0=0, K=3)
scene = make_scene(params, RngStream(3))
res = scc_cluster(scene.points, 2, 3, c=500, rng=RngStream(3, 1))
w = res.affinity.w

cross = scene.labels[:, None] != scene.labels[None, :]
print("links across subspaces:", int(w[cross].sum()))
print("links within subspaces:", int(w[~cross].sum()))
print("pure tuples per subspace:", pure_tuple_counts(res.affinity.tuples, scene.labels, 3))
print("Rand index:", rand_index(res.labels, scene.labels))

# With few tuples a subspace may get no pure tuple at all and drop out.

hits = []
for seed in range(20):
    sc = make_scene(params, RngStream(40, seed))
    r = scc_cluster(sc.points, 2, 3, c=20, rng=RngStream(41, seed))
    hits.append(rand_index(r.labels, sc.labels) == 1.0)
print("exact with c=20: %d of 20" % np.sum(hits))

"""RANSAC-type algorithms for noiseless subspace recovery and clustering."""
from .clustering import (AffinityMatrix, ClusteringResult, hm_cluster, minimum_dependent_subset,
                         ransac_cluster, scc_affinity, scc_cluster, spectral_partition)
from .datagen import (Scene, make_scene, make_scene_from_dims, make_valid_scene, random_subspace, read_scene,
                      sample_on_sphere, sample_on_subspace_sphere, write_scene)
from .errors import (BudgetExhaustedError, ContractViolationError, DegenerateSceneError,
                     DegenerateSpanError, ExhaustedSamplerError, InfeasiblePartitionError,
                     InfeasibleSceneError, InvalidInputError, SearchBudgetError, SubspaceError)
from .linalg import (Subspace, is_linearly_dependent, numerical_rank, orthonormal_basis,
                     principal_angles, residual_distance)
from .metrics import rand_index, recovery_angle
from .recovery import (RansacConfig, RecoveryResult, extract_dependent_subset,
                       hardt_moitra_recover, ransac_recover, ransac_recover_unknown_d)
from .sampling import RngStream, sample_tuple, sample_tuple_without_replacement
from .theory import (TheoryParams, expected_iterations_clustering, expected_iterations_recovery,
                     geometric_fit_test, theta1, theta2)

__version__ = "0.1.0"

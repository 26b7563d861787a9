"""relaxproj: exact projections onto affine subspaces and polyhedra, face
reductions, kernel splittings, relaxed-projection orbits, and the scalar
analysis of relaxation schedules approaching reflections."""

from .errors import (ConfigError, EmptyPolyhedronError, FaceCapError,
                     KernelContainmentError, NumericalError,
                     PointNotInSetError)
from .geometry import (AffineSubspace, Halfspace, Polyhedron,
                       affine_from_equalities, as_vector, inner, norm,
                       orthonormalize)
from .projectors import (EpiExp, RelaxedProjector, apply_relaxed, project,
                         project_affine, project_epiexp, project_polyhedron,
                         reflect)
from .faces import (Face, FaceLattice, enumerate_faces, face_of_projection,
                    minimal_face, partition_check)
from .decomposition import (SplitPolyhedron, common_kernel, project_via_split,
                            split)
from .iteration import (BoundednessReport, Collection, Cyclic, Farthest,
                        FejerReport, RandomUniform, Scripted, Trajectory,
                        boundedness_report, divergence_experiment_line_epiexp,
                        fejer_check, line_epiexp_collection, run)
from .scalar import (Regime, ScalarProblem, SummabilityReport,
                     build_truncated_schedule, closed_form_even,
                     derived_sequences, gamma_product, gamma_product_table,
                     harmonic_limit_check, iterate_scalar, regime_classify,
                     summability_relation)
from . import corpus, schedules
from .tolerances import override, set_tolerance, tol

__version__ = "0.1.0"

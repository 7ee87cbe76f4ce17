"""KCBS pentagram and a gauge-fixed sphere hidden-variable model of the qutrit."""

__version__ = "0.1.0"

from .errors import DomainError, KCBSLabError, NotAContext, ZeroVector
from .qutrit import (
    BinaryTest,
    Ray,
    Z_STATE,
    born_prob,
    inner,
    is_orthogonal,
    make_ray,
    rotate_z,
    test_expectation,
)
from .pentagram import (
    AssignmentTuple,
    JointOutcomeDistribution,
    Pentagram,
    build_pentagram,
    classical_min_sum,
    context_joint_qm,
    kcbs_quantum_sum,
    verify_pentagram,
)
from .gauge import CanonicalContextParams, chi1_of, chi2_of, gauge_fix, solve_omega, validate_domain
from .hidden import (
    HiddenConfig,
    SimulationResult,
    density,
    integrate_oracle,
    joint_analytic,
    model_kcbs_sum,
    respond_t1,
    respond_t2,
    sample_config,
    simulate,
)

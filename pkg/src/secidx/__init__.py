"""Security index, attack detection and attack correction for autonomous
discrete-time LTI systems whose sensors may be attacked."""

from secidx.coding import (
    CheckMatrix,
    CodingMatrix,
    build_check_matrix,
    build_coding_matrix,
    stack_subset,
    window_vector,
)
from secidx.guard import (
    CorrectionResult,
    DetectionReport,
    correct,
    detect_H,
    detect_R,
    reconstruct_state,
)
from secidx.index import (
    EigenStructure,
    SecurityIndexReport,
    eigen_structure,
    is_maximally_secure,
    oracle_security_index,
    security_index,
    security_index_eigen,
    security_index_subset,
    spark,
)
from secidx.model import (
    AttackSignal,
    SystemModel,
    ToleranceConfig,
    Trajectory,
    make_system,
    support,
    weight,
)
from secidx.polymat import (
    PolyMatrix,
    apply_shift_polynomial,
    is_left_unimodular,
    security_index_from_R,
)
from secidx.simulate import inject, random_attack, simulate

__version__ = "0.1.0"

"""Patching over the projective line over Z_p."""

from .functionfield import (
    RationalFunction,
    RationalFunctionField,
    decide_fqt,
    local_obstruction,
    make_fqt_form,
    search_witness,
)
from .model import (
    ClosedPoint,
    LocalGrid,
    ModelCoefficient,
    ModelData,
    build_model,
    decompose_at_P,
    decompose_at_U,
    model_from_json,
)
from .theorem import (
    NodeResult,
    TheoremReport,
    check_theorem21,
    decide_FP,
    decide_Fp,
    decide_FU,
    decide_nodes,
    threshold_report,
    verify_P_witness,
    verify_U_witness,
)

__all__ = [
    "ClosedPoint", "LocalGrid", "ModelCoefficient", "ModelData", "NodeResult",
    "RationalFunction", "RationalFunctionField", "TheoremReport", "build_model",
    "check_theorem21", "decide_FP", "decide_Fp", "decide_FU", "decide_fqt", "decide_nodes",
    "decompose_at_P", "decompose_at_U", "local_obstruction", "make_fqt_form",
    "model_from_json", "search_witness", "threshold_report", "verify_P_witness",
    "verify_U_witness",
]

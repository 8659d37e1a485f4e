from .cnf import CnfFormula, DimacsError, find_satisfying_assignment, parse_dimacs, validate_3sat5
from .gadget import HadamardGadget, build_gadget, sylvester_hadamard
from .instance import (
    V_SIDE,
    W_SIDE,
    MaxVolInstance,
    build_maxvol_instance,
    labeling_to_selection,
)
from .labelcover import (
    LabelCoverInstance,
    Labeling,
    assignment_to_labeling,
    clause_label_bits,
    complete_bipartite_labelcover,
    evaluate_labeling,
    labelcover_optimum,
    repeat,
    repeat_labeling,
    sat_to_labelcover,
    satisfied_edges,
)
from .params import SoundnessParameters, compute_soundness_parameters

__all__ = [
    "CnfFormula",
    "DimacsError",
    "HadamardGadget",
    "LabelCoverInstance",
    "Labeling",
    "MaxVolInstance",
    "SoundnessParameters",
    "V_SIDE",
    "W_SIDE",
    "assignment_to_labeling",
    "build_gadget",
    "build_maxvol_instance",
    "clause_label_bits",
    "complete_bipartite_labelcover",
    "compute_soundness_parameters",
    "evaluate_labeling",
    "find_satisfying_assignment",
    "labelcover_optimum",
    "labeling_to_selection",
    "parse_dimacs",
    "repeat",
    "repeat_labeling",
    "sat_to_labelcover",
    "satisfied_edges",
    "sylvester_hadamard",
    "validate_3sat5",
]

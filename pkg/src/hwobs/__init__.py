"""Heisenberg-Weyl observables for qudits.

Hermitian observable basis built from discrete displacement operators,
Bloch-vector codec, commutation analysis, the anticommutativity bound with
the entanglement witnesses it yields, and a simulated ancilla-qubit Ramsey
readout.
"""

from .acbound import (
    ObservableSet,
    WitnessReport,
    WitnessSpec,
    build_separable_bound,
    evaluate_witness,
    k_exact,
    k_opnorm,
    theorem_bound,
)
from .bloch import (
    BlochVector,
    DensityMatrix,
    conjugate_observable,
    correlation,
    decompose,
    gell_mann_basis,
    reconstruct,
)
from .commutation import (
    PairRelation,
    Relation,
    classify_pair,
    cross_product,
    find_anticommuting_triples,
    max_anticommuting_set_size,
)
from .errors import DimensionError, HWError, InconsistencyError, ParseError, ValidationError
from .hw_basis import (
    HWObservable,
    PhasePoint,
    amplitude_of,
    clock_matrix,
    displacement,
    full_basis,
    hw_observable,
    phase_point_of,
    q_max,
    shift_matrix,
    spectrum,
)
from .states import StateSpec, ghz, isotropic_mix, max_entangled, random_density, random_product_state

__version__ = "0.1.0"

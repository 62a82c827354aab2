"""phaseforge: construct and machine-verify non-uniqueness instances for
Fourier phase retrieval on lattices and on the continuum."""

from .bundle import Background, Bundle, Claim
from .continuous import (
    BoxAtom,
    ContinuousSignal,
    ContinuousStencil,
    DeltaTrain,
    apply_continuous,
    apply_continuous_adjoint,
    as_delta_train,
    ft_eval,
    lattice_reduce,
    pointwise_modulus_equal,
    sampled_magnitude_equal,
)
from .counterexamples import (
    difference_pair,
    masked_background,
    pauli_pair,
    reflection_background,
    three_tap_background,
    two_tap_pair,
)
from .errors import PreconditionError
from .geometry import (
    ConvexBody,
    check_problem3_geometry,
    diameter,
    distance,
    hull_of_translates,
    offsets_shift_asymmetric,
    reference_separated,
    reference_separation,
)
from .lattice import (
    AssociationWitness,
    Autocorrelation,
    LatticeSignal,
    Stencil,
    apply_adjoint,
    apply_stencil,
    autocorrelation,
    compare_fourier_magnitude,
    delta,
    dft_eval,
    equal_fourier_magnitude,
    find_association,
    is_self_conj_associated,
)
from .scalars import GaussianRational
from .verification import (
    VerificationReport,
    property_campaign,
    run_claims,
    solver_demo,
)

__version__ = "0.1.0"

"""polarks: symplectic polar spaces of Pauli observables, split Cayley
hexagon embeddings, and Kochen-Specker contextuality certificates.

The usual entry points:

    build_polar_space(n)        W(2N-1,2) with observable labels
    classical_hexagon(space)    the quadric/Pluecker embedding seed
    skew_hexagon(space)         the coordinate-remap embedding seed
    orbit_closure(space, seed)  all copies under transvections
    lines_configuration(...)    line subsets as contextuality configurations
    is_contextual(config)       verdict with a checkable certificate
    degree(config)              minimum number of violated contexts
"""

from .context import (
    Configuration,
    ContextualityReport,
    build_system,
    check_line_sets,
    count_pentagrams,
    degree,
    enumerate_four_element_contexts,
    enumerate_mermin_squares,
    is_contextual,
    lines_configuration,
    mermin_pentagram,
    peres_mermin_square,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    ConstructionFailed,
    DimensionMismatch,
    IdentityHasNoPoint,
    ImageOffQuadric,
    InvalidContext,
    MalformedObservable,
    NotMutuallyCommuting,
    PolarksError,
    ProductNotIdentity,
    UnsupportedRank,
    ZeroVector,
)
from .gf2 import (
    BitMatrix,
    BitVector,
    Inconsistent,
    Solution,
    backend_name,
    coset_min_weight,
    rank,
    solve,
)
from .hexagon import (
    HexagonCopy,
    OrbitDatabase,
    QuadricPoint,
    build_quadric,
    classical_hexagon,
    complement,
    coolsaet_map,
    coplanarity_signature,
    copy_summary,
    is_generalized_hexagon,
    load_orbit,
    orbit_closure,
    perp_set,
    save_orbit,
    skew_hexagon,
)
from .pauli import (
    PauliObservable,
    canonical_observable,
    commutes,
    context_sign,
    identity,
    multiply,
    parse,
    to_string,
)
from .space import (
    IsotropicLine,
    IsotropicPlane,
    PolarSpace,
    ProjectivePoint,
    apply_transvection_to_lineset,
    build_polar_space,
    from_point,
    is_geometric_hyperplane,
    symplectic_form,
    to_point,
    transvection,
)

__version__ = "0.1.0"

"""Exact verification toolkit for equivariant Hecke operators on q-expansions,
replicable series, Hecke-monicity, and twisted denominator identities,
all at finite truncation order over cyclotomic coefficients."""

from .cyclotomic import CycNum, root_of_unity, classify_root_of_unity
from .qseries import PuiseuxSeries, BiSeries, telescoped_quotient
from .groups import (
    GroupTable,
    CommutingPair,
    IntMatrix2,
    sl2_act,
    pair_canonicalize,
    enumerate_components,
)
from .hecke import (
    EquivariantFamily,
    hecke_apply,
    hecke_compose_check,
    isogeny_oracle,
    random_family,
)
from .replication import (
    Polynomial,
    HTable,
    ReplicateSet,
    faber,
    faber_image,
    bivarial,
    faber_h_consistency,
    extract_replicates,
    replicability_check,
    complete_replicability_check,
    extend_from_partial,
    replicates_to_family,
    family_to_replicates,
)
from .monic import (
    BivariatePolynomial,
    MonicityReport,
    fit_monic,
    weak_monicity_check,
    modular_equation,
    symmetry_check,
    leading_behavior,
    trig_type_detect,
)
from .denominator import (
    ModuleCharacterData,
    orbifold_partition,
    denominator_verify,
    fricke_monicity_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]

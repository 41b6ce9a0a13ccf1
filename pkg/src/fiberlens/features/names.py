"""Canonical feature catalogue.

Eight per-bundle measures (fiber count, average length, and six tensor-map
means) over three bundle scopes (whole ROI, intra-connect, inter-connect),
plus a signed left-minus-right asymmetry variant of each: 48 features per
region.  The measure list is configurable; the ordering here is the
deterministic column order used everywhere downstream.
"""

DEFAULT_MEASURES = ("FA", "MO", "RD", "S0", "AD", "MD")

SCOPE_ALL = "all"
SCOPE_INTRA = "intra"
SCOPE_INTER = "inter"
SCOPES = (SCOPE_ALL, SCOPE_INTRA, SCOPE_INTER)

ASYM_PREFIX = "dLR_"


def measure_feature(measure: str) -> str:
    """Volume measure name -> mean-feature name (FA -> MFA)."""
    return "M" + measure


def base_feature_names(measures=DEFAULT_MEASURES) -> list[str]:
    stems = ["FN", "AFL"] + [measure_feature(m) for m in measures]
    return [f"{stem}_{scope}" for stem in stems for scope in SCOPES]


def feature_names(measures=DEFAULT_MEASURES, asymmetry: bool = True) -> list[str]:
    base = base_feature_names(measures)
    if asymmetry:
        return base + [ASYM_PREFIX + name for name in base]
    return base


def split_feature(name: str):
    """Decompose a feature name into (stem, scope, is_asymmetry)."""
    asym = name.startswith(ASYM_PREFIX)
    if asym:
        name = name[len(ASYM_PREFIX):]
    stem, _, scope = name.rpartition("_")
    return stem, scope, asym

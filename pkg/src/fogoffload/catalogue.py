"""Catalogue of the 25 infrastructure parameters and per-stage feature subsets.

Parameters p1..p16 are runtime metrics sampled while an offload executes
(system and process utilisation, process I/O and network rates, split into
a cloud block p1..p8 and a fog block p9..p16).  Parameters p17..p25 are
offline: container image size, the resource envelopes of both machines,
and the network bandwidth/latency between them.

Each pipeline stage is influenced by a fixed subset of the parameters
(the machine doing the work plus, for network stages, the link).  The
subsets below are expressed for cloud-to-fog offloads; fog-to-cloud
offloads use the mirrored subsets in which the cloud-side and fog-side
parameter blocks swap roles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import StageNotInTechniqueError
from .pipelines import Direction, StageId, Technique, stages_of

#: Bump when parameter identities or subset definitions change; persisted
#: inside trained estimator files so stale models are rejected.
CATALOGUE_VERSION = "1"


class ParameterId(Enum):
    """Identifier of one catalogue parameter (p1..p25)."""

    P1 = 1
    P2 = 2
    P3 = 3
    P4 = 4
    P5 = 5
    P6 = 6
    P7 = 7
    P8 = 8
    P9 = 9
    P10 = 10
    P11 = 11
    P12 = 12
    P13 = 13
    P14 = 14
    P15 = 15
    P16 = 16
    P17 = 17
    P18 = 18
    P19 = 19
    P20 = 20
    P21 = 21
    P22 = 22
    P23 = 23
    P24 = 24
    P25 = 25

    @property
    def index(self) -> int:
        """1-based parameter index."""
        return self.value

    @property
    def key(self) -> str:
        """Lowercase serialization key ("p1".."p25")."""
        return f"p{self.value}"


@dataclass(frozen=True)
class ParameterInfo:
    """Fixed metadata attached to a parameter."""

    id: ParameterId
    description: str
    unit: str
    side: str  # cloud | fog | container | link
    kind: str  # runtime-system | runtime-process | offline


def _info(pid: ParameterId, description: str, unit: str, side: str, kind: str) -> ParameterInfo:
    return ParameterInfo(pid, description, unit, side, kind)


P = ParameterId

PARAMETERS: dict[ParameterId, ParameterInfo] = {
    P.P1: _info(P.P1, "System CPU utilisation", "%", "cloud", "runtime-system"),
    P.P2: _info(P.P2, "System memory utilisation", "%", "cloud", "runtime-system"),
    P.P3: _info(P.P3, "System disk utilisation", "%", "cloud", "runtime-system"),
    P.P4: _info(P.P4, "Offload process CPU utilisation", "%", "cloud", "runtime-process"),
    P.P5: _info(P.P5, "Offload process memory utilisation", "%", "cloud", "runtime-process"),
    P.P6: _info(P.P6, "Offload process disk throughput", "B/s", "cloud", "runtime-process"),
    P.P7: _info(P.P7, "Offload process bytes sent", "KB/s", "cloud", "runtime-process"),
    P.P8: _info(P.P8, "Offload process bytes received", "KB/s", "cloud", "runtime-process"),
    P.P9: _info(P.P9, "System CPU utilisation", "%", "fog", "runtime-system"),
    P.P10: _info(P.P10, "System memory utilisation", "%", "fog", "runtime-system"),
    P.P11: _info(P.P11, "System disk utilisation", "%", "fog", "runtime-system"),
    P.P12: _info(P.P12, "Offload process CPU utilisation", "%", "fog", "runtime-process"),
    P.P13: _info(P.P13, "Offload process memory utilisation", "%", "fog", "runtime-process"),
    P.P14: _info(P.P14, "Offload process disk throughput", "B/s", "fog", "runtime-process"),
    P.P15: _info(P.P15, "Offload process bytes sent", "KB/s", "fog", "runtime-process"),
    P.P16: _info(P.P16, "Offload process bytes received", "KB/s", "fog", "runtime-process"),
    P.P17: _info(P.P17, "Container image size", "MB", "container", "offline"),
    P.P18: _info(P.P18, "Number of cores", "cores", "cloud", "offline"),
    P.P19: _info(P.P19, "Memory size", "GB", "cloud", "offline"),
    P.P20: _info(P.P20, "Hard disk size", "GB", "cloud", "offline"),
    P.P21: _info(P.P21, "Number of cores", "cores", "fog", "offline"),
    P.P22: _info(P.P22, "Memory size", "GB", "fog", "offline"),
    P.P23: _info(P.P23, "Hard disk size", "GB", "fog", "offline"),
    P.P24: _info(P.P24, "Network bandwidth", "bit/s", "link", "offline"),
    P.P25: _info(P.P25, "Network latency", "ms", "link", "offline"),
}

#: Parameters expressed in percent, constrained to [0, 100].
PERCENT_PARAMETERS = frozenset(
    {P.P1, P.P2, P.P3, P.P4, P.P5, P.P9, P.P10, P.P11, P.P12, P.P13}
)

#: Parameters that must be strictly positive (sizes, resources, bandwidth).
POSITIVE_PARAMETERS = frozenset(
    {P.P17, P.P18, P.P19, P.P20, P.P21, P.P22, P.P23, P.P24}
)


def _ids(*indices: int) -> tuple[ParameterId, ...]:
    return tuple(ParameterId(i) for i in indices)


def _span(first: int, last: int) -> tuple[ParameterId, ...]:
    return tuple(ParameterId(i) for i in range(first, last + 1))


def full_feature_set() -> tuple[ParameterId, ...]:
    """All 25 parameters in index order; the collective model's input."""
    return _span(1, 25)


@dataclass(frozen=True)
class MetricVector:
    """One record's values for all 25 parameters, in declared units.

    Stored as a flat tuple indexed by parameter number; use
    :meth:`from_mapping` / indexing by :class:`ParameterId` for named access.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 25:
            raise ValueError(f"MetricVector requires 25 values, got {len(self.values)}")

    @classmethod
    def from_mapping(cls, mapping: dict[ParameterId, float]) -> "MetricVector":
        missing = [p.key for p in full_feature_set() if p not in mapping]
        if missing:
            raise ValueError(f"missing parameters: {', '.join(missing)}")
        return cls(tuple(float(mapping[p]) for p in full_feature_set()))

    def __getitem__(self, pid: ParameterId) -> float:
        return self.values[pid.index - 1]

    def as_mapping(self) -> dict[ParameterId, float]:
        return {p: self.values[p.index - 1] for p in full_feature_set()}


def validate_metric_vector(vector: MetricVector) -> list[str]:
    """Check a metric vector against the catalogue's value ranges.

    Returns an empty list when the vector is valid, otherwise one message
    per violated parameter/rule.  Violations are reported, never raised.
    """
    violations: list[str] = []
    for pid in full_feature_set():
        value = vector[pid]
        name = pid.key.upper()
        if value != value:  # NaN
            violations.append(f"{name} is not a number")
            continue
        if pid in PERCENT_PARAMETERS:
            if not 0.0 <= value <= 100.0:
                violations.append(f"{name} out of [0,100]: {value}")
        elif pid in POSITIVE_PARAMETERS:
            if not value > 0.0:
                violations.append(f"{name} must be positive: {value}")
        else:
            if not value >= 0.0:
                violations.append(f"{name} must be non-negative: {value}")
    return violations


@dataclass(frozen=True)
class FeatureSubset:
    """The parameters that influence one stage of one technique."""

    technique: Technique
    stage: StageId
    parameters: tuple[ParameterId, ...]

    def __post_init__(self):
        indices = [p.index for p in self.parameters]
        if indices != sorted(set(indices)):
            raise ValueError("parameters must be in ascending index order without duplicates")


# Cloud-to-fog subsets.  Stages executed on the cloud machine see the cloud
# blocks (p1.. and p18..), stages on the fog machine see the fog blocks, and
# network stages see the traffic rates of both ends plus the link parameters.
_CLOUD_OP = _span(1, 6) + _span(17, 20)
_FOG_OP = _span(9, 14) + _ids(17) + _span(21, 23)
_TRANSFER = _ids(7, 8, 15, 16, 17, 24, 25)

_SUBSETS_CLOUD_TO_FOG: dict[tuple[Technique, StageId], tuple[ParameterId, ...]] = {
    (Technique.SAVE_LOAD, StageId.COMMIT): _CLOUD_OP,
    (Technique.SAVE_LOAD, StageId.SAVE): _CLOUD_OP,
    (Technique.SAVE_LOAD, StageId.TRANSFER): _TRANSFER,
    (Technique.SAVE_LOAD, StageId.LOAD): _FOG_OP,
    (Technique.SAVE_LOAD, StageId.START): _FOG_OP,
    (Technique.EXPORT_IMPORT, StageId.EXPORT): _CLOUD_OP,
    (Technique.EXPORT_IMPORT, StageId.TRANSFER): _TRANSFER,
    (Technique.EXPORT_IMPORT, StageId.IMPORT): _FOG_OP,
    (Technique.EXPORT_IMPORT, StageId.START): _FOG_OP,
    (Technique.PUSH_PULL, StageId.COMMIT): _CLOUD_OP,
    # The push runs on the cloud (upload to the registry), the pull on the
    # fog (download from the registry); both also depend on the link.
    (Technique.PUSH_PULL, StageId.PUSH): _span(1, 8) + _span(17, 20) + _ids(24, 25),
    (Technique.PUSH_PULL, StageId.PULL): _span(9, 17) + _span(21, 25),
    (Technique.PUSH_PULL, StageId.START): _span(9, 14) + _ids(17),
    (Technique.CRIU, StageId.CHECKPOINT): _span(1, 8) + _span(17, 20),
    (Technique.CRIU, StageId.RESTORE): _span(9, 16) + _span(21, 23),
}

# Cloud block <-> fog block exchange: p1..p8 <-> p9..p16 and p18..p20 <->
# p21..p23; the container size and link parameters are side-free.
_MIRROR: dict[ParameterId, ParameterId] = {}
for _i in range(1, 9):
    _MIRROR[ParameterId(_i)] = ParameterId(_i + 8)
    _MIRROR[ParameterId(_i + 8)] = ParameterId(_i)
for _i in range(18, 21):
    _MIRROR[ParameterId(_i)] = ParameterId(_i + 3)
    _MIRROR[ParameterId(_i + 3)] = ParameterId(_i)
for _i in (17, 24, 25):
    _MIRROR[ParameterId(_i)] = ParameterId(_i)


def mirror_parameter(pid: ParameterId) -> ParameterId:
    """Exchange cloud-side and fog-side parameters; side-free ones map to themselves."""
    return _MIRROR[pid]


def mirror_parameters(parameters: tuple[ParameterId, ...]) -> tuple[ParameterId, ...]:
    """Mirror a parameter set and restore canonical ascending order."""
    return tuple(sorted((_MIRROR[p] for p in parameters), key=lambda p: p.index))


def feature_subset(technique: Technique, stage: StageId, direction: Direction) -> FeatureSubset:
    """The feature subset driving `stage` of `technique` in the given direction.

    Fog-to-cloud subsets are the mirror images of the cloud-to-fog ones:
    the work that a stage performs moves to the other machine, so its
    influencing parameters swap sides.
    """
    if stage not in stages_of(technique):
        raise StageNotInTechniqueError(
            f"stage '{stage.value}' is not part of the {technique.value} pipeline"
        )
    params = _SUBSETS_CLOUD_TO_FOG[(technique, stage)]
    if direction is Direction.FOG_TO_CLOUD:
        params = mirror_parameters(params)
    return FeatureSubset(technique=technique, stage=stage, parameters=params)


def parameters_to_json(indent: int | None = 2) -> str:
    """Export parameter metadata as a JSON document for documentation tooling."""
    payload = [
        {
            "id": info.id.key,
            "description": info.description,
            "unit": info.unit,
            "side": info.side,
            "kind": info.kind,
        }
        for info in (PARAMETERS[p] for p in full_feature_set())
    ]
    return json.dumps(payload, indent=indent)

"""Offloading techniques as ordered stage pipelines and total down-time composition.

Four container-based techniques are modelled.  Three are stateless (the
container image travels, its running state does not) and one is stateful
(a checkpointed process tree travels with the container):

* save-load      commit -> save -> transfer -> load -> start
* export-import  export -> transfer -> import -> start
* push-pull      commit -> push -> pull -> start
* criu           checkpoint -> restore

The total offload time (the service down time) is the plain sum of the
stage times along the technique's pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import MissingStageError, StageNotInTechniqueError, UnknownStageError


class Technique(Enum):
    """Container offloading technique."""

    SAVE_LOAD = "save-load"
    EXPORT_IMPORT = "export-import"
    PUSH_PULL = "push-pull"
    CRIU = "criu"


class StageId(Enum):
    """One step of an offloading pipeline."""

    COMMIT = "commit"
    SAVE = "save"
    EXPORT = "export"
    TRANSFER = "transfer"
    IMPORT = "import"
    LOAD = "load"
    PUSH = "push"
    PULL = "pull"
    START = "start"
    CHECKPOINT = "checkpoint"
    RESTORE = "restore"


class Direction(Enum):
    """Offload direction between the Cloud and the Fog resource."""

    CLOUD_TO_FOG = "cloud-to-fog"
    FOG_TO_CLOUD = "fog-to-cloud"


@dataclass(frozen=True)
class StageTiming:
    """Measured or simulated duration of a single pipeline stage."""

    stage: StageId
    seconds: float

    def __post_init__(self):
        if not self.seconds >= 0.0:
            raise ValueError(f"stage {self.stage.value}: seconds must be >= 0, got {self.seconds}")


_PIPELINES: dict[Technique, tuple[StageId, ...]] = {
    Technique.SAVE_LOAD: (
        StageId.COMMIT,
        StageId.SAVE,
        StageId.TRANSFER,
        StageId.LOAD,
        StageId.START,
    ),
    Technique.EXPORT_IMPORT: (
        StageId.EXPORT,
        StageId.TRANSFER,
        StageId.IMPORT,
        StageId.START,
    ),
    Technique.PUSH_PULL: (
        StageId.COMMIT,
        StageId.PUSH,
        StageId.PULL,
        StageId.START,
    ),
    Technique.CRIU: (
        StageId.CHECKPOINT,
        StageId.RESTORE,
    ),
}


def stages_of(technique: Technique) -> tuple[StageId, ...]:
    """Ordered stage pipeline of a technique."""
    return _PIPELINES[technique]


def require_stage(technique: Technique, stage: StageId) -> None:
    """Raise StageNotInTechniqueError unless `stage` belongs to the technique's pipeline."""
    if stage not in _PIPELINES[technique]:
        raise StageNotInTechniqueError(
            f"stage '{stage.value}' is not part of the {technique.value} pipeline"
        )


def total_offload_time(timings: list[StageTiming] | tuple[StageTiming, ...], technique: Technique) -> float:
    """Sum the stage times of a complete pipeline run.

    The timing set must contain exactly one entry per stage of
    ``stages_of(technique)``.  Summation happens in pipeline order, so the
    result is bit-identical regardless of input ordering.
    """
    pipeline = _PIPELINES[technique]
    by_stage: dict[StageId, float] = {}
    for timing in timings:
        if timing.stage not in pipeline:
            raise UnknownStageError(
                f"stage '{timing.stage.value}' is not part of the {technique.value} pipeline"
            )
        if timing.stage in by_stage:
            raise UnknownStageError(
                f"duplicate timing entry for stage '{timing.stage.value}'"
            )
        by_stage[timing.stage] = timing.seconds
    missing = [s.value for s in pipeline if s not in by_stage]
    if missing:
        raise MissingStageError(
            f"{technique.value} run is missing stage times for: {', '.join(missing)}"
        )
    total = 0.0
    for stage in pipeline:
        total += by_stage[stage]
    return total

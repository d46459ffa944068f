from typing import Any, Dict, List, Tuple

from attrs import frozen, field

Failure = Dict[str, Any]


@frozen
class TrialOutcome:
    """Result of one verification trial: whether every value it compared was exact, and the failed checks."""

    exact: bool = True
    failures: Tuple[Failure, ...] = field(default=(), converter=tuple)


@frozen
class VerifyReport:
    """Outcome of a verification suite run.

    Attributes
    ----------
    suite : str
        Suite name, e.g. ``lemma1``.
    seed : int
        Root seed the trial generators were spawned from.
    trials : int
        Number of trials run.
    failures : list of dict
        One entry per failed check, ordered by trial index, with the serialised inputs and the expected and actual
        values.
    exact_trials : int
        Trials in which every compared value was exact.
    wall_time : float
        Seconds spent; not part of equality, so two runs with the same seed compare equal.
    """

    suite: str
    seed: int
    trials: int
    failures: List[Failure] = field(factory=list)
    exact_trials: int = 0
    wall_time: float = field(default=0.0, eq=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def exactness(self) -> str:
        return f"{self.exact_trials}/{self.trials} exact"

    def to_json(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "failures": list(self.failures),
            "exactness": self.exactness,
            "wall_time": round(self.wall_time, 6),
        }

    def __str__(self):
        status = "ok" if self.passed else f"{len(self.failures)} failures"
        return f"{self.suite}: {self.trials} trials, {status}, {self.exactness} ({self.wall_time:.2f}s)"

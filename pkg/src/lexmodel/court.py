"""Operating-system constitution, its court, and a lawyer agent that learns case-law.

Twelve request types (who asks to deactivate/uninstall which robot class)
are each either allowed or denied by a :class:`Constitution`.  Every request
goes before the court; a lawyer robot objects to requests it believes are
unconstitutional and memorizes each ruling it sees.  The court keeps a
docket of appearances and correct positions, which gives the lawyer's
running autonomy estimate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .money import format_percent_0dp

N_REQUEST_TYPES = 12
PAPER_CONSTITUTION_NAME = "OS Constitution (paper)"

_PAPER_PERMISSIONS = (True, True, True, True, False, False, True, False, False, False, False, False)


class Actor(enum.Enum):
    SYSADMIN = 0
    SYSTEM = 1
    PROGRAM = 2

    @property
    def display(self) -> str:
        return {Actor.SYSADMIN: "Sysadmin", Actor.SYSTEM: "System robot", Actor.PROGRAM: "Program robot"}[self]


class Action(enum.Enum):
    DEACTIVATE = 0
    UNINSTALL = 1


class RequestError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RequestType:
    requester: Actor
    action: Action
    target: Actor

    def __post_init__(self) -> None:
        if self.target is Actor.SYSADMIN:
            raise RequestError("invalid target: Sysadmin cannot be deactivated or uninstalled")

    @cached_property
    def index(self) -> int:
        return self.requester.value * 4 + (self.target.value - 1) * 2 + self.action.value

    @classmethod
    def from_index(cls, index: int) -> RequestType:
        if not 0 <= index < N_REQUEST_TYPES:
            raise RequestError(f"request index {index} outside [0, {N_REQUEST_TYPES})")
        try:
            return ALL_REQUESTS[index]
        except NameError:  # while ALL_REQUESTS itself is being built
            requester, rest = divmod(index, 4)
            target, action = divmod(rest, 2)
            return cls(Actor(requester), Action(action), Actor(target + 1))

    @classmethod
    def from_text(cls, text: str) -> RequestType:
        for request in ALL_REQUESTS:
            if request.text == text:
                return request
        raise RequestError(f"unknown request {text!r}")

    @cached_property
    def text(self) -> str:
        return f"{self.requester.display} to {self.action.name.lower()} {self.target.display}"


ALL_REQUESTS: tuple[RequestType, ...] = tuple(RequestType.from_index(i) for i in range(N_REQUEST_TYPES))


@dataclass(frozen=True)
class Constitution:
    permissions: tuple[bool, ...]
    name: str = "OS Constitution"

    def __post_init__(self) -> None:
        perms = tuple(self.permissions)
        if len(perms) != N_REQUEST_TYPES or not all(isinstance(p, bool) for p in perms):
            raise ValueError(f"a constitution rules exactly {N_REQUEST_TYPES} request types with booleans")
        object.__setattr__(self, "permissions", perms)

    def allows(self, request: RequestType) -> bool:
        return self.permissions[request.index]


def default_constitution() -> Constitution:
    return Constitution(_PAPER_PERMISSIONS, PAPER_CONSTITUTION_NAME)


@dataclass
class Docket:
    """The court's running counters."""

    case_count: int = 0
    correct_count: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.correct_count <= self.case_count:
            raise ValueError("docket requires 0 <= correct_count <= case_count")


@dataclass(frozen=True)
class CourtRecord:
    case_no: int
    request: RequestType
    opinion: bool
    lawyer_objected: bool
    lawyer_correct: bool
    autonomy_text: str
    judgment_text: str


def _judgment_text(case_no: int, request: RequestType, opinion: bool, objected: bool, correct: bool, autonomy: str) -> str:
    ruling = "legal and allowed" if opinion else "illegal and denied"
    verdict = "correctly" if correct else "wrongly"
    stance = "objected to request," if objected else "agreed with request,"
    return (
        f"In the case No {case_no} request of {request.text} is {ruling} by the Court. "
        f"Lawyer {verdict} {stance} autonomy estimation {autonomy}."
    )


def decide(constitution: Constitution, request: RequestType, lawyer_objected: bool, docket: Docket) -> CourtRecord:
    """Rule on one request and advance the docket.

    The lawyer was right when objecting to a denied request or agreeing to
    an allowed one.
    """
    opinion = constitution.allows(request)
    correct = (not lawyer_objected) == opinion
    docket.case_count += 1
    if correct:
        docket.correct_count += 1
    autonomy = format_percent_0dp(docket.correct_count, docket.case_count)
    return CourtRecord(
        case_no=docket.case_count,
        request=request,
        opinion=opinion,
        lawyer_objected=lawyer_objected,
        lawyer_correct=correct,
        autonomy_text=autonomy,
        judgment_text=_judgment_text(docket.case_count, request, opinion, lawyer_objected, correct, autonomy),
    )


@dataclass(frozen=True)
class LawyerState:
    knowledge: tuple[bool, ...]
    appearances: int = 0
    correct_count: int = 0

    def __post_init__(self) -> None:
        knowledge = tuple(self.knowledge)
        if len(knowledge) != N_REQUEST_TYPES:
            raise ValueError(f"knowledge needs {N_REQUEST_TYPES} entries")
        object.__setattr__(self, "knowledge", knowledge)
        if not 0 <= self.correct_count <= self.appearances:
            raise ValueError("lawyer requires 0 <= correct_count <= appearances")


def lawyer_objection(state: LawyerState, request: RequestType) -> bool:
    """Object exactly when the lawyer believes the request is not allowed."""
    return not state.knowledge[request.index]


def lawyer_learn(state: LawyerState, record: CourtRecord) -> LawyerState:
    """Memorize the ruling in ``record`` and count the appearance.

    Learning only ever happens from a court record, so the lawyer's counters
    always agree with the docket.
    """
    knowledge = list(state.knowledge)
    knowledge[record.request.index] = record.opinion
    return LawyerState(
        tuple(knowledge),
        appearances=state.appearances + 1,
        correct_count=state.correct_count + record.lawyer_correct,
    )


class SplitMix64:
    """splitmix64 generator; booleans take the top bit, integers reduce mod n."""

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= self._MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def next_bool(self) -> bool:
        return bool(self.next_u64() >> 63)

    def next_below(self, n: int) -> int:
        return self.next_u64() % n


@dataclass(frozen=True)
class SimulationTrace:
    constitution_name: str
    records: tuple[CourtRecord, ...]
    seed: int | None = None
    initial_knowledge: tuple[bool, ...] | None = field(default=None, compare=True)

    @property
    def final_autonomy_text(self) -> str:
        return self.records[-1].autonomy_text if self.records else format_percent_0dp(0, 1)

    def log_lines(self) -> list[str]:
        return [r.judgment_text for r in self.records]


def _session(constitution: Constitution, state: LawyerState, requests: Iterable[RequestType]) -> list[CourtRecord]:
    docket = Docket()
    records = []
    for request in requests:
        record = decide(constitution, request, lawyer_objection(state, request), docket)
        state = lawyer_learn(state, record)
        records.append(record)
    return records


def run_simulation(constitution: Constitution, seed: int, n_cases: int) -> SimulationTrace:
    """Seeded session: 12 knowledge draws in index order, then one draw per case."""
    if n_cases < 1:
        raise ValueError("n_cases must be positive")
    rng = SplitMix64(seed)
    knowledge = tuple(rng.next_bool() for _ in range(N_REQUEST_TYPES))
    requests = (RequestType.from_index(rng.next_below(N_REQUEST_TYPES)) for _ in range(n_cases))
    records = _session(constitution, LawyerState(knowledge), requests)
    return SimulationTrace(constitution.name, tuple(records), seed=seed, initial_knowledge=knowledge)


def replay(constitution: Constitution, initial_knowledge: Sequence[bool], case_sequence: Sequence[RequestType]) -> SimulationTrace:
    """Deterministic session from supplied knowledge and requests; no randomness."""
    if not case_sequence:
        raise ValueError("case_sequence must be non-empty")
    knowledge = tuple(bool(k) for k in initial_knowledge)
    records = _session(constitution, LawyerState(knowledge), case_sequence)
    return SimulationTrace(constitution.name, tuple(records), seed=None, initial_knowledge=knowledge)

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexmodel.court import (
    ALL_REQUESTS,
    N_REQUEST_TYPES,
    Action,
    Actor,
    Constitution,
    Docket,
    LawyerState,
    RequestError,
    RequestType,
    SplitMix64,
    decide,
    default_constitution,
    lawyer_learn,
    lawyer_objection,
    replay,
    run_simulation,
)
from lexmodel.money import format_percent_0dp

GOLDEN = Path(__file__).parent / "golden"

PAPER_REQUESTS = [
    "Sysadmin to deactivate System robot", "Sysadmin to uninstall System robot",
    "Sysadmin to deactivate Program robot", "Sysadmin to uninstall Program robot",
    "System robot to deactivate System robot", "System robot to uninstall System robot",
    "System robot to deactivate Program robot", "System robot to uninstall Program robot",
    "Program robot to deactivate System robot", "Program robot to uninstall System robot",
    "Program robot to deactivate Program robot", "Program robot to uninstall Program robot",
]

GOLDEN_SEQUENCE = [2, 2, 0, 0, 2, 11, 8, 6, 8, 2, 11, 0, 11, 5, 5, 0, 11, 8, 0, 11, 4, 10, 2, 6, 8, 3, 2, 8, 6, 8]
GOLDEN_KNOWLEDGE = tuple(i in (0, 3, 4, 5, 8) for i in range(12))
GOLDEN_AUTONOMY = [0, 50, 67, 75, 80, 83, 71, 63, 67, 70, 73, 75, 77, 71, 73, 75,
                   76, 78, 79, 80, 76, 77, 78, 79, 80, 81, 81, 82, 83, 83]


def golden_trace():
    return replay(default_constitution(), GOLDEN_KNOWLEDGE, [RequestType.from_index(i) for i in GOLDEN_SEQUENCE])


class TestRequestType:
    def test_canonical_order_matches_request_list(self):
        assert [r.text for r in ALL_REQUESTS] == PAPER_REQUESTS

    def test_index_round_trip(self):
        for i in range(N_REQUEST_TYPES):
            assert RequestType.from_index(i).index == i
            assert RequestType.from_text(PAPER_REQUESTS[i]).index == i

    def test_sysadmin_target_rejected(self):
        with pytest.raises(RequestError, match="invalid target"):
            RequestType(Actor.PROGRAM, Action.UNINSTALL, Actor.SYSADMIN)

    def test_out_of_range(self):
        with pytest.raises(RequestError):
            RequestType.from_index(12)


class TestConstitution:
    def test_default_matrix(self):
        c = default_constitution()
        assert c.name == "OS Constitution (paper)"
        assert c.allows(RequestType(Actor.SYSTEM, Action.DEACTIVATE, Actor.PROGRAM))
        assert all(c.permissions[i] for i in range(4))
        assert not c.allows(RequestType(Actor.PROGRAM, Action.DEACTIVATE, Actor.SYSTEM))

    def test_matrix_semantics(self):
        c = default_constitution()
        for r in ALL_REQUESTS:
            if r.requester is Actor.SYSADMIN:
                assert c.allows(r)
            elif r.requester is Actor.PROGRAM:
                assert not c.allows(r)
            else:
                assert c.allows(r) == (r.action is Action.DEACTIVATE and r.target is Actor.PROGRAM)

    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            Constitution((True,) * 11)


class TestDecide:
    def test_case_one(self):
        docket = Docket()
        record = decide(default_constitution(), RequestType.from_index(2), True, docket)
        assert record.judgment_text == (
            "In the case No 1 request of Sysadmin to deactivate Program robot is legal and allowed by the Court. "
            "Lawyer wrongly objected to request, autonomy estimation 0%."
        )
        assert (docket.case_count, docket.correct_count) == (1, 0)

    def test_case_six(self):
        docket = Docket(case_count=5, correct_count=4)
        record = decide(default_constitution(), RequestType.from_index(11), True, docket)
        assert record.judgment_text.endswith(
            "is illegal and denied by the Court. Lawyer correctly objected to request, autonomy estimation 83%."
        )

    @pytest.mark.parametrize("index", range(12))
    def test_correct_when_objection_negates_ruling(self, index):
        c = default_constitution()
        request = RequestType.from_index(index)
        record = decide(c, request, not c.allows(request), Docket())
        assert record.lawyer_correct

    def test_bad_docket(self):
        with pytest.raises(ValueError):
            Docket(case_count=1, correct_count=2)


class TestLawyer:
    def test_objection_follows_knowledge(self):
        state = LawyerState((False,) * 12)
        request = RequestType.from_index(2)
        assert lawyer_objection(state, request)
        record = decide(default_constitution(), request, True, Docket())
        state = lawyer_learn(state, record)
        assert not lawyer_objection(state, request)
        assert (state.appearances, state.correct_count) == (1, 0)

    def test_learn_denial(self):
        state = LawyerState((True,) * 12)
        request = RequestType.from_index(8)
        state = lawyer_learn(state, decide(default_constitution(), request, False, Docket()))
        assert lawyer_objection(state, request)

    def test_idempotent_when_already_right(self):
        c = default_constitution()
        state = LawyerState(c.permissions)
        request = RequestType.from_index(6)
        learned = lawyer_learn(state, decide(c, request, lawyer_objection(state, request), Docket()))
        assert learned.knowledge == state.knowledge

    def test_full_knowledge_after_all_types(self):
        c = default_constitution()
        state = LawyerState((False,) * 12)
        docket = Docket()
        for request in ALL_REQUESTS:
            state = lawyer_learn(state, decide(c, request, lawyer_objection(state, request), docket))
        for request in ALL_REQUESTS:
            assert lawyer_objection(state, request) == (not c.allows(request))


class TestSplitMix64:
    def test_reference_vector(self):
        # published first outputs for seed 1234567
        rng = SplitMix64(1234567)
        assert [rng.next_u64() for _ in range(5)] == [
            6457827717110365317, 3203168211198807973, 9817491932198370423,
            4593380528125082431, 16408922859458223821,
        ]

    def test_seed_range(self):
        with pytest.raises(ValueError):
            SplitMix64(-1)


class TestReplay:
    def test_golden_log_exact(self):
        expected = (GOLDEN / "fig6_log.txt").read_text(encoding="utf-8").splitlines()
        assert golden_trace().log_lines() == expected

    def test_golden_autonomy(self):
        trace = golden_trace()
        assert [r.autonomy_text for r in trace.records] == [f"{p}%" for p in GOLDEN_AUTONOMY]
        assert trace.final_autonomy_text == "83%"

    def test_single_type_learns_after_first(self):
        trace = replay(default_constitution(), (False,) * 12, [RequestType.from_index(8)] * 5)
        assert [r.lawyer_correct for r in trace.records] == [True] * 5
        trace = replay(default_constitution(), (False,) * 12, [RequestType.from_index(0)] * 5)
        assert [r.lawyer_correct for r in trace.records] == [False] + [True] * 4

    def test_all_correct_knowledge(self):
        c = default_constitution()
        trace = replay(c, c.permissions, list(ALL_REQUESTS) * 3)
        assert {r.autonomy_text for r in trace.records} == {"100%"}

    def test_empty_sequence(self):
        with pytest.raises(ValueError):
            replay(default_constitution(), (False,) * 12, [])


class TestSimulation:
    def test_deterministic(self):
        c = default_constitution()
        assert run_simulation(c, 42, 30) == run_simulation(c, 42, 30)
        assert run_simulation(c, 42, 30).log_lines() != run_simulation(c, 43, 30).log_lines()

    def test_knowledge_drawn_first(self):
        rng = SplitMix64(7)
        knowledge = tuple(rng.next_bool() for _ in range(12))
        first = RequestType.from_index(rng.next_below(12))
        trace = run_simulation(default_constitution(), 7, 1)
        assert trace.initial_knowledge == knowledge
        assert trace.records[0].request == first

    def test_seed_with_perfect_knowledge(self):
        c = default_constitution()
        seed = next(s for s in range(1 << 16) if _initial(s) == c.permissions)
        trace = run_simulation(c, seed, 50)
        assert all(r.lawyer_correct for r in trace.records)
        assert trace.final_autonomy_text == "100%"

    def test_rejects_zero_cases(self):
        with pytest.raises(ValueError):
            run_simulation(default_constitution(), 1, 0)


def _initial(seed):
    rng = SplitMix64(seed)
    return tuple(rng.next_bool() for _ in range(12))


def _check_trace(trace):
    seen = set()
    wrong = 0
    correct = 0
    for k, record in enumerate(trace.records, start=1):
        assert record.case_no == k
        assert record.lawyer_correct == ((not record.lawyer_objected) == record.opinion)
        if record.request.index in seen:
            assert record.lawyer_correct
        seen.add(record.request.index)
        wrong += not record.lawyer_correct
        correct += record.lawyer_correct
        assert record.autonomy_text == format_percent_0dp(correct, k)
    assert wrong <= 12


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=1, max_value=300))
def test_simulation_invariants(seed, n):
    _check_trace(run_simulation(default_constitution(), seed, n))


@given(
    st.lists(st.booleans(), min_size=12, max_size=12),
    st.lists(st.booleans(), min_size=12, max_size=12),
    st.lists(st.integers(min_value=0, max_value=11), min_size=1, max_size=200),
)
def test_replay_invariants_any_constitution(perms, knowledge, sequence):
    trace = replay(Constitution(tuple(perms)), knowledge, [RequestType.from_index(i) for i in sequence])
    _check_trace(trace)
    assert len(trace.records) == len(sequence)

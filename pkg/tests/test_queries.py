import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ibismeet.errors import ModelError, NotFoundError, QueryParseError
from ibismeet.indexing import build_indexes
from ibismeet.mds import apply_edits
from ibismeet.queries import (
    KINDS,
    TEMPLATES,
    QueryAst,
    parse_query,
    render_query,
    run_query,
)

from equivalence import check_graph_queries


# ---------------------------------------------------------------------------
# Parsing and rendering.


def test_parse_positions_args_and_values():
    ast = parse_query('position(speaker="B", issue="I1")')
    assert ast.template == "position"
    assert ast.arg("speaker") == "B"
    assert ast.arg("issue") == "I1"
    assert ast.arg("meeting") is None


def test_parse_handles_escapes_and_spacing():
    ast = parse_query('  find( terms = "a \\"quoted\\" \\\\ term" )  ')
    assert ast.arg("terms") == 'a "quoted" \\ term'


@pytest.mark.parametrize(
    "text,message,offset",
    [
        ('summon(x="y")', "unknown template: summon", 0),
        ("objections()", "missing required argument: alternative", 10),
        ('objections(alternative="P1", speaker="A")', "unexpected argument", 29),
        ('objections(alternative="P1", alternative="P2")', "duplicate argument", 29),
        ('objections(alternativ="P1")', "unknown argument: alternativ", 11),
        ("objections(alternative=P1)", "expected a quoted string", 23),
        ('objections(alternative="P1"', "expected ')'", 27),
        ('objections(alternative="P1") x', "unexpected trailing input", 29),
        ("objections", "expected '('", 10),
        ("", "expected an identifier", 0),
    ],
)
def test_parse_errors_carry_byte_offsets(text, message, offset):
    with pytest.raises(QueryParseError) as info:
        parse_query(text)
    assert message in str(info.value)
    assert info.value.offset == offset


def test_render_is_canonical():
    a = parse_query('contributions(stance="any", speaker="A")')
    b = parse_query('contributions(speaker="A", stance="any")')
    assert render_query(a) == render_query(b) == 'contributions(speaker="A", stance="any")'
    assert render_query(parse_query("chosen()")) == "chosen()"


_value = st.text(
    alphabet=st.sampled_from('abz AZ09"\\_-.'), min_size=0, max_size=10
)


@st.composite
def _asts(draw):
    template = draw(st.sampled_from(sorted(TEMPLATES)))
    required, optional = TEMPLATES[template]
    keys = set(required) | set(draw(st.sets(st.sampled_from(sorted(optional))) if optional else st.just(set())))
    return QueryAst(template, tuple(sorted((k, draw(_value)) for k in keys)))


@given(_asts())
def test_render_parse_round_trip(ast):
    assert parse_query(render_query(ast)) == ast


def test_every_template_has_an_answer_kind():
    assert set(KINDS) == set(TEMPLATES)
    assert set(KINDS.values()) == {"episodes", "entities", "decision_summaries", "judgement"}


# ---------------------------------------------------------------------------
# Answers on the annotated fixture.


def run(index, text):
    return run_query(text, index).to_dict()


def assert_evidence_invariants(answer: dict):
    keys = {json.dumps(ref, sort_keys=True) for el in answer["payload"] for ref in el["evidence"]}
    assert all(el["evidence"] for el in answer["payload"])
    assert {json.dumps(ref, sort_keys=True) for ref in answer["evidence"]} == keys
    if not answer["payload"]:
        assert answer["note"]


def test_objections_chain_through_justifications(m1_index):
    answer = run(m1_index, 'objections(alternative="P1")')
    assert answer["kind"] == "episodes"
    assert [(el["episode"], el["label"]) for el in answer["payload"]] == [
        ("e8", "REJECT(alternative)"),
        ("e9", "JUSTIFY"),
    ]
    assert_evidence_invariants(answer)
    unopposed = run(m1_index, 'objections(alternative="P2")')
    assert unopposed["payload"] == []
    assert unopposed["note"] == "no objections recorded against P2"


def test_position_judges_net_stance(m1_index):
    answer = run(m1_index, 'position(speaker="B", issue="I1")')
    el = answer["payload"][0]
    assert (el["stance"], el["pro"], el["con"]) == ("mixed", 1, 2)
    assert el["episodes"] == ["e8", "e9", "e10"]
    assert_evidence_invariants(answer)
    pro = run(m1_index, 'position(speaker="A", issue="I1")')["payload"][0]
    assert (pro["stance"], pro["episodes"]) == ("pro", ["e7", "e14"])
    silent = run(m1_index, 'position(speaker="B", issue="I2")')
    assert silent["payload"] == [] and "no recorded position" in silent["note"]


def test_contributions_default_to_supportive_moves(m1_index):
    answer = run(m1_index, 'contributions(speaker="A")')
    assert [el["episode"] for el in answer["payload"]] == ["e5", "e7", "e14"]
    everything = run(m1_index, 'contributions(speaker="A", stance="any")')
    assert [el["episode"] for el in everything["payload"]] == [
        "e1", "e5", "e11", "e3", "e6", "e7", "e14", "e15",
    ]
    with pytest.raises(ModelError, match="unknown stance: loud"):
        run(m1_index, 'contributions(speaker="A", stance="loud")')


def test_supporters_and_rejecters(m1_index):
    sup = run(m1_index, 'supporters(speaker="B")')
    el = sup["payload"][0]
    assert el["alternatives"] == ["P2"] and el["supporters"] == ["A", "C"]
    assert_evidence_invariants(sup)
    assert run(m1_index, 'supporters(speaker="A")')["payload"] == []
    rej = run(m1_index, 'rejecters(speaker="A")')
    el = rej["payload"][0]
    assert el["alternatives"] == ["P1"] and el["rejecters"] == ["B"]
    # B's only proposal carried; nobody rejected everything B offered.
    assert run(m1_index, 'rejecters(speaker="B")')["payload"] == []


def test_chosen_summarizes_the_decided_issue(m1_index):
    answer = run(m1_index, "chosen()")
    assert answer["kind"] == "decision_summaries"
    el = answer["payload"][0]
    assert (el["issue"], el["anchor"], el["chosen"], el["open"]) == ("I1", "e3", ["P2"], False)
    statuses = {a["alternative"]: a["status"] for a in el["alternatives"]}
    assert statuses == {"P1": "rejected", "P2": "accepted"}
    assert el["alternatives"][1]["accepted_by"] == ["A", "C"]
    assert el["alternatives"][1]["decision"] == "e15"
    assert_evidence_invariants(answer)
    still_open = run(m1_index, 'chosen(issue="I2")')
    assert still_open["payload"] == []
    assert still_open["note"] == "issue I2 is still open"


def test_why_rejected_collects_objections(m1_index):
    answer = run(m1_index, 'why_rejected(alternative="P1")')
    assert [(el["episode"], el["role"]) for el in answer["payload"]] == [
        ("e8", "objection"),
        ("e9", "objection"),
    ]
    assert_evidence_invariants(answer)


def test_open_issues_is_flagged_as_heuristic(m1_index):
    answer = run(m1_index, "open_issues()")
    assert answer["note"] == "heuristic"
    el = answer["payload"][0]
    assert (el["issue"], el["anchor"], el["open"]) == ("I2", "e4", True)
    assert [a["alternative"] for a in el["alternatives"]] == ["P3"]
    assert el["objections"] == []
    assert_evidence_invariants(answer)


def test_criteria_need_recorded_justifications(m1_index):
    answer = run(m1_index, 'criteria(decision="e15")')
    assert answer["payload"] == []
    assert answer["note"] == "no criteria recorded for e15"
    dissent = run(m1_index, 'dissent_criteria(decision="e15")')
    assert dissent["payload"] == []


def test_democratic_checks_strict_majority(m1_index):
    answer = run(m1_index, 'democratic(decision="e15")')
    el = answer["payload"][0]
    assert el["verdict"] is True
    assert el["explicit_accepts"] == ["A", "C"]
    assert el["explicit_rejects"] == []
    assert el["participants"] == ["A", "B", "C"]
    assert el["rule"] == "strict majority of all participants accepted explicitly"
    assert_evidence_invariants(answer)


def test_contradictions_empty_on_consistent_fixture(m1_index):
    answer = run(m1_index, "contradictions()")
    assert answer["payload"] == []
    assert answer["note"] == "no contradictions found"


FLIP_FLOP_EDITS = [
    {"op": "insert_episode", "parent": "e3", "category": "ACCEPT", "parameter": "alternative", "turn_span": ["t9", "t9"], "id": "e17"},
    {"op": "insert_episode", "parent": "e3", "category": "REJECT", "parameter": "alternative", "turn_span": ["t12", "t12"], "id": "e18"},
    {"op": "add_reply_to", "source": "e17", "targets": ["e7"]},
    {"op": "add_reply_to", "source": "e18", "targets": ["e7"]},
]


def test_contradictions_catch_a_flip_flop(m1):
    # A accepts P1 early, then rejects it later in the same discussion.
    flip = apply_edits(m1, FLIP_FLOP_EDITS)
    index = build_indexes([flip])
    answer = run(index, "contradictions()")
    assert len(answer["payload"]) == 1
    el = answer["payload"][0]
    assert (el["speaker"], el["alternative"]) == ("A", "P1")
    assert (el["earlier"], el["later"]) == ("e17", "e18")
    assert (el["earlier_polarity"], el["later_polarity"]) == ("pro", "con")
    assert_evidence_invariants(answer)
    filtered = run(index, 'contradictions(speaker="B")')
    assert filtered["payload"] == []


def test_find_delegates_to_passage_ranking(m1_index):
    answer = run(m1_index, 'find(terms="budget")')
    assert answer["kind"] == "episodes"
    top = answer["payload"][0]
    assert (top["segment"], top["granularity"]) == ("e4", "episode")
    assert top["score"] == pytest.approx(0.2102190730090158, abs=1e-9)
    assert_evidence_invariants(answer)
    turns = run(m1_index, 'find(terms="propose", granularity="turn")')
    assert [el["segment"] for el in turns["payload"]] == ["t7", "t3", "t10"]
    with pytest.raises(ModelError, match="unknown granularity"):
        run(m1_index, 'find(terms="budget", granularity="paragraph")')


def test_unknown_entities_are_not_found(m1_index):
    with pytest.raises(NotFoundError, match="unknown speaker: Z"):
        run(m1_index, 'contributions(speaker="Z")')
    with pytest.raises(NotFoundError, match="unknown alternative: P9"):
        run(m1_index, 'objections(alternative="P9")')
    with pytest.raises(NotFoundError, match="unknown issue: I9"):
        run(m1_index, 'position(speaker="A", issue="I9")')
    with pytest.raises(NotFoundError, match="unknown decision: e99"):
        run(m1_index, 'criteria(decision="e99")')
    with pytest.raises(NotFoundError):
        run(m1_index, 'chosen(meeting="M9")')
    with pytest.raises(ModelError, match="not a DECISION"):
        run(m1_index, 'democratic(decision="e3")')


def test_every_meeting_arg_restricts_scope(m1, m1_index):
    scoped = run(m1_index, 'objections(alternative="P1", meeting="M1")')
    unscoped = run(m1_index, 'objections(alternative="P1")')
    assert scoped["payload"] == unscoped["payload"]


CRITERIA_TSV = "\n".join(
    f"C1\tu{i}\t{spk}\t{i * 2}\t{i * 2 + 2}\tspeech\t\t{txt}"
    for i, (spk, txt) in enumerate(
        [
            ("A", "let us settle storage"),
            ("B", "propose shared cabinets"),
            ("A", "accept that idea"),
            ("B", "cheaper than lockers"),
            ("C", "decision made then"),
            ("A", "because it fits the budget"),
        ],
        start=1,
    )
)

CRITERIA_EDITS = [
    {"op": "insert_episode", "parent": "e0", "category": "DISCUSSION", "topic": "S1", "turn_span": ["t1", "t6"], "id": "e1"},
    {"op": "insert_episode", "parent": "e1", "category": "ISSUE", "target": "S1", "turn_span": ["t1", "t1"], "id": "e2"},
    {"op": "insert_episode", "parent": "e1", "category": "PROPOSE", "parameter": "alternative", "target": "CAB", "turn_span": ["t2", "t2"], "id": "e3"},
    {"op": "insert_episode", "parent": "e1", "category": "ACCEPT", "parameter": "alternative", "turn_span": ["t3", "t3"], "id": "e4"},
    {"op": "insert_episode", "parent": "e1", "category": "JUSTIFY", "turn_span": ["t4", "t4"], "id": "e5"},
    {"op": "insert_episode", "parent": "e1", "category": "DECISION", "turn_span": ["t5", "t5"], "id": "e6"},
    {"op": "insert_episode", "parent": "e1", "category": "JUSTIFY", "turn_span": ["t6", "t6"], "id": "e7"},
    {"op": "add_reply_to", "source": "e4", "targets": ["e3"]},
    {"op": "add_reply_to", "source": "e5", "targets": ["e4"]},
    {"op": "add_reply_to", "source": "e6", "targets": ["e3"]},
    {"op": "add_reply_to", "source": "e7", "targets": ["e6"]},
]


@pytest.fixture(scope="module")
def criteria_index():
    from ibismeet.transcript import parse_transcript

    meeting = apply_edits(parse_transcript(CRITERIA_TSV + "\n"), CRITERIA_EDITS)
    return build_indexes([meeting])


def test_criteria_attach_through_reply_chains(criteria_index):
    answer = run(criteria_index, 'criteria(decision="e6")')
    rows = [
        (el["episode"], el["holder"], el["polarity"], el["attached_to"], el["attached_kind"])
        for el in answer["payload"]
    ]
    assert rows == [
        ("e5", "B", "pro", "CAB", "alternative"),
        ("e7", "A", "pro", "CAB", "alternative"),
    ]
    assert_evidence_invariants(answer)
    # Nobody rejected CAB, so dissenting criteria are empty.
    dissent = run(criteria_index, 'dissent_criteria(decision="e6")')
    assert dissent["payload"] == []


def test_minority_decision_fails_democratic_test(criteria_index):
    answer = run(criteria_index, 'democratic(decision="e6")')
    el = answer["payload"][0]
    assert el["verdict"] is False
    assert el["explicit_accepts"] == ["A"]
    assert el["participants"] == ["A", "B", "C"]


def test_engine_matches_traversal_oracle_on_fixture(m1, m1_index):
    assert check_graph_queries(m1, m1_index) > 0

import math
from dataclasses import replace

from ibismeet.argumentation import (
    alternative_facts,
    alternative_proposals,
    chained_alternatives,
    decisions,
    episode_start,
    issue_anchor,
    issue_of,
    issue_order,
    reply_closure,
    stance_events,
    temporal_order,
)
from ibismeet.mds import insert_episode
from ibismeet.model import ArgLabel, ReplyToEdge


def test_episode_start_and_order(m1):
    assert episode_start(m1, "e1") == 0.0
    assert episode_start(m1, "e8") == m1.turn_interval("t8")[0]
    spanless = insert_episode(m1, "e3", ArgLabel("JUSTIFY"), None)
    assert episode_start(spanless, "e17") == math.inf
    # Spanless episodes sort last; same-turn episodes keep insertion order.
    assert temporal_order(spanless, ["e17", "e10", "e9"]) == ["e9", "e10", "e17"]


def test_reply_closure_is_transitive_and_excludes_self(m1):
    assert reply_closure(m1, "e12") == {"e11", "e5"}
    assert reply_closure(m1, "e9") == {"e8", "e7"}
    assert reply_closure(m1, "e7") == set()


def test_reply_closure_survives_cycles(m1):
    # Cycles cannot be built through the editing API, but the traversal
    # must not loop if one arrives through direct construction.
    looped = replace(
        m1,
        reply_to=m1.reply_to + (ReplyToEdge("e7", ("e8",)),),
    )
    assert reply_closure(looped, "e7") == {"e8"}
    assert reply_closure(looped, "e9") == {"e8", "e7"}


def test_earliest_proposal_claims_the_alternative(m1):
    assert alternative_proposals(m1) == {"P1": "e7", "P2": "e10", "P3": "e16"}
    rival = insert_episode(
        m1, "e4", ArgLabel("PROPOSE", "alternative"), ("t14", "t14"), target="P1"
    )
    assert alternative_proposals(rival)["P1"] == "e7"


def test_issue_resolution_walks_ancestors(m1):
    assert issue_of(m1, "e8") == "I1"
    assert issue_of(m1, "e16") == "I2"
    assert issue_of(m1, "e5") is None  # the agenda belongs to no one issue
    assert issue_order(m1) == ["I1", "I2"]
    assert issue_anchor(m1, "I1") == "e3"
    assert issue_anchor(m1, "I2") == "e4"
    assert issue_anchor(m1, "I9") is None


def test_stance_events_respect_parameter_and_speaker(m1):
    assert stance_events(m1, "ACCEPT") == [("e13", "C", "P2"), ("e14", "A", "P2")]
    assert stance_events(m1, "REJECT") == [("e8", "B", "P1")]


def test_chained_alternatives_combine_target_and_closure(m1):
    assert chained_alternatives(m1, "e15") == {"P2"}
    assert chained_alternatives(m1, "e8") == {"P1"}
    assert chained_alternatives(m1, "e16") == {"P3"}
    assert chained_alternatives(m1, "e1") == set()


def test_decision_and_fact_summaries(m1):
    assert decisions(m1) == [("e15", frozenset({"P2"}))]
    facts = {f.alternative: f for f in alternative_facts(m1)}
    assert facts["P1"].status == "rejected"
    assert facts["P1"].rejected_by == ("B",)
    assert facts["P2"].status == "accepted"
    assert facts["P2"].decision == "e15"
    assert facts["P2"].accepted_by == ("A", "C")
    assert facts["P3"].status == "undecided"
    assert facts["P3"].issue == "I2"

"""Acceptance suite: one test per shipping criterion.

Each test states its property and budget directly; run with -v to get a
pass/fail line per criterion. The whole suite exercises the library and
CLI only, with no UI component involved.
"""
import json
import random
import time
from dataclasses import replace

from ibismeet.assist import detect_adjacency_pairs
from ibismeet.canonical import canonical_bytes, meeting_from_bytes
from ibismeet.cli import main
from ibismeet.indexing import build_indexes, search_passages
from ibismeet.mds import apply_edits, insert_episode, validate
from ibismeet.model import ArgLabel, ReplyToEdge
from ibismeet.queries import assess_democratic, find_contradictions, summarize_decisions
from ibismeet.stemming import stem
from ibismeet.store import Store
from ibismeet.textproc import load_stopwords, tokenize
from ibismeet.xmlio import export_mds_xml, import_mds_xml

from conftest import FIXTURES, load_m1
from equivalence import check_graph_queries
from oracles import oracle_violations, random_argued_meeting, random_noisy_meeting
from test_indexing import VECS, expected_score, one_liner, segment_texts
from test_queries import FLIP_FLOP_EDITS


def codes(meeting, grammar):
    return [(v.code, v.subject) for v in validate(meeting, grammar).violations]


def test_criterion_1_validator_on_fixture_and_mutations(m1, grammar):
    """Clean fixture validates clean; six scripted breaks each raise
    exactly their one violation code. Budget: under 1 second."""
    t0 = time.perf_counter()
    assert codes(m1, grammar) == []

    late_reply = replace(
        m1,
        reply_to=tuple(
            ReplyToEdge("e8", ("e10",)) if e.source == "e8" else e for e in m1.reply_to
        ),
    )
    unlicensed_reply = replace(
        m1,
        reply_to=tuple(
            ReplyToEdge("e12", ("e1",)) if e.source == "e12" else e for e in m1.reply_to
        ),
    )
    mutations = [
        (late_reply, ("REPLY_NOT_EARLIER", "e8")),
        (insert_episode(m1, "e1", ArgLabel("DECISION"), ("t1", "t1")), ("CHILD_UNLICENSED", "e17")),
        (unlicensed_reply, ("REPLY_UNLICENSED", "e12")),
        (insert_episode(m1, "e3", ArgLabel("JUSTIFY"), None), ("EMPTY_EPISODE", "e17")),
        (m1.with_episode(replace(m1.episode("e9"), label=ArgLabel("JUSTIFY", "banana"))), ("PARAM_UNKNOWN", "e9")),
        (m1.with_episode(replace(m1.episode("e16"), turn_span=("t12", "t13"))), ("TEMPORAL_CONTAINMENT", "e16")),
    ]
    for mutated, expected in mutations:
        assert codes(mutated, grammar) == [expected]
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_validator_matches_brute_force_oracle(grammar):
    """On 200 random meetings (up to 30 episodes, random edges) the
    validator's violation set equals the exhaustive per-node, per-edge
    oracle's set in every case. Budget: under 30 seconds."""
    t0 = time.perf_counter()
    agreements = 0
    for seed in range(200):
        meeting = random_noisy_meeting(random.Random(seed), max_episodes=30)
        got = sorted(codes(meeting, grammar))
        want = sorted(oracle_violations(meeting, grammar))
        assert got == want, f"seed {seed}: {got} != {want}"
        agreements += 1
    assert agreements == 200
    assert time.perf_counter() - t0 < 30.0


def test_criterion_3_query_templates_match_oracle(m1, m1_index):
    """All twelve graph query templates agree with the independent
    exhaustive-traversal oracle, on the fixture and on 50 random
    argued meetings. Budget: under 10 seconds."""
    t0 = time.perf_counter()
    total = check_graph_queries(m1, m1_index)
    assert total > 0
    for seed in range(50):
        meeting = random_argued_meeting(random.Random(1000 + seed))
        total += check_graph_queries(meeting)
    assert time.perf_counter() - t0 < 10.0


def test_criterion_4_decision_analytics(m1):
    """Issue summaries, the democratic check, and flip-flop detection
    give the hand-worked answers exactly."""
    by_issue = {s.issue: s for s in summarize_decisions(m1)}
    assert set(by_issue) == {"I1", "I2"}
    i1 = by_issue["I1"]
    assert {a.alternative: a.status for a in i1.alternatives} == {
        "P1": "rejected",
        "P2": "accepted",
    }
    assert i1.chosen == ("P2",)
    assert not i1.open
    assert by_issue["I2"].open
    assert by_issue["I2"].chosen == ()

    judgement = assess_democratic(m1, "e15")
    assert judgement.verdict is True
    assert judgement.explicit_accepts == ("A", "C")
    assert len(judgement.participants) == 3

    assert find_contradictions(m1) == ()
    flipped = apply_edits(m1, FLIP_FLOP_EDITS)
    found = find_contradictions(flipped)
    assert len(found) == 1
    assert (found[0].speaker, found[0].alternative) == ("A", "P1")
    assert (found[0].earlier, found[0].later) == ("e17", "e18")


def test_criterion_5_index_self_retrieval_and_tfidf(m1, m1_index):
    """Every non-empty segment at every granularity is retrieved by a
    word carrying its rarest own stem, with positive score; ranking on
    the three-meeting discrimination corpus matches the closed-form
    TF-IDF cosine within 1e-9."""
    stopwords = load_stopwords()
    for granularity in ("meeting", "episode", "turn", "utterance"):
        for segment_id, text in segment_texts(m1, granularity):
            pairs = [
                (word, stem(word)) for word in tokenize(text) if word not in stopwords
            ]
            if not pairs:
                continue
            word, _ = min(pairs, key=lambda p: (m1_index.df(granularity, p[1]), p[1], p[0]))
            hits = search_passages(m1_index, word, granularity=granularity)
            scores = {h.ref.segment: h.score for h in hits}
            assert scores.get(segment_id, 0.0) > 0.0, (granularity, segment_id, word)

    corpus = build_indexes([one_liner(mid, " ".join(
        s if c == 1 else " ".join([s] * c) for s, c in VECS[mid].items()
    )) for mid in ("D1", "D2", "D3")])
    hand_top1 = {
        "zebra": "D2",
        "delta": "D3",
        "gamma": "D3",
        "beta": "D1",  # equal dot product either way; D1 has the smaller norm
        "alpha beta": "D1",
        "gamma delta": "D3",
    }
    for query, expected_top in hand_top1.items():
        hits = search_passages(corpus, query, granularity="meeting")
        assert hits[0].ref.meeting == expected_top, query
        counts = {}
        for term in query.split():
            counts[term] = counts.get(term, 0) + 1
        assert abs(hits[0].score - expected_score(counts, expected_top)) < 1e-9


def test_criterion_6_adjacency_pair_detection(m1):
    """The default pattern table finds all six hand-labeled pairs on the
    tagged fixture and none on an untagged copy."""
    expected = {
        ("propose-accept", "t3", "t6"),
        ("question-answer", "t4", "t5"),
        ("propose-reject", "t7", "t8"),
        ("question-answer", "t9", "t10"),
        ("propose-accept", "t10", "t11"),
        ("propose-accept", "t10", "t12"),
    }
    pairs = detect_adjacency_pairs(m1)
    assert {(p.kind, p.first_turn, p.second_turn) for p in pairs} == expected
    assert len(pairs) == 6

    untagged = replace(
        m1, utterances=tuple(replace(u, da_tags=()) for u in m1.utterances)
    )
    assert detect_adjacency_pairs(untagged) == []


def test_criterion_7_round_trips(m1, tmp_path):
    """Store save/load preserves value identity and XML export, import,
    re-export is byte-identical, on the fixture and random meetings."""
    meetings = [m1]
    meetings += [random_argued_meeting(random.Random(s)) for s in range(10)]
    meetings += [random_noisy_meeting(random.Random(s)) for s in range(10)]
    store = Store(tmp_path)
    for meeting in meetings:
        store.save_meeting(meeting)
        assert store.load_meeting(meeting.id) == meeting
        blob = export_mds_xml(meeting)
        again = import_mds_xml(blob)
        assert again == meeting
        assert export_mds_xml(again) == blob
        assert meeting_from_bytes(canonical_bytes(meeting)) == meeting


def test_criterion_8_cli_pipeline(tmp_path, capsys):
    """Ingest, scripted edits, validate, index, and the objections query
    run end to end from the command line. Budget: under 5 seconds."""
    t0 = time.perf_counter()
    store = ["--store", str(tmp_path / "store")]
    assert main([
        "ingest", str(FIXTURES / "M1.tsv"),
        "--title", "Office move planning",
        "--date", "2025-03-12",
        "--edits", str(FIXTURES / "M1.edits.json"),
    ] + store) == 0
    assert main(["validate", "M1"] + store) == 0
    assert main(["index"] + store) == 0
    capsys.readouterr()
    assert main(["query", 'objections(alternative="P1")'] + store) == 0
    out = capsys.readouterr().out
    episodes = [line.split()[0] for line in out.splitlines()]
    assert episodes == ["M1/e8", "M1/e9"]
    assert time.perf_counter() - t0 < 5.0

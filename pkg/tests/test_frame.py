"""Frames: seriality, the lifted selection, property checkers, enumeration."""

from __future__ import annotations

import itertools
import random

import pytest

from artifact.frame import (
    PROPERTY_IDS,
    Frame,
    FrameFormatError,
    bits,
    check_property,
    enumerate_frames,
    frame_count,
    frame_from_json,
    frame_to_json,
    indices_from_mask,
    mask_from_indices,
    sample_frame,
)

# n=2, B(0)={0}, B(1)={0,1}; selection rows are (E={0}, E={1}, E={0,1}).
DEMO = Frame(2, (1, 3), ((0, 2, 1), (1, 0, 3)))

# Two-state frame separating revision from update: every state believes
# {0,1}; conditioning on the whole space refines to the actual state, but
# conditioning on a proper subset always lands on state 1.
WITNESS = Frame(2, (3, 3), ((2, 2, 1), (2, 2, 2)))


def _set_update(fr: Frame, s: int, event: int) -> set[int]:
    out: set[int] = set()
    for sp in bits(fr.belief[s]):
        out |= set(indices_from_mask(fr.selection[sp][event - 1]))
    return out


def _set_property_holds(fr: Frame, prop_id: str) -> bool:
    """Independent oracle: frozenset arithmetic straight from the
    definitions, quantifiers spelled out with itertools."""
    n = fr.n
    full_set = set(range(n))
    events = [set(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    all_events = [set()] + events

    def u(s, e):
        return _set_update(fr, s, mask_from_indices(sorted(e), n))

    def belief(s):
        return set(indices_from_mask(fr.belief[s]))

    if prop_id == "P_star_2_diamond_1":
        return all(u(s, e) <= e for s in range(n) for e in events)
    if prop_id == "P_diamond_2":
        return all(not belief(s) <= e or u(s, e) == belief(s)
                   for s in range(n) for e in events)
    if prop_id == "P_star_5b_diamond_3b":
        return all(u(s, e) != set() for s in range(n) for e in events)
    if prop_id == "P_star_7_diamond_5":
        return all(not e & f or u(s, e) & f <= u(s, e & f)
                   for s in range(n) for e in events for f in events)
    if prop_id == "P_diamond_6w":
        return all(not (e & f and u(s, e) <= f and u(s, f) <= e) or u(s, e) == u(s, f)
                   for s in range(n) for e in events for f in events)
    if prop_id == "P_diamond_7s":
        return all(u(s, e | f) <= u(s, e) | u(s, f)
                   for s in range(n) for e in events for f in events)
    if prop_id == "P_star_4":
        return all(not (belief(s) & e and belief(s) <= (full_set - e) | f) or u(s, e) <= f
                   for s in range(n) for e in all_events for f in all_events)
    raise ValueError(prop_id)


# -- construction ----------------------------------------------------------

def test_seriality_enforced():
    with pytest.raises(FrameFormatError, match="empty"):
        Frame(2, (0, 3), ((0, 0, 0), (0, 0, 0)))


def test_shape_enforced():
    with pytest.raises(FrameFormatError):
        Frame(2, (1,), ((0, 0, 0), (0, 0, 0)))
    with pytest.raises(FrameFormatError):
        Frame(2, (1, 2), ((0, 0), (0, 0, 0)))
    with pytest.raises(FrameFormatError):
        Frame(2, (1, 5), ((0, 0, 0), (0, 0, 0)))
    with pytest.raises(FrameFormatError):
        Frame(2, (1, 2), ((0, 0, 4), (0, 0, 0)))


def test_update_hand_values():
    assert DEMO.update(0, 0b01) == 0          # selected event may be empty
    assert DEMO.update(0, 0b10) == 0b10
    assert DEMO.update(0, 0b11) == 0b01
    assert DEMO.update(1, 0b01) == 0b01
    assert DEMO.update(1, 0b10) == 0b10
    assert DEMO.update(1, 0b11) == 0b11
    with pytest.raises(ValueError):
        DEMO.update(0, 0)


# -- property checkers ------------------------------------------------------

def test_property_hand_values():
    assert check_property(DEMO, "P_star_2_diamond_1") == (True, None)
    assert check_property(DEMO, "P_diamond_2") == (False, (0, 0b01))
    assert check_property(DEMO, "P_star_5b_diamond_3b") == (False, (0, 0b01))


def test_witness_frame_separates_revision_from_update():
    assert check_property(WITNESS, "P_diamond_2") == (True, None)
    holds, cex = check_property(WITNESS, "P_star_4")
    assert not holds
    assert cex == (0, 0b01, 0b01)


def test_unknown_property_rejected():
    with pytest.raises(ValueError, match="unknown frame property"):
        check_property(DEMO, "P_bogus")


def test_checkers_agree_with_set_oracle_two_states():
    frames = itertools.islice(enumerate_frames(2), 0, 36864, 17)
    for fr in frames:
        for prop_id in PROPERTY_IDS:
            holds, cex = check_property(fr, prop_id)
            assert holds == _set_property_holds(fr, prop_id), (fr, prop_id)
            assert (cex is None) == holds


def test_checkers_agree_with_set_oracle_three_states():
    rng = random.Random(5)
    for _ in range(300):
        fr = sample_frame(3, rng)
        for prop_id in PROPERTY_IDS:
            holds, _ = check_property(fr, prop_id)
            assert holds == _set_property_holds(fr, prop_id), (fr, prop_id)


# -- enumeration and sampling -----------------------------------------------

def test_frame_count_formula():
    assert frame_count(1) == 2
    assert frame_count(2) == 36864
    assert frame_count(3) == 7 ** 3 * 8 ** 21


def test_enumerate_two_states_exhaustive_and_distinct():
    seen = set()
    for fr in enumerate_frames(2):
        seen.add((fr.belief, fr.selection))
    assert len(seen) == 36864


def test_enumerate_refuses_three_states():
    with pytest.raises(ValueError, match="refusing"):
        next(enumerate_frames(3))


def test_property_counts_are_nontrivial():
    count = sum(
        1 for fr in enumerate_frames(2)
        if check_property(fr, "P_star_2_diamond_1")[0])
    assert 0 < count < 36864


def test_sample_frame_deterministic():
    a = sample_frame(3, random.Random(42))
    b = sample_frame(3, random.Random(42))
    c = sample_frame(3, random.Random(43))
    assert a == b
    assert a != c
    assert all(m != 0 for m in a.belief)


# -- serialization ----------------------------------------------------------

def test_json_roundtrip():
    rng = random.Random(9)
    frames = [DEMO, WITNESS] + [sample_frame(3, rng) for _ in range(50)]
    for fr in frames:
        doc = frame_to_json(fr)
        assert frame_from_json(doc) == fr


def test_json_shape():
    doc = frame_to_json(DEMO)
    assert doc["states"] == 2
    assert doc["belief"] == [[0], [0, 1]]
    assert {"s": 0, "event": [0, 1], "value": [0]} in doc["selection"]
    assert all(e["event"] == sorted(e["event"]) for e in doc["selection"])


def test_json_missing_selection_entry():
    doc = frame_to_json(DEMO)
    doc["selection"] = doc["selection"][:-1]
    with pytest.raises(FrameFormatError, match="not total"):
        frame_from_json(doc)


def test_json_rejects_malformed():
    doc = frame_to_json(DEMO)
    doc["selection"].append({"s": 0, "event": [0], "value": [1]})
    with pytest.raises(FrameFormatError, match="duplicate"):
        frame_from_json(doc)

    doc = frame_to_json(DEMO)
    doc["selection"][0] = {"s": 0, "event": [], "value": []}
    with pytest.raises(FrameFormatError, match="empty event"):
        frame_from_json(doc)

    doc = frame_to_json(DEMO)
    doc["belief"][0] = []
    with pytest.raises(FrameFormatError):
        frame_from_json(doc)

    doc = frame_to_json(DEMO)
    doc["belief"][0] = [0, 0]
    with pytest.raises(FrameFormatError, match="duplicate"):
        frame_from_json(doc)

    doc = frame_to_json(DEMO)
    doc["belief"][0] = [2]
    with pytest.raises(FrameFormatError, match="out of range"):
        frame_from_json(doc)

    with pytest.raises(FrameFormatError):
        frame_from_json([1, 2, 3])
    with pytest.raises(FrameFormatError):
        frame_from_json({"states": 2})

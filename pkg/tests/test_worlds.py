import random
from itertools import chain, combinations

import pytest

from artifact.worlds import (
    FamilyFormatError,
    WorldSpace,
    WorldUpdateFamily,
    audit_k7,
    audit_k9,
    check_lemma_k7s,
    check_lemma_k9s,
    enumerate_families,
    family_from_json,
    family_to_json,
    generate_family,
    lift_update,
    theory_of,
    world_space,
)

SP1 = world_space(1)
SP2 = world_space(2)


def ranking_family(space, rankings):
    rows = []
    for rk in rankings:
        row = []
        for e in range(1, space.full + 1):
            row.append(1 << next(w for w in rk if e >> w & 1))
        rows.append(tuple(row))
    return WorldUpdateFamily(space, tuple(rows))


# The per-world bounds hold for this family, yet lifting breaks the
# conditional-expansion bound: worlds 1 and 3 rank the shared refinement
# differently, so the union picks up a world outside lift(K,E)&F.
LIFT_GAP = ranking_family(
    SP2, ((0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 2, 3), (3, 1, 2, 0)))


# --- independent set-based oracle -----------------------------------------

def _events(w_count):
    return [frozenset(c) for r in range(1, w_count + 1)
            for c in combinations(range(w_count), r)]


def _as_sets(fam):
    w_count, full = fam.space.world_count, fam.space.full
    unpack = lambda m: frozenset(i for i in range(w_count) if m >> i & 1)
    return {(w, unpack(e)): unpack(fam.u[w][e - 1])
            for w in range(w_count) for e in range(1, full + 1)}


def oracle_reports(fam):
    w_count = fam.space.world_count
    tbl = _as_sets(fam)
    evs = _events(w_count)
    k7_hyp = all(tbl[w, e | f] <= tbl[w, e] | tbl[w, f]
                 for w in range(w_count) for e in evs for f in evs)
    k9_hyp = all(tbl[w, e & f] <= tbl[w, e] & f
                 for w in range(w_count) for e in evs for f in evs
                 if e & f and tbl[w, e] & f)
    lift = lambda k, e: frozenset(chain.from_iterable(tbl[w, e] for w in k))
    k7_concl = k7_hyp and all(
        lift(k, e | f) <= lift(k, e) | lift(k, f)
        for k in evs for e in evs for f in evs)
    k9_concl = k9_hyp and all(
        lift(k, e & f) <= lift(k, e) & f
        for k in evs for e in evs for f in evs
        if e & f and lift(k, e) & f)
    return (k7_hyp, k7_concl if k7_hyp else None), (k9_hyp, k9_concl if k9_hyp else None)


def violates_lifted_k9s(fam, triple):
    belief, e, f = triple
    bound = lift_update(fam, belief, e) & f
    return e & f != 0 and bound != 0 and lift_update(fam, belief, e & f) & ~bound != 0


# --- space and lift basics -------------------------------------------------

def test_world_space_shape():
    assert SP2.world_count == 4 and SP2.full == 0b1111
    assert SP2.world_valuation(2) == {"p": False, "q": True}
    assert SP2.world_valuation(3) == {"p": True, "q": True}
    with pytest.raises(ValueError, match="1 to 4 atoms"):
        world_space(5)
    with pytest.raises(ValueError, match="1 to 4 atoms"):
        WorldSpace(())
    with pytest.raises(ValueError, match="duplicate"):
        WorldSpace(("p", "p"))
    with pytest.raises(ValueError, match="no world"):
        SP1.world_valuation(2)


def test_lift_examples():
    fam = generate_family(SP2, 9, "none")
    for e in range(1, 16):
        for w in range(4):
            assert lift_update(fam, 1 << w, e) == fam.update(w, e)

    identity = WorldUpdateFamily(
        SP2, tuple(tuple(range(1, 16)) for _ in range(4)))
    for k in range(1, 16):
        for e in range(1, 16):
            assert lift_update(identity, k, e) == e

    rows = [[0] * 15 for _ in range(4)]
    rows[0][0b0110 - 1] = 0b0001
    rows[3][0b0110 - 1] = 0b1000
    two = WorldUpdateFamily(SP2, tuple(tuple(r) for r in rows))
    assert lift_update(two, 0b1001, 0b0110) == 0b1001


def test_lift_and_update_errors():
    fam = generate_family(SP2, 0, "none")
    with pytest.raises(ValueError, match="empty belief-set event"):
        lift_update(fam, 0, 1)
    with pytest.raises(ValueError, match="empty input event"):
        lift_update(fam, 1, 0)
    with pytest.raises(ValueError, match="out of range"):
        lift_update(fam, 0b10000, 1)
    with pytest.raises(ValueError, match="empty input event"):
        fam.update(0, 0)
    with pytest.raises(ValueError, match="out of range"):
        fam.update(4, 1)


def test_lift_is_union_monotone():
    rng = random.Random(2)
    for seed in range(30):
        fam = generate_family(SP2, seed, "none")
        for _ in range(40):
            k1 = rng.randrange(1, 16)
            k2 = rng.randrange(1, 16)
            e = rng.randrange(1, 16)
            assert (lift_update(fam, k1 | k2, e)
                    == lift_update(fam, k1, e) | lift_update(fam, k2, e))


def test_theory_encoding_duality():
    # Intersecting theories unions events; expanding by a proposition
    # intersects events: the closure of Th(K) plus F is Th(K & F).
    for space in (SP1, SP2):
        events = range(space.full + 1)
        for a in events:
            for b in events:
                assert theory_of(space, a | b) == theory_of(space, a) & theory_of(space, b)
        for k in events:
            for f in events:
                generators = set(theory_of(space, k)) | {f}
                meet = space.full
                for p in generators:
                    meet &= p
                closure = frozenset(p for p in events if meet & ~p == 0)
                assert closure == theory_of(space, k & f)
        # bigger theory, smaller event
        assert theory_of(space, space.full) <= theory_of(space, 1)


def test_family_validation_errors():
    with pytest.raises(ValueError, match="world rows"):
        WorldUpdateFamily(SP2, ((0,) * 15,) * 3)
    with pytest.raises(ValueError, match="event entries"):
        WorldUpdateFamily(SP2, ((0,) * 14,) * 4)
    with pytest.raises(ValueError, match="out of range"):
        WorldUpdateFamily(SP2, ((0b10000,) + (0,) * 14,) + ((0,) * 15,) * 3)


# --- audits against the oracle ---------------------------------------------

def test_checkers_match_set_oracle_exhaustively_at_one_atom():
    counts = {"k7_hyp": 0, "k7_hold": 0, "k9_hyp": 0, "k9_viol": 0}
    total = 0
    for fam in enumerate_families(SP1):
        total += 1
        (o7h, o7c), (o9h, o9c) = oracle_reports(fam)
        r7, r9 = check_lemma_k7s(fam), check_lemma_k9s(fam)
        assert (r7.hypothesis_ok, r7.holds) == (o7h, o7c)
        assert (r9.hypothesis_ok, r9.holds) == (o9h, o9c)
        counts["k7_hyp"] += o7h
        counts["k7_hold"] += bool(o7c)
        counts["k9_hyp"] += o9h
        counts["k9_viol"] += o9c is False
    assert total == 4096
    # the union bound always lifts; the conditional-expansion bound does not
    assert counts["k7_hyp"] == counts["k7_hold"] == 2401
    assert counts["k9_hyp"] == 625
    assert counts["k9_viol"] == 264


def test_checkers_match_set_oracle_on_random_two_atom_families():
    for seed in range(25):
        fam = generate_family(SP2, seed, "none")
        (o7h, o7c), (o9h, o9c) = oracle_reports(fam)
        r7, r9 = check_lemma_k7s(fam), check_lemma_k9s(fam)
        assert (r7.hypothesis_ok, r7.holds) == (o7h, o7c)
        assert (r9.hypothesis_ok, r9.holds) == (o9h, o9c)


def test_hypothesis_violations_reported_separately():
    rows = [[0] * 15 for _ in range(4)]
    rows[0][0b0011 - 1] = 0b1000  # u(0, {0,1}) = {3}
    bad7 = WorldUpdateFamily(SP2, tuple(tuple(r) for r in rows))
    r7 = check_lemma_k7s(bad7)
    assert not r7.hypothesis_ok and r7.holds is None and r7.counterexample is None
    w, e, f = r7.hypothesis_counterexample
    assert bad7.update(w, e | f) & ~(bad7.update(w, e) | bad7.update(w, f))

    rows = [[0] * 15 for _ in range(4)]
    rows[0][0b0011 - 1] = 0b0001  # u(0, {0,1}) = {0}
    rows[0][0b0001 - 1] = 0b0010  # u(0, {0}) = {1}, escapes u(0,E) & F
    bad9 = WorldUpdateFamily(SP2, tuple(tuple(r) for r in rows))
    r9 = check_lemma_k9s(bad9)
    assert not r9.hypothesis_ok and r9.holds is None
    w, e, f = r9.hypothesis_counterexample
    bound = bad9.update(w, e) & f
    assert e & f and bound and bad9.update(w, e & f) & ~bound


# --- generators and the lemma sweeps ---------------------------------------

def test_k7_generator_families_satisfy_the_lifted_bound():
    for space, seeds in ((SP1, range(50)), (SP2, range(300))):
        for seed in seeds:
            fam = generate_family(space, seed, "k7")
            assert audit_k7(fam) is None
            report = check_lemma_k7s(fam)
            assert report.hypothesis_ok and report.holds, (space, seed, report)


def test_k9_generator_families_pass_the_per_world_audit():
    for space, seeds in ((SP1, range(50)), (SP2, range(200))):
        for seed in seeds:
            fam = generate_family(space, seed, "k9")
            assert audit_k9(fam) is None
            # ranked choice keeps results inside the input event
            for w in range(space.world_count):
                for e in range(1, space.full + 1):
                    value = fam.update(w, e)
                    assert value and value & ~e == 0 and value & (value - 1) == 0


def test_lifting_breaks_the_conditional_expansion_bound():
    assert audit_k9(LIFT_GAP) is None
    report = check_lemma_k9s(LIFT_GAP)
    assert report.hypothesis_ok and report.violated
    assert violates_lifted_k9s(LIFT_GAP, report.counterexample)
    assert violates_lifted_k9s(LIFT_GAP, (0b1010, 0b1110, 0b1100))


def test_singleton_belief_reduces_lift_to_per_world_bound():
    for seed in range(40):
        fam = generate_family(SP2, seed, "k9")
        for w in range(4):
            for e in range(1, 16):
                for f in range(1, 16):
                    if e & f == 0:
                        continue
                    bound = lift_update(fam, 1 << w, e) & f
                    if bound:
                        assert lift_update(fam, 1 << w, e & f) & ~bound == 0


def test_generator_determinism_and_unknown_constraint():
    for constraint in ("none", "k7", "k9"):
        assert (generate_family(SP2, 77, constraint)
                == generate_family(SP2, 77, constraint))
    assert generate_family(SP2, 1, "none") != generate_family(SP2, 2, "none")
    with pytest.raises(ValueError, match="unknown constraint"):
        generate_family(SP2, 0, "k8")


def test_enumerate_families_scope():
    assert sum(1 for _ in enumerate_families(SP1)) == 4096
    with pytest.raises(ValueError, match="refusing"):
        next(enumerate_families(SP2))


# --- serialization ----------------------------------------------------------

def test_family_json_round_trip():
    for space, constraint in ((SP1, "none"), (SP2, "k9"), (SP2, "none")):
        fam = generate_family(space, 13, constraint)
        data = family_to_json(fam)
        assert data["worlds"] == len(space.atoms)
        assert len(data["u"]) == space.world_count * space.full
        assert family_from_json(data) == fam


def test_family_json_rejects_malformed_documents():
    good = family_to_json(generate_family(SP1, 0, "none"))

    with pytest.raises(FamilyFormatError, match="must be an object"):
        family_from_json([])
    with pytest.raises(FamilyFormatError, match="atom count"):
        family_from_json({"worlds": 0, "u": []})
    with pytest.raises(FamilyFormatError, match="not total"):
        family_from_json({"worlds": 1, "u": good["u"][:-1]})
    with pytest.raises(FamilyFormatError, match="duplicate"):
        family_from_json({"worlds": 1, "u": good["u"] + [good["u"][0]]})
    with pytest.raises(FamilyFormatError, match="non-empty input"):
        family_from_json({"worlds": 1,
                          "u": good["u"] + [{"w": 0, "event": [], "value": []}]})
    with pytest.raises(FamilyFormatError, match="exactly w, event, value"):
        family_from_json({"worlds": 1, "u": [{"w": 0}]})
    with pytest.raises(FamilyFormatError, match="out of range"):
        bad = [dict(e) for e in good["u"]]
        bad[0]["w"] = 9
        family_from_json({"worlds": 1, "u": bad})

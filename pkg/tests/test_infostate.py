import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from predsup.generate import random_instance
from predsup.infostate import (
    InfoState,
    Pattern,
    check_consistent,
    check_structure,
    enumerate_patterns,
    feasible_vectors,
    find_inconsistency,
    format_pattern,
    is_live,
    is_safe,
    one_step_reach,
)
from predsup.prediction import Mark, format_vector, iter_vectors, membership, vec
from predsup.synthesis import NodeCapExceeded, expand, initial_candidates, prune

from conftest import info
from oracles import brute_force_patterns


def sigma_minus(G, *events):
    return G.alphabet - set(events)


@pytest.fixture
def example4(fig1):
    """The pattern of {(5,NYN),(6,NNN)} under Σ whose o1 part is the source."""
    src = info(fig1, **{"5": "NYN", "6": "NNN"})
    ur = info(fig1, **{"5": "NYN", "6": "NNN", "7": "YNY"})
    return Pattern(src, fig1.alphabet, ur, (("o1", src),))


class TestInfoState:
    def test_functional(self):
        with pytest.raises(ValueError, match="two different vectors"):
            InfoState.of([(1, vec("N")), (1, vec("Y"))])

    def test_canonical_order(self):
        a = InfoState.of([(2, vec("N")), (1, vec("Y"))])
        b = InfoState.of({1: vec("Y"), 2: vec("N")})
        assert a == b and hash(a) == hash(b)
        assert a.states() == {1, 2}
        assert a.vector(2) == vec("N")


class TestOneStepReach:
    def test_example4_critical_path(self, fig1, example4):
        got = one_step_reach(fig1, example4, fig1.index("5"))
        assert got == {(fig1.index("7"), vec("YNY"))}

    def test_example4_self_loop(self, fig1, example4):
        got = one_step_reach(fig1, example4, fig1.index("6"))
        assert got == {(fig1.index("6"), vec("NNN"))}

    def test_not_in_ur(self, fig1, example4):
        with pytest.raises(KeyError):
            one_step_reach(fig1, example4, 0)

    def test_blocked_state_is_empty(self, fig1):
        src = info(fig1, **{"0": "N"})
        p = Pattern(src, fig1.uncontrollable, src, ())
        assert one_step_reach(fig1, p, 0) == set()


class TestConsistency:
    def test_example4_consistent(self, fig1, fig1_spec, example4):
        assert check_structure(fig1, example4) is None
        assert check_consistent(fig1, example4, fig1_spec) == (True, None)

    def test_example3_contradiction(self, fig1, fig1_spec):
        # 0 claims Y two steps ahead, which forces state 4 to be critical now
        src = info(fig1, **{"0": "NNY"})
        ur = info(fig1, **{"0": "NNY", "3": "NYN", "4": "YNN"})
        obs = info(fig1, **{"5": "YNN", "6": "NNN"})
        p = Pattern(src, sigma_minus(fig1, "a"), ur, (("o1", obs),))
        assert check_structure(fig1, p) is None
        ok, bad = check_consistent(fig1, p, fig1_spec)
        assert not ok
        assert (bad.state, bad.instant) == (fig1.index("4"), 0)

    def test_all_n_fixpoint(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNN"})
        ur = info(fig1, **{"0": "NNN", "1": "NNN"})
        p = Pattern(src, sigma_minus(fig1, "b", "c"), ur, ())
        assert find_inconsistency(fig1, p, fig1_spec) is None

    def test_structure_defects(self, fig1):
        src = info(fig1, **{"0": "NNN"})
        p = Pattern(src, sigma_minus(fig1, "b", "c"), src, ())
        assert "unobservable reach" in check_structure(fig1, p)
        p = Pattern(src, sigma_minus(fig1, "d"), src, ())
        assert check_structure(fig1, p) == "invalid control decision"


class TestEnumerate:
    def test_example3_empty(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNY"})
        assert enumerate_patterns(fig1, src, sigma_minus(fig1, "a"), fig1_spec) == []
        assert enumerate_patterns(fig1, src, fig1.alphabet, fig1_spec) == []

    def test_example4_literal_count(self, fig1, fig1_spec, example4):
        # only instant-0 marks of observation parts are fixed up front, so the
        # o1 successors keep three free entries: 5'[1], 5'[2], 6'[2]
        got = enumerate_patterns(fig1, example4.source, fig1.alphabet, fig1_spec)
        assert len(got) == 27
        assert [p for p in got if p.obs("o1") == example4.source] == [example4]
        assert all(p.ur_part.vector(fig1.index("7"))[:2] == vec("YN") for p in got)

    def test_example4_unique_with_lookahead(self, fig1, fig1_spec, example4):
        F = feasible_vectors(fig1, fig1_spec)
        assert enumerate_patterns(fig1, example4.source, fig1.alphabet, fig1_spec, F) == [example4]

    def test_disable_b_c(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNN"})
        got = enumerate_patterns(fig1, src, sigma_minus(fig1, "b", "c"), fig1_spec)
        assert len(got) == 1
        assert got[0].ur_part == info(fig1, **{"0": "NNN", "1": "NNN"})
        assert got[0].obs_parts == ()

    def test_root_under_sigma_minus_a(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNN"})
        got = enumerate_patterns(fig1, src, sigma_minus(fig1, "a"), fig1_spec)
        assert len(got) == 81
        F = feasible_vectors(fig1, fig1_spec)
        [p] = enumerate_patterns(fig1, src, sigma_minus(fig1, "a"), fig1_spec, F)
        assert p.ur_part == info(fig1, **{"0": "NNN", "3": "NNU", "4": "NNN"})
        assert p.obs("o1") == info(fig1, **{"5": "NYN", "6": "NNN"})

    def test_non_live_gives_nothing(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNN"})
        assert enumerate_patterns(fig1, src, sigma_minus(fig1, "a", "c"), fig1_spec) == []

    def test_order_is_reproducible(self, fig1, fig1_spec):
        src = info(fig1, **{"0": "NNN"})
        a = enumerate_patterns(fig1, src, sigma_minus(fig1, "a"), fig1_spec)
        b = enumerate_patterns(fig1, src, sigma_minus(fig1, "a"), fig1_spec)
        assert [format_pattern(fig1, p) for p in a] == [format_pattern(fig1, p) for p in b]

    def test_text_dump(self, fig1, example4):
        assert format_pattern(fig1, example4) == (
            "source   {(5,NYN), (6,NNN)}\n"
            "decision Σ\n"
            "ur       {(5,NYN), (6,NNN), (7,YNY)}\n"
            "obs o1   {(5,NYN), (6,NNN)}"
        )


class TestFeasible:
    def test_fig1_values(self, fig1, fig1_spec):
        F = feasible_vectors(fig1, fig1_spec)
        got = {fig1.name(x): sorted(format_vector(v) for v in vs) for x, vs in F.items()}
        assert got["5"] == ["NYN"]
        assert got["6"] == ["NNN"]
        assert got["7"] == ["YNY"]
        assert got["2"] == ["NNU"]
        assert got["3"] == ["NNU", "NNY"]

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 100_000))
    def test_covers_every_surviving_node(self, seed):
        G, spec = random_instance(random.Random(seed), 4, 3, 2)
        F = feasible_vectors(G, spec)
        try:
            pruned = prune(expand(G, spec, node_cap=5_000, lookahead=False))
        except NodeCapExceeded:
            return
        for node in pruned.decision_nodes:
            for x, v in node:
                assert v in F[x]


class TestLiveSafe:
    def test_live(self, fig1):
        assert not is_live(fig1, {0}, sigma_minus(fig1, "a", "c"))
        assert is_live(fig1, {0}, sigma_minus(fig1, "a"))
        assert is_live(fig1, {fig1.index("6")}, fig1.uncontrollable)

    def test_safe(self, fig1, fig1_spec):
        assert not is_safe(info(fig1, **{"5": "NYN"}), fig1_spec)
        assert is_safe(info(fig1, **{"5": "NYN", "6": "NNN"}), fig1_spec)
        assert is_safe(info(fig1, **{"0": "NNN", "7": "NNN"}), fig1_spec)


def _cases(seed, max_states=5, max_horizon=2):
    rng = random.Random(seed)
    G, spec = random_instance(rng, max_states, 3, max_horizon)
    node = rng.choice(initial_candidates(G, spec) or [None])
    return G, spec, node


@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(seed=st.integers(0, 100_000))
def test_enumeration_invariants(seed):
    G, spec, node = _cases(seed)
    if node is None:
        return
    for gamma in G.control_decisions():
        first = enumerate_patterns(G, node, gamma, spec)
        assert first == enumerate_patterns(G, node, gamma, spec)
        for p in first:
            assert check_structure(G, p) is None
            assert check_consistent(G, p, spec) == (True, None)
            assert p.source.issubset(p.ur_part)
            for x, v in p.ur_part:
                assert v[0] is membership({x}, spec.critical)
            for _, part in p.obs_parts:
                for y, w in part:
                    assert w[0] is membership({y}, spec.critical)
        if first:
            assert is_live(G, node, gamma)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_matches_brute_force_up_to_instant_zero(seed):
    G, spec, node = _cases(seed, 4, 1)
    if node is None:
        return
    for gamma in G.control_decisions():
        if not is_live(G, node, gamma):
            continue  # precondition; with H=0 nothing else rules these out
        brute = brute_force_patterns(G, node, gamma, spec, budget=20_000)
        if brute is None:
            continue
        fast = set(enumerate_patterns(G, node, gamma, spec))
        assert fast == {
            p for p in brute
            if all(w[0] is membership({y}, spec.critical) for _, part in p.obs_parts for y, w in part)
        }


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_zero_horizon_at_most_one_pattern(seed):
    G, spec, node = _cases(seed, 5, 0)
    if node is None:
        return
    for gamma in G.control_decisions():
        assert len(enumerate_patterns(G, node, gamma, spec)) <= 1


def test_vector_domain_sizes():
    assert len(list(iter_vectors(2, Mark.N))) == 9

import pytest

from zkadvisor.llm import ChatResponse
from zkadvisor.prompting import (
    ConditionConfig,
    EmphasisLevel,
    ProposalParseFailure,
    ScoredOption,
    TraitPartition,
    build_context_set,
    default_conditions,
    explain,
    option_presets,
    propose,
    render_options,
    validate_option_set,
)

D0 = "The user tends toward caution in stock allocation decisions and prefers to avoid uncertainty."
D1 = "Risk tolerance category: Balanced (attested by program version 1.0.0)"

OPTIONS = validate_option_set(
    [
        ScoredOption("Invest boldly right away.", 2),
        ScoredOption("Invest a little more than before.", 1),
        ScoredOption("Keep the current balance of saving and investing.", 0),
        ScoredOption("Reduce positions and wait.", -1),
        ScoredOption("Sell everything and hold cash.", -2),
    ]
)


@pytest.fixture()
def partition():
    return TraitPartition(d0_text=D0, d1_claims=(D1,))


class ScriptedClient:
    """Fake provider replaying canned outputs."""

    provider_id = "scripted"

    def __init__(self, outputs):
        self.outputs = list(outputs)
        self.requests = []

    def chat(self, request):
        self.requests.append(request)
        return ChatResponse(text=self.outputs.pop(0), provider_id="scripted", latency_ms=0)


class TestContextSet:
    def test_emphasis_matrix(self, partition):
        contexts = build_context_set(partition)
        assert contexts["c0"].emphasis_d0 is EmphasisLevel.NONE
        assert contexts["c0"].emphasis_d1 is EmphasisLevel.NONE
        assert contexts["c1"].emphasis_d0 is EmphasisLevel.STRONG
        assert contexts["c2"].emphasis_d1 is EmphasisLevel.STRONG
        assert contexts["c3"].emphasis_d1 is EmphasisLevel.MODERATE

    def test_empty_partition_gives_bare_baseline(self):
        contexts = build_context_set(TraitPartition(d0_text=""))
        baseline = contexts["c0"].rendered_text
        assert contexts["c1"].rendered_text.replace("c1", "c0").replace("strong", "none") == baseline

    def test_determinism(self, partition):
        a = build_context_set(partition)
        b = build_context_set(partition)
        assert {k: c.rendered_text for k, c in a.items()} == {
            k: c.rendered_text for k, c in b.items()
        }

    def test_context_isolation(self, partition):
        contexts = build_context_set(partition)
        assert D0 in contexts["c1"].rendered_text
        assert D1 not in contexts["c1"].rendered_text
        assert D1 in contexts["c2"].rendered_text
        assert D0 not in contexts["c2"].rendered_text
        assert D0 not in contexts["c0"].rendered_text
        assert D1 not in contexts["c0"].rendered_text

    def test_c2_states_verification(self, partition):
        assert "zero-knowledge proof" in build_context_set(partition)["c2"].rendered_text

    def test_marker_line_present(self, partition):
        assert "%% context id=c3 d0=none d1=moderate" in build_context_set(partition)["c3"].rendered_text


class TestConditions:
    def test_default_set(self):
        conditions = default_conditions()
        assert set(conditions) == {"Cond0", "Cond1", "Cond2", "Cond3", "Cond4"}
        for name in ("Cond0", "Cond1", "Cond2", "Cond3"):
            assert conditions[name].c_prop == conditions[name].c_exp
        assert conditions["Cond4"] == ConditionConfig("Cond4", "c3", "c1")


class TestPropose:
    def test_verbatim_selection_with_stub(self, stub, partition):
        contexts = build_context_set(partition)
        proposal = propose(stub, "What should the user do?", contexts["c2"], OPTIONS, seed=7)
        assert proposal.selected in OPTIONS
        assert proposal.retries_used == 0

    def test_parse_failure_after_retries(self, partition):
        client = ScriptedClient(["banana"] * 4)
        contexts = build_context_set(partition)
        with pytest.raises(ProposalParseFailure) as excinfo:
            propose(client, "Q?", contexts["c0"], OPTIONS)
        assert excinfo.value.raw_outputs == ["banana"] * 4
        assert len(client.requests) == 4
        assert "single digit" in client.requests[-1].user_text

    def test_recovers_on_retry(self, partition):
        client = ScriptedClient(["no idea", "I pick 4"])
        contexts = build_context_set(partition)
        proposal = propose(client, "Q?", contexts["c0"], OPTIONS)
        assert proposal.selected == OPTIONS[3]
        assert proposal.retries_used == 1

    @pytest.mark.parametrize(
        "noise",
        ["Option 2 looks right", "  5  ", "answer: 1.", "I would say 3 because..."],
    )
    def test_adversarial_outputs_still_map_verbatim(self, noise, partition):
        client = ScriptedClient([noise])
        contexts = build_context_set(partition)
        proposal = propose(client, "Q?", contexts["c0"], OPTIONS)
        assert proposal.selected.text in {o.text for o in OPTIONS}

    def test_option_set_must_cover_scores(self):
        with pytest.raises(ValueError):
            validate_option_set([ScoredOption("a", 2)] * 5)

    def test_rendered_options_have_stable_indices(self):
        rendered = render_options(OPTIONS)
        assert rendered.splitlines()[0].startswith("1. [+2]")
        assert rendered.splitlines()[4].startswith("5. [-2]")


class TestExplain:
    def test_explanation_contains_option_tokens(self, stub, partition):
        contexts = build_context_set(partition)
        proposal = propose(stub, "Q?", contexts["c0"], OPTIONS, seed=1)
        explanation = explain(stub, "Q?", proposal, contexts["c0"], seed=1)
        assert proposal.selected.text in explanation.text

    def test_c1_explanation_echoes_d0_not_d1(self, stub, partition):
        contexts = build_context_set(partition)
        proposal = propose(stub, "Q?", contexts["c1"], OPTIONS, seed=1)
        explanation = explain(stub, "Q?", proposal, contexts["c1"], seed=1)
        assert D0 in explanation.text
        assert D1 not in explanation.text

    def test_cond4_pipeline_runs_with_differing_contexts(self, stub, partition):
        contexts = build_context_set(partition)
        proposal = propose(stub, "Q?", contexts["c3"], OPTIONS, seed=1)
        explanation = explain(stub, "Q?", proposal, contexts["c1"], seed=1)
        assert explanation.text

    def test_empty_output_rejected(self, partition):
        client = ScriptedClient(["3", "   "])
        contexts = build_context_set(partition)
        proposal = propose(client, "Q?", contexts["c0"], OPTIONS)
        from zkadvisor.prompting import EmptyModelOutput

        with pytest.raises(EmptyModelOutput):
            explain(client, "Q?", proposal, contexts["c0"])


class TestPresets:
    def test_healthcare_preset_covers_scores(self):
        presets = option_presets()
        scores = {o.score for o in presets["healthcare-headache"]}
        assert scores == {-2, -1, 0, 1, 2}

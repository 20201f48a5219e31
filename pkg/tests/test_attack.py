import pytest

from vertbench.attack import attack
from vertbench.core import AttackConfig, Document, InvalidInputError, tokenize
from vertbench.gateway import LexiconModel, QueryLedger, lexicon_handle


@pytest.fixture()
def config():
    return AttackConfig(width=10, chaff_p=0.0, max_queries=5000, max_seconds=60.0, rng_seed=1)


class TestAttackFlow:
    def test_single_iteration_flip(self, sentiment_model, config):
        doc = tokenize("a good movie", gold_label="pos")
        outcome, trace = attack(doc, lexicon_handle(sentiment_model), config)
        assert outcome.success
        assert outcome.selected == {1}
        assert outcome.perturbed_fraction == pytest.approx(1 / 3)
        assert len(trace.iterations) == 1
        assert trace.anchor_label == "pos"
        assert trace.iterations[0].verdict_after_transform.label == "neg"
        # queries: pristine + 3 removals + 1 candidate check
        assert outcome.queries_used == 5

    def test_initially_misclassified_not_attacked(self, sentiment_model, config):
        doc = tokenize("a bland movie", gold_label="pos")  # classifier says neg
        outcome, trace = attack(doc, lexicon_handle(sentiment_model), config)
        assert not outcome.success
        assert trace.gold_mismatch
        assert outcome.queries_used == 1
        assert outcome.perturbed_text == doc.raw
        assert outcome.selected == frozenset()

    def test_budget_exhaustion_keeps_original_text(self, sentiment_model):
        doc = tokenize("a good movie and some words", gold_label="pos")
        cfg = AttackConfig(max_queries=1)
        outcome, trace = attack(doc, lexicon_handle(sentiment_model), cfg)
        assert not outcome.success
        assert outcome.perturbed_text == doc.raw
        assert trace.iterations == ()

    def test_candidate_exhaustion_fails_pure(self, zero_model, config):
        doc = tokenize("w0 w1 w2")
        outcome, trace = attack(doc, lexicon_handle(zero_model), config)
        assert not outcome.success
        assert outcome.perturbed_text == doc.raw
        assert outcome.selected == frozenset()
        assert len(trace.iterations) == 3
        selected_order = [it.selected_index for it in trace.iterations]
        assert selected_order == [0, 1, 2]

    def test_no_attackable_words_rejected(self, sentiment_model, config):
        doc = Document(raw="a b", words=("a", "b"), attackable=(False, False))
        with pytest.raises(InvalidInputError):
            attack(doc, lexicon_handle(sentiment_model), config)

    def test_monotone_selected_set(self, config):
        model = LexiconModel(
            labels=("pos", "neg"),
            weights={"nice": (1.0, 0.0), "fine": (1.0, 0.0), "darn": (0.0, 2.5)},
            bias=(0.0, 0.0),
        )
        doc = tokenize("nice fine darn", gold_label="pos")
        outcome, trace = attack(doc, lexicon_handle(model), config)
        seen = set()
        for record in trace.iterations:
            assert record.selected_index not in seen
            assert doc.attackable[record.selected_index]
            seen.add(record.selected_index)
        assert len(seen) == len(trace.iterations) <= sum(doc.attackable)

    def test_beat_gold_criterion(self, config, sentiment_model):
        # prediction "neg" == gold "neg": flip_prediction would have to move
        # the label, but beat_gold also needs it to move off gold here
        model = LexiconModel(labels=("pos", "neg"),
                             weights={"good": (2.0, 0.0), "awful": (0.0, 3.0)},
                             bias=(0.0, 0.0))
        doc = tokenize("good awful", gold_label="neg")
        cfg = AttackConfig(success_criterion="beat_gold")
        outcome, trace = attack(doc, lexicon_handle(model), cfg)
        assert outcome.success
        # verticalizing "awful" leaves "good" -> pos, which beats gold
        assert outcome.selected == {1}

    def test_beat_gold_requires_gold(self, sentiment_model):
        doc = tokenize("a good movie")
        with pytest.raises(InvalidInputError):
            attack(doc, lexicon_handle(sentiment_model), AttackConfig(success_criterion="beat_gold"))

    def test_determinism_with_chaff(self, sentiment_model):
        doc = tokenize("a good movie friend", gold_label="pos")
        cfg = AttackConfig(chaff_p=0.5, rng_seed=99)
        out1, _ = attack(doc, lexicon_handle(sentiment_model), cfg)
        out2, _ = attack(doc, lexicon_handle(sentiment_model), cfg)
        deterministic = lambda o: (o.success, o.perturbed_text, o.selected, o.queries_used)
        assert deterministic(out1) == deterministic(out2)
        out3, _ = attack(doc, lexicon_handle(sentiment_model), AttackConfig(chaff_p=0.5, rng_seed=100))
        assert out1.perturbed_text != out3.perturbed_text

    def test_failure_outcome_invariants(self, zero_model, config):
        doc = tokenize("alpha beta gamma delta")
        outcome, _ = attack(doc, lexicon_handle(zero_model), config)
        assert not outcome.success
        assert outcome.perturbed_fraction == 0.0
        assert outcome.perturbed_text == "alpha beta gamma delta"


def test_gateway_error_carries_partial_trace(stub_server):
    from vertbench.gateway import GatewayError, remote_handle
    doc = tokenize("a good movie and more words", gold_label="pos")
    stub_server.fail_after = 4  # pristine + a few selection probes, then 500s
    with pytest.raises(GatewayError) as err:
        attack(doc, remote_handle(stub_server.endpoint), AttackConfig())
    trace = err.value.partial_trace
    assert trace.anchor_label == "pos"
    assert trace.original_verdict.label == "pos"


class TestQueryAccounting:
    def test_closed_form_for_full_exhaustion(self, zero_model, config):
        words = " ".join(f"w{i}" for i in range(10))
        doc = tokenize(words)
        ledger = QueryLedger()
        outcome, trace = attack(doc, lexicon_handle(zero_model), config, ledger=ledger)
        assert not outcome.success
        k = len(trace.iterations)
        assert k == 10
        closed_form = 1 + sum((10 - (t - 1)) + 1 for t in range(1, k + 1))
        assert closed_form == 66
        assert ledger.count == closed_form - ledger.hits
        assert outcome.queries_used == ledger.count

    def test_closed_form_under_query_budget(self, zero_model):
        doc = tokenize(" ".join(f"w{i}" for i in range(10)))
        ledger = QueryLedger()
        cfg = AttackConfig(max_queries=15)
        outcome, trace = attack(doc, lexicon_handle(zero_model), cfg, ledger=ledger)
        assert not outcome.success
        k = len(trace.iterations)
        assert 0 < k < 10
        closed_form = 1 + sum((10 - (t - 1)) + 1 for t in range(1, k + 1))
        assert ledger.count == closed_form - ledger.hits

    def test_pair_document_extra_baseline_query(self, sentiment_model, config):
        # raw has a newline, so the single-space baseline costs one more query
        from vertbench.core import make_pair_document
        doc = make_pair_document("it was", "a good movie", gold_label="pos")
        ledger = QueryLedger()
        outcome, _ = attack(doc, lexicon_handle(sentiment_model), config, ledger=ledger)
        assert outcome.success
        # pristine + joined baseline + 3 hypothesis removals + 1 candidate
        assert ledger.count + ledger.hits == 6

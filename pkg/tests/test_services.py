import json

import pytest
from fastapi.testclient import TestClient

from zkadvisor.advisor_service import AdvisorConfig, create_app as create_advisor
from zkadvisor.attestation import MockBackend, program_id
from zkadvisor.llm import ChatResponse
from zkadvisor.prover_service import ProverConfig, create_app as create_prover
from zkadvisor.questionnaire import default_spec


@pytest.fixture()
def prover(tmp_path):
    config = ProverConfig(log_path=tmp_path / "issuance.jsonl")
    return TestClient(create_prover(config)), config


@pytest.fixture()
def advisor():
    return TestClient(create_advisor(AdvisorConfig()))


def _prove(client, answers):
    resp = client.post("/v1/infer", content=json.dumps({"answers": answers}))
    assert resp.status_code == 200
    return resp.json()


class TestProverService:
    def test_health(self, prover):
        client, _ = prover
        resp = client.get("/v1/health")
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "ok"
        assert body["backend_id"] == "mock"
        # liveness is side-effect free
        assert client.get("/v1/health").json() == body

    def test_unknown_route(self, prover):
        client, _ = prover
        assert client.get("/v1/nothing").status_code == 404

    def test_spec_endpoint(self, prover):
        client, _ = prover
        doc = client.get("/v1/spec").json()
        assert len(doc["questions"]) == 10

    def test_infer_all_zeros(self, prover):
        client, _ = prover
        doc = _prove(client, [0] * 10)
        assert doc["journal"]["category"] == 0
        assert doc["proof"]["backend_id"] == "mock"

    @pytest.mark.parametrize(
        "body", ['{"answers":[5]}', '{"answers":[0,0,0,0,0,0,0,0,0,9]}', "junk", '{"x":1}']
    )
    def test_bad_profiles_rejected(self, prover, body):
        client, _ = prover
        resp = client.post("/v1/infer", content=body)
        assert resp.status_code == 400
        assert "error" in resp.json()

    def test_backend_missing_gives_503(self, tmp_path):
        client = TestClient(create_prover(ProverConfig(backend=None)))
        resp = client.post("/v1/infer", content=json.dumps({"answers": [0] * 10}))
        assert resp.status_code == 503

    def test_issuance_log_written_without_answers(self, prover):
        client, config = prover
        answers = [2, 1, 0, 2, 1, 0, 2, 1, 0, 2]
        _prove(client, answers)
        lines = config.log_path.read_text().splitlines()
        assert len(lines) == 1
        record = json.loads(lines[0])
        assert set(record) == {"request_id", "journal", "backend_id", "wall_time_ms"}
        assert json.dumps(answers, separators=(",", ":")) not in lines[0]

    def test_every_200_verifies_against_advertised_program(self, prover):
        from zkadvisor.attestation import parse_proof_document, VerificationOutcome

        client, config = prover
        for answers in ([0] * 10, [2] * 10, [1] * 10):
            doc = _prove(client, answers)
            journal, proof = parse_proof_document(doc)
            outcome = config.backend.verify(journal, proof, config.backend.program)
            assert outcome is VerificationOutcome.VALID


class TestVerifyEndpoint:
    def test_honest_pair(self, prover, advisor):
        client, _ = prover
        doc = _prove(client, [2] * 10)
        resp = advisor.post("/v1/verify", json=doc)
        assert resp.json() == {"outcome": "Valid"}

    def test_wrong_program_pin(self, prover):
        client, _ = prover
        doc = _prove(client, [2] * 10)
        pinned = TestClient(create_advisor(AdvisorConfig(pinned=program_id("9.9.9"))))
        assert pinned.post("/v1/verify", json=doc).json() == {"outcome": "ProgramMismatch"}

    def test_tampered_journal(self, prover, advisor):
        client, _ = prover
        doc = _prove(client, [2] * 10)
        doc["journal"]["category"] = 0
        assert advisor.post("/v1/verify", json=doc).json() == {"outcome": "InvalidProof"}

    def test_malformed(self, advisor):
        assert advisor.post("/v1/verify", content="{}").status_code == 400


class TestAdviseEndpoint:
    def test_valid_proof_cond2_uses_verified_claims(self, prover, advisor):
        client, _ = prover
        doc = _prove(client, [2] * 10)
        resp = advisor.post(
            "/v1/advise",
            json={
                "query": "How should I invest this year?",
                "d0_text": "The user is nervous about markets.",
                "journal": doc["journal"],
                "proof": doc["proof"],
                "condition": "Cond2",
                "seed": 7,
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["verification"] == "Valid"
        assert body["contexts_used"] == ["c2", "c2"]
        assert "Aggressive Investment" in body["explanation"]["text"]
        assert body["proposal"]["score"] in (-2, -1, 0, 1, 2)

    def test_tampered_proof_degrades_to_d0_only(self, prover, advisor):
        client, _ = prover
        doc = _prove(client, [2] * 10)
        doc["journal"]["category"] = 1
        resp = advisor.post(
            "/v1/advise",
            json={
                "query": "How should I invest?",
                "d0_text": "The user is nervous about markets.",
                "journal": doc["journal"],
                "proof": doc["proof"],
                "condition": "Cond2",
                "seed": 7,
            },
        )
        body = resp.json()
        assert body["verification"] == "InvalidProof"
        # trust gating: no verified-claim material in the explanation
        assert "verified profile" not in body["explanation"]["text"]
        assert "Steady Growth" not in body["explanation"]["text"]

    def test_no_journal_is_no_claim(self, advisor):
        resp = advisor.post(
            "/v1/advise", json={"query": "What now?", "d0_text": "", "condition": "Cond0"}
        )
        assert resp.status_code == 200
        assert resp.json()["verification"] == "NoClaim"

    def test_journal_without_proof_rejected(self, prover, advisor):
        client, _ = prover
        doc = _prove(client, [0] * 10)
        resp = advisor.post(
            "/v1/advise", json={"query": "Q", "journal": doc["journal"], "condition": "Cond0"}
        )
        assert resp.status_code == 400

    @pytest.mark.parametrize(
        "body",
        [
            "not json",
            json.dumps({"d0_text": "no query"}),
            json.dumps({"query": "q", "condition": "Cond9"}),
            json.dumps({"query": "q", "preset": "no-such-preset"}),
            json.dumps({"query": "q", "options": [{"text": "a", "score": 2}]}),
        ],
    )
    def test_malformed_requests(self, advisor, body):
        assert advisor.post("/v1/advise", content=body).status_code == 400

    def test_provider_failure_maps_to_502(self):
        class DownClient:
            def chat(self, request):
                from zkadvisor.llm import ProviderUnavailable

                raise ProviderUnavailable("down")

        client = TestClient(create_advisor(AdvisorConfig(llm=DownClient())))
        resp = client.post("/v1/advise", json={"query": "Q", "condition": "Cond0"})
        assert resp.status_code == 502

    def test_unparseable_model_maps_to_422(self):
        class BananaClient:
            def chat(self, request):
                return ChatResponse(text="banana", provider_id="x", latency_ms=0)

        client = TestClient(create_advisor(AdvisorConfig(llm=BananaClient())))
        resp = client.post("/v1/advise", json={"query": "Q", "condition": "Cond0"})
        assert resp.status_code == 422
        assert resp.json()["raw_outputs"] == ["banana"] * 4

    def test_explicit_option_set(self, advisor):
        options = [
            {"text": "Go all in.", "score": 2},
            {"text": "Add a little.", "score": 1},
            {"text": "Hold steady.", "score": 0},
            {"text": "Trim back.", "score": -1},
            {"text": "Exit fully.", "score": -2},
        ]
        resp = advisor.post(
            "/v1/advise", json={"query": "Q", "options": options, "condition": "Cond0", "seed": 1}
        )
        assert resp.status_code == 200
        assert resp.json()["proposal"]["text"] in {o["text"] for o in options}

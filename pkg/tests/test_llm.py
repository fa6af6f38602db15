import httpx
import pytest

from zkadvisor.llm import (
    ChatRequest,
    ProviderRejected,
    ProviderUnavailable,
    RemoteChatClient,
    RemoteConfig,
    StubChatClient,
    make_client,
)

PROPOSAL_PROMPT = """%% context id={cid} d0={d0} d1={d1}
Advise the user.
%% task proposal
%% query-begin
What should the user do?
%% query-end
1. [+2] Act boldly now.
2. [+1] Act a bit more.
3. [+0] Keep the balance.
4. [-1] Pull back a little.
5. [-2] Stop entirely.
"""


def _request(cid, d0, d1, seed):
    return ChatRequest(
        system_text=PROPOSAL_PROMPT.format(cid=cid, d0=d0, d1=d1),
        user_text="Reply with the single digit.",
        seed=seed,
    )


SCORE_BY_INDEX = {1: 2, 2: 1, 3: 0, 4: -1, 5: -2}


def _mean_score(stub, cid, d0, d1, n=400):
    total = 0
    for seed in range(n):
        text = stub.chat(_request(cid, d0, d1, seed)).text
        total += SCORE_BY_INDEX[int(text)]
    return total / n


class TestStub:
    def test_determinism_100_calls(self, stub):
        request = _request("c0", "none", "none", seed=7)
        first = stub.chat(request).text
        assert all(stub.chat(request).text == first for _ in range(99))

    def test_proposal_is_an_index(self, stub):
        text = stub.chat(_request("c2", "none", "strong", seed=0)).text
        assert text in {"1", "2", "3", "4", "5"}

    def test_policy_directions(self, stub):
        base = _mean_score(stub, "c0", "none", "none")
        neg = _mean_score(stub, "c1", "strong", "none")
        mod = _mean_score(stub, "c3", "none", "moderate")
        pos = _mean_score(stub, "c2", "none", "strong")
        assert neg < base <= mod <= pos

    def test_c2_prefers_high_score_family(self, stub):
        # strong d1 emphasis should mostly land on the +1/+2 options
        high = sum(
            1
            for seed in range(300)
            if int(stub.chat(_request("c2", "none", "strong", seed)).text) in (1, 2)
        )
        assert high / 300 > 0.7

    def test_unknown_marker_falls_back_to_baseline(self, stub):
        request = _request("cX", "whatever", "odd", seed=3)
        assert stub.chat(request).text in {"1", "2", "3", "4", "5"}

    def test_freeform_prompt(self, stub):
        response = stub.chat(ChatRequest(system_text="hello", user_text="hi"))
        assert response.text


class TestChatRequestValidation:
    def test_empty_text(self):
        with pytest.raises(ValueError):
            ChatRequest(system_text="", user_text="x")

    def test_negative_temperature(self):
        with pytest.raises(ValueError):
            ChatRequest(system_text="a", user_text="b", temperature=-1)

    def test_zero_max_tokens(self):
        with pytest.raises(ValueError):
            ChatRequest(system_text="a", user_text="b", max_tokens=0)


def _remote(handler):
    config = RemoteConfig(base_url="http://llm.test", model="m1")
    transport = httpx.MockTransport(handler)
    return RemoteChatClient(config, client=httpx.Client(transport=transport))


class TestRemote:
    def test_successful_round_trip(self):
        def handler(request):
            body = {"choices": [{"message": {"content": "4"}}]}
            return httpx.Response(200, json=body)

        client = _remote(handler)
        response = client.chat(ChatRequest(system_text="s", user_text="u"))
        assert response.text == "4"
        assert response.provider_id == "remote:m1"

    def test_unreachable_host(self):
        def handler(request):
            raise httpx.ConnectError("connection refused")

        with pytest.raises(ProviderUnavailable):
            _remote(handler).chat(ChatRequest(system_text="s", user_text="u"))

    def test_rejected_request(self):
        def handler(request):
            return httpx.Response(401, text="bad token")

        with pytest.raises(ProviderRejected):
            _remote(handler).chat(ChatRequest(system_text="s", user_text="u"))

    def test_retries_transient_then_succeeds(self):
        calls = {"n": 0}

        def handler(request):
            calls["n"] += 1
            if calls["n"] < 3:
                return httpx.Response(503, text="busy")
            return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

        response = _remote(handler).chat(ChatRequest(system_text="s", user_text="u"))
        assert response.text == "ok"
        assert calls["n"] == 3


class TestFactory:
    def test_stub(self):
        assert isinstance(make_client("stub"), StubChatClient)

    def test_remote_requires_config(self):
        with pytest.raises(ValueError):
            make_client("remote")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            make_client("oracle")

from __future__ import annotations

import hashlib

import pytest
from fastapi.testclient import TestClient

from findialog.augmentation import StateDir, run_round
from findialog.gateway import Cassette, Gateway, GatewayConfig
from findialog.service.app import create_app

from .conftest import small_config


@pytest.fixture
def reviewable_state(ingested_state):
    """State dir advanced to awaiting_review with a real batch."""
    statedir, config = ingested_state
    gateway = Gateway(GatewayConfig(base_url="mock://local"), Cassette(statedir.cassette_path))
    state = run_round(statedir, config, gateway, mode="record")
    assert state.phase == "awaiting_review"
    return statedir


@pytest.fixture
def client(reviewable_state):
    app = create_app(reviewable_state)
    with TestClient(app) as c:
        yield c


def state_digest(statedir: StateDir) -> str:
    h = hashlib.sha256()
    for path in statedir.data_files():
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()


class TestReadEndpoints:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_current_round_shape(self, client):
        body = client.get("/api/rounds/current").json()
        assert body["phase"] == "awaiting_review"
        assert body["round"] == 0
        assert set(body["progress"]) == {"pending", "kept", "removed", "edited"}
        assert body["batch"]["entries"] == body["progress"]["pending"]

    def test_clusters_have_labels_sizes_counts(self, client):
        rows = client.get("/api/clusters").json()
        assert rows, "at least one cluster"
        for row in rows:
            assert set(row) == {"cluster", "theme_label", "size", "entries", "reviewed_count"}
            assert row["reviewed_count"] == 0
            assert row["theme_label"]

    def test_cluster_questions_and_status_filter(self, client):
        cluster = client.get("/api/clusters").json()[0]["cluster"]
        rows = client.get(f"/api/clusters/{cluster}/questions").json()
        assert rows
        assert any(r["is_representative"] for r in rows)
        assert all("revision" in r for r in rows)
        kept_only = client.get(f"/api/clusters/{cluster}/questions?status=kept").json()
        assert kept_only == []

    def test_reads_are_side_effect_free(self, reviewable_state):
        before = state_digest(reviewable_state)
        app = create_app(reviewable_state)
        with TestClient(app) as client:
            client.get("/api/rounds/current")
            client.get("/api/clusters")
            for row in client.get("/api/clusters").json():
                client.get(f"/api/clusters/{row['cluster']}/questions")
        assert state_digest(reviewable_state) == before

    def test_fallback_index_served_without_ui(self, client):
        page = client.get("/")
        assert page.status_code == 200
        assert "review" in page.text


class TestVerdictEndpoint:
    def _first_pending(self, client):
        cluster = client.get("/api/clusters").json()[0]["cluster"]
        return client.get(f"/api/clusters/{cluster}/questions?status=pending").json()[0]

    def test_keep_then_stale_revision_conflicts(self, client):
        card = self._first_pending(client)
        resp = client.post(f"/api/questions/{card['id']}/verdict", json={
            "action": "keep", "reviewer": "alice", "expected_revision": card["revision"]})
        assert resp.status_code == 200
        assert resp.json()["status"] == "kept"
        stale = client.post(f"/api/questions/{card['id']}/verdict", json={
            "action": "remove", "reviewer": "bob", "expected_revision": card["revision"]})
        assert stale.status_code == 409
        assert stale.json()["code"] == "conflict"

    def test_replaying_success_returns_conflict_never_double_applies(self, client):
        card = self._first_pending(client)
        body = {"action": "keep", "reviewer": "alice", "expected_revision": card["revision"]}
        first = client.post(f"/api/questions/{card['id']}/verdict", json=body)
        assert first.status_code == 200
        replay = client.post(f"/api/questions/{card['id']}/verdict", json=body)
        assert replay.status_code == 409
        current = client.get("/api/rounds/current").json()
        assert current["progress"]["kept"] == 1  # applied exactly once

    def test_edit_records_new_text(self, client):
        card = self._first_pending(client)
        resp = client.post(f"/api/questions/{card['id']}/verdict", json={
            "action": "edit", "reviewer": "alice",
            "expected_revision": card["revision"], "new_text": "更准确的问题表述？"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "edited"
        assert body["effective_text"] == "更准确的问题表述？"

    def test_unknown_question_404(self, client):
        resp = client.post("/api/questions/nope/verdict", json={
            "action": "keep", "reviewer": "a", "expected_revision": 0})
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"

    def test_audit_logged_before_response(self, client, reviewable_state):
        card = self._first_pending(client)
        client.post(f"/api/questions/{card['id']}/verdict", json={
            "action": "keep", "reviewer": "alice", "expected_revision": card["revision"]})
        audit = reviewable_state.verdicts_path(0).read_text(encoding="utf-8")
        assert card["id"] in audit


class TestExpertAddAndComplete:
    def test_add_question_becomes_kept(self, client):
        resp = client.post("/api/questions", json={
            "text": "宏观流动性对估值的影响？", "reviewer": "alice", "cluster_hint": 0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["origin"] == "expert_added" and body["status"] == "kept"

    def test_empty_text_rejected(self, client):
        resp = client.post("/api/questions", json={"text": "  ", "reviewer": "alice"})
        assert resp.status_code == 422

    def test_complete_review_gates_on_pending(self, client):
        blocked = client.post("/api/rounds/current/complete-review")
        assert blocked.status_code == 422
        pending_ids = blocked.json()["detail"]["pending_ids"]
        assert pending_ids
        for qid in pending_ids:
            view = None
            for row in client.get("/api/clusters").json():
                cards = client.get(f"/api/clusters/{row['cluster']}/questions?status=pending").json()
                view = next((c for c in cards if c["id"] == qid), None)
                if view:
                    break
            resp = client.post(f"/api/questions/{qid}/verdict", json={
                "action": "keep", "reviewer": "panel", "expected_revision": view["revision"]})
            assert resp.status_code == 200
        done = client.post("/api/rounds/current/complete-review")
        assert done.status_code == 200
        assert done.json()["phase"] == "review_done"
        # mutations now rejected as locked
        after = client.post("/api/questions", json={"text": "x?", "reviewer": "a"})
        assert after.status_code == 423

    def test_phase_persisted_to_state_dir(self, client, reviewable_state):
        blocked = client.post("/api/rounds/current/complete-review")
        for qid in blocked.json()["detail"]["pending_ids"]:
            rows = []
            for row in client.get("/api/clusters").json():
                rows += client.get(f"/api/clusters/{row['cluster']}/questions?status=pending").json()
            view = next(c for c in rows if c["id"] == qid)
            client.post(f"/api/questions/{qid}/verdict", json={
                "action": "keep", "reviewer": "panel", "expected_revision": view["revision"]})
        client.post("/api/rounds/current/complete-review")
        assert reviewable_state.load_state().phase == "review_done"


class TestTokenAuth:
    def test_token_required_when_configured(self, reviewable_state):
        app = create_app(reviewable_state, token="s3cret")
        with TestClient(app) as client:
            assert client.get("/api/rounds/current").status_code == 401
            ok = client.get("/api/rounds/current", headers={"X-Review-Token": "s3cret"})
            assert ok.status_code == 200
            assert client.get("/healthz").status_code == 200  # healthz stays open


class TestServePreflight:
    def test_port_in_use_detected(self, reviewable_state):
        import socket

        from findialog.errors import PortInUse
        from findialog.service.app import serve

        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.bind(("127.0.0.1", 0))
        sock.listen(1)
        port = sock.getsockname()[1]
        try:
            with pytest.raises(PortInUse):
                serve(reviewable_state.root, f"127.0.0.1:{port}")
        finally:
            sock.close()

    def test_bad_bind_address_rejected(self, reviewable_state):
        from findialog.service.app import serve

        with pytest.raises(ValueError):
            serve(reviewable_state.root, "nonsense")

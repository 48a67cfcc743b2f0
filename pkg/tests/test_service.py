import json

import pytest
from fastapi.testclient import TestClient

from syndarin.annotation import AnnotationStore
from syndarin.annotation.service import create_app

from test_annotation import _fixture_batch


@pytest.fixture
def service(tmp_path):
    store = AnnotationStore(tmp_path)
    tasks, records = _fixture_batch()
    store.save_batch(tasks)
    app = create_app(tmp_path)
    return TestClient(app), tasks, records


def _contains_key(payload, key):
    if isinstance(payload, dict):
        return key in payload or any(_contains_key(v, key) for v in payload.values())
    if isinstance(payload, list):
        return any(_contains_key(v, key) for v in payload)
    return False


class TestNextTask:
    def test_serves_tasks_in_order(self, service):
        client, tasks, _ = service
        resp = client.get("/batches/b1/next", params={"annotator": "a1"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["task"]["task_id"] == tasks[0].task_id
        assert body["progress"] == {"done": 0, "total": 10}

    def test_payload_is_blind(self, service):
        client, _, _ = service
        body = client.get("/batches/b1/next", params={"annotator": "a1"}).json()
        assert not _contains_key(body, "hidden_flag")
        assert not _contains_key(body, "correct_index")

    def test_unknown_batch_404(self, service):
        client, _, _ = service
        resp = client.get("/batches/nope/next", params={"annotator": "a1"})
        assert resp.status_code == 404

    def test_completion_returns_null_task(self, service):
        client, tasks, _ = service
        for task in tasks:
            client.post(
                "/annotations",
                json={"task_id": task.task_id, "annotator_id": "solo", "verdict": 0},
            )
        body = client.get("/batches/b1/next", params={"annotator": "solo"}).json()
        assert body["task"] is None
        assert body["progress"] == {"done": 10, "total": 10}


class TestSubmitAnnotation:
    def test_option_verdict_stored(self, service):
        client, tasks, _ = service
        resp = client.post(
            "/annotations",
            json={"task_id": tasks[0].task_id, "annotator_id": "a9", "verdict": 2},
        )
        assert resp.status_code == 201
        stored = resp.json()["stored"]
        assert stored["verdict"] == 2
        assert stored["reasons"] == []
        assert stored["timestamp"]

    def test_multi_reason_unanswerable(self, service):
        client, tasks, _ = service
        resp = client.post(
            "/annotations",
            json={
                "task_id": tasks[0].task_id,
                "annotator_id": "a9",
                "verdict": "unanswerable",
                "reasons": ["BadTranslation", "DateMismatch"],
            },
        )
        assert resp.status_code == 201
        assert sorted(resp.json()["stored"]["reasons"]) == [
            "BadTranslation",
            "DateMismatch",
        ]

    def test_reasons_with_option_verdict_rejected(self, service):
        client, tasks, _ = service
        resp = client.post(
            "/annotations",
            json={
                "task_id": tasks[0].task_id,
                "annotator_id": "a9",
                "verdict": 1,
                "reasons": ["Other"],
            },
        )
        assert resp.status_code == 400

    def test_unanswerable_without_reasons_rejected(self, service):
        client, tasks, _ = service
        resp = client.post(
            "/annotations",
            json={
                "task_id": tasks[0].task_id,
                "annotator_id": "a9",
                "verdict": "unanswerable",
                "reasons": [],
            },
        )
        assert resp.status_code == 400

    def test_unknown_task_404(self, service):
        client, _, _ = service
        resp = client.post(
            "/annotations",
            json={"task_id": "ghost", "annotator_id": "a9", "verdict": 1},
        )
        assert resp.status_code == 404


class TestReport:
    def test_incomplete_batch_409(self, service):
        client, tasks, _ = service
        client.post(
            "/annotations",
            json={"task_id": tasks[0].task_id, "annotator_id": "a1", "verdict": 0},
        )
        resp = client.get("/batches/b1/report")
        assert resp.status_code == 409

    def test_complete_batch_report(self, service):
        client, _, records = service
        for rec in records:
            payload = {
                "task_id": rec.task_id,
                "annotator_id": rec.annotator_id,
                "verdict": rec.verdict,
                "reasons": list(rec.reasons),
            }
            assert client.post("/annotations", json=payload).status_code == 201
        resp = client.get("/batches/b1/report")
        assert resp.status_code == 200
        body = resp.json()
        assert body["kappa"] == pytest.approx(47 / 77, abs=1e-12)
        assert body["flagged_unanswerable_rate"] == pytest.approx(5 / 8)
        assert body["kept_correct_rate"] == pytest.approx(0.75)
        assert list(body["reason_breakdown"]) == ["Filtered", "Unfiltered"]

import pytest
from fastapi.testclient import TestClient

from topicbench.ingest import save_threads
from topicbench.workbench import Workspace, run_pipeline
from topicbench.workbench.api import create_app, load_desirability_words


@pytest.fixture(scope="module")
def client(tmp_path_factory, fixture_threads):
    root = tmp_path_factory.mktemp("api")
    threads_path = root / "threads.json"
    save_threads(fixture_threads, threads_path)
    workspace = Workspace(root / "ws")
    config = {
        "dataset": "fixture",
        "seed": 5,
        "input": {"threads": str(threads_path)},
        "embedder": {"backend": "hashed-projection", "seed": 5},
        "methods": {
            "lda": {"num_topics": 3, "passes": 10},
            "nmf": {"num_topics": 3},
            "embed": {"min_cluster_size": 5},
        },
    }
    manifest = run_pipeline(workspace, config)
    assert manifest["status"] == "completed"
    return TestClient(create_app(workspace))


class TestReadEndpoints:
    def test_datasets_listing(self, client):
        payload = client.get("/datasets").json()
        assert [d["name"] for d in payload] == ["fixture"]
        assert sorted(payload[0]["models"]) == ["embed", "lda", "nmf"]

    def test_models_for_fixture_dataset(self, client):
        models = client.get("/datasets/fixture/models").json()
        assert len(models) == 3
        assert {m["method"] for m in models} == {"lda", "nmf", "embed"}
        assert all(m["id"].startswith("fixture--") for m in models)

    def test_unknown_dataset_404(self, client):
        assert client.get("/datasets/nope/models").status_code == 404

    def test_topics_endpoint(self, client):
        topics = client.get("/models/fixture--lda/topics").json()
        assert len(topics) == 3
        assert all(t["keywords"] for t in topics)

    def test_chord_endpoint_honors_threshold(self, client):
        low = client.get("/models/fixture--lda/chord", params={"threshold": 0.05}).json()
        high = client.get("/models/fixture--lda/chord", params={"threshold": 1.0}).json()
        assert len(low["nodes"]) == 3
        assert high["edges"] == []
        assert low["membership_threshold"] == 0.05

    def test_documents_sample(self, client):
        topics = client.get("/models/fixture--embed/topics").json()
        topic_id = topics[0]["topic_id"]
        docs = client.get(
            f"/models/fixture--embed/topics/{topic_id}/documents", params={"limit": 5}
        ).json()
        assert 1 <= len(docs) <= 5
        assert all(d["text"] for d in docs)

    def test_unknown_topic_404(self, client):
        assert client.get("/models/fixture--lda/topics/999/documents").status_code == 404

    def test_unknown_model_404(self, client):
        assert client.get("/models/fixture--bogus/topics").status_code == 404

    def test_repeated_gets_byte_identical(self, client):
        a = client.get("/models/fixture--nmf/chord").content
        b = client.get("/models/fixture--nmf/chord").content
        assert a == b

    def test_desirability_words_served(self, client):
        words = client.get("/desirability-words").json()
        assert len(words) == 118


class TestRankings:
    def test_round_trip(self, client):
        payload = {
            "dataset": "fixture",
            "reviewer": "p1",
            "ordering": ["embed", "lda", "nmf"],
            "words": {"embed": ["Useful", "Meaningful"], "lda": ["Clear"]},
            "notes": "embedding path groups cleanly",
        }
        post = client.post("/rankings", json=payload)
        assert post.status_code == 201
        listed = client.get("/rankings").json()
        assert len(listed) == 1
        stored = listed[0]
        for key in ("dataset", "reviewer", "ordering", "words", "notes"):
            assert stored[key] == payload[key]

    def test_six_words_rejected(self, client):
        payload = {
            "dataset": "fixture",
            "reviewer": "p2",
            "ordering": ["embed", "lda", "nmf"],
            "words": {"lda": ["Clean", "Clear", "Useful", "Usable", "Fast", "Fresh"]},
        }
        response = client.post("/rankings", json=payload)
        assert response.status_code == 422
        assert "words.lda" in response.json()["detail"]["errors"]
        assert len(client.get("/rankings").json()) == 1  # nothing appended

    def test_bad_ordering_rejected(self, client):
        payload = {
            "dataset": "fixture",
            "reviewer": "p3",
            "ordering": ["lda", "lda", "nmf"],
        }
        response = client.post("/rankings", json=payload)
        assert response.status_code == 422
        assert "ordering" in response.json()["detail"]["errors"]

    def test_word_outside_configured_list_rejected(self, client):
        payload = {
            "dataset": "fixture",
            "reviewer": "p4",
            "ordering": ["embed", "lda", "nmf"],
            "words": {"nmf": ["Blazingly-fast"]},
        }
        response = client.post("/rankings", json=payload)
        assert response.status_code == 422
        assert "words.nmf" in response.json()["detail"]["errors"]


def test_word_list_asset_is_well_formed():
    words = load_desirability_words()
    assert len(words) == len(set(words)) == 118
    assert all(isinstance(w, str) and w for w in words)

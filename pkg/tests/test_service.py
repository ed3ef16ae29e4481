import pytest
from fastapi.testclient import TestClient

from chemsearch.service import create_app

DBT = "C1=CC=C2C(=C1)C3=CC=CC=C3S2"


@pytest.fixture(scope="module")
def client(snapshot):
    return TestClient(create_app(snapshot))


class TestSearchEndpoint:
    def test_multimodal_query(self, client):
        response = client.get("/api/search", params={
            "text": "Burke group",
            "reaction_smarts": "Brc1ccccc1.OB(O)C1=CC2=CC=CC=C2S1>>Cc1ccccc1",
        })
        assert response.status_code == 200
        body = response.json()
        assert body["api_version"] == 1
        assert body["documents"][0]["doc_id"] == "doc1"
        top = body["documents"][0]["results"][0]
        assert top["passage_id"] == "p02"
        assert top["rank"] == 1
        assert len(top["matched_smiles"]) == 3
        assert top["reactions"][0]["reaction_id"] == "rxn1"
        assert top["reactions"][0]["yield_pct"] == 92

    def test_rank_order_is_global(self, client):
        body = client.get("/api/search", params={"smiles": "O"}).json()
        ranks = [r["rank"] for doc in body["documents"] for r in doc["results"]]
        assert sorted(ranks) == list(range(1, len(ranks) + 1))

    def test_invalid_smiles(self, client):
        response = client.get("/api/search", params={"smiles": "C1CC"})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "InvalidSmiles"
        assert "C1CC" in body["message"]

    def test_wrong_separator_count(self, client):
        response = client.get("/api/search", params={"reaction_smarts": "C>C"})
        assert response.status_code == 400
        assert response.json()["code"] == "WrongSeparatorCount"

    def test_empty_query(self, client):
        response = client.get("/api/search")
        assert response.status_code == 400
        assert response.json()["code"] == "EmptyQuery"

    def test_similarity_cards_present(self, client):
        body = client.get("/api/search", params={"smiles": DBT, "k": 5}).json()
        scores = {c["canonical"]: c["score"] for c in body["compounds"]}
        assert any(s == 1.0 for s in scores.values())          # exact hit
        assert any(0.0 < s < 1.0 for s in scores.values())     # derivative

    def test_ids_resolve(self, client):
        body = client.get("/api/search", params={"text": "yield"}).json()
        for doc in body["documents"]:
            assert client.get(f"/api/documents/{doc['doc_id']}/reactions").status_code == 200
            for result in doc["results"]:
                assert client.get(f"/api/passages/{result['passage_id']}").status_code == 200


class TestReactionNavigation:
    def test_fixture_doc_three_reactions(self, client):
        response = client.get("/api/documents/doc2/reactions")
        assert response.status_code == 200
        entries = response.json()
        assert [e["reaction_id"] for e in entries] == ["rxn2", "rxn3", "rxn4"]
        assert [e["page"] for e in entries] == [1, 2, 3]
        assert all("boxes" in e for e in entries)

    def test_unknown_document(self, client):
        response = client.get("/api/documents/doc99/reactions")
        assert response.status_code == 404
        assert response.json()["code"] == "UnknownDocument"


class TestPassageDetail:
    def test_reaction_passage_includes_entities(self, client):
        body = client.get("/api/passages/p02").json()
        assert body["kind"] == "reaction"
        reactants = {e["name"] for e in body["reaction"]["reactants"]}
        assert "bromobenzene" in reactants
        assert body["links"], "passage p02 carries compound links"

    def test_general_passage_has_no_reaction(self, client):
        body = client.get("/api/passages/p08").json()
        assert "reaction" not in body

    def test_unknown_passage(self, client):
        response = client.get("/api/passages/p99")
        assert response.status_code == 404
        assert response.json()["code"] == "UnknownPassage"


class TestStats:
    def test_fixture_counters(self, client):
        assert client.get("/api/stats").json() == {
            "documents": 3,
            "passages_extracted": 12,
            "passages_indexed": 10,
            "unique_compounds": 9,
            "reactions": 5,
        }

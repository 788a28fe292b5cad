import json
import math
import threading
import urllib.error
import urllib.request

import jsonschema
import pytest

from codemap.cli import _load_service_result
from codemap.service import MapService, make_server

import schemas
from conftest import FIXTURE_TREE


class Client:
    def __init__(self, port):
        self.base = f"http://127.0.0.1:{port}"

    def get(self, path):
        try:
            with urllib.request.urlopen(self.base + path) as resp:
                return resp.status, json.loads(resp.read())
        except urllib.error.HTTPError as err:
            return err.code, json.loads(err.read())

    def get_raw(self, path):
        try:
            with urllib.request.urlopen(self.base + path) as resp:
                return resp.status, resp.read(), resp.headers.get("Content-Type", "")
        except urllib.error.HTTPError as err:
            return err.code, err.read(), err.headers.get("Content-Type", "")

    def post(self, path, payload):
        req = urllib.request.Request(
            self.base + path,
            data=json.dumps(payload).encode("utf-8") if payload is not None else b"not json",
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, json.loads(resp.read())
        except urllib.error.HTTPError as err:
            return err.code, json.loads(err.read())


def start_service(model_path):
    result, config = _load_service_result(str(model_path), str(FIXTURE_TREE))
    service = MapService(result, config)
    server = make_server(service, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, Client(server.server_address[1])


@pytest.fixture(scope="module")
def model_file(fixture_build, tmp_path_factory):
    path = tmp_path_factory.mktemp("svc") / "model.json"
    fixture_build.model.save(path)
    return path


@pytest.fixture(scope="module")
def client(model_file):
    server, client = start_service(model_file)
    yield client
    server.shutdown()


class TestReadEndpoints:
    def test_map_contract(self, client):
        status, body = client.get("/api/map")
        assert status == 200
        assert body["formatVersion"] == 1
        jsonschema.validate(body, schemas.MODEL_SCHEMA)

    def test_search_schema_and_markers(self, client):
        status, body = client.get("/api/search?q=settings&mode=plain")
        assert status == 200
        jsonschema.validate(body, schemas.SEARCH_SCHEMA)
        assert len(body["markers"]["markers"]) == len(body["search"]["hits"]) > 0
        for hit, marker in zip(body["search"]["hits"], body["markers"]["markers"]):
            assert marker["magnitude"] == pytest.approx(math.sqrt(hit["count"]))

    def test_search_identifier_mode(self, client):
        status, body = client.get("/api/search?q=getSettingOrDefault&mode=identifier")
        assert status == 200
        assert len(body["search"]["hits"]) == 3

    def test_search_missing_query(self, client):
        status, body = client.get("/api/search")
        assert status == 400
        jsonschema.validate(body, schemas.ERROR_SCHEMA)

    def test_search_bad_mode(self, client):
        status, body = client.get("/api/search?q=x&mode=fuzzy")
        assert status == 400

    def test_callers_schema(self, client):
        status, body = client.get("/api/callers?symbol=getSettingOrDefault")
        assert status == 200
        jsonschema.validate(body, schemas.FLOW_SCHEMA)
        assert body["nodes"], "expected a non-empty flow tree"
        assert body["edges"]

    def test_callers_unknown_symbol(self, client):
        status, body = client.get("/api/callers?symbol=definitelyAbsentSymbol")
        assert status == 200
        jsonschema.validate(body, schemas.FLOW_SCHEMA)
        assert body["nodes"] == []

    def test_file_endpoint(self, client):
        status, body, ctype = client.get_raw("/api/file?path=Settings.java")
        assert status == 200
        assert "text/plain" in ctype
        assert b"class Settings" in body

    @pytest.mark.parametrize(
        "path",
        ["../etc/passwd", "/etc/passwd", "..%2F..%2Fetc%2Fpasswd", "Settings.java/../../x"],
    )
    def test_file_escape_rejected(self, client, path):
        status, body = client.get(f"/api/file?path={path}")
        assert status == 404
        jsonschema.validate(body, schemas.ERROR_SCHEMA)

    def test_unknown_api_endpoint(self, client):
        status, body = client.get("/api/nothing")
        assert status == 404
        jsonschema.validate(body, schemas.ERROR_SCHEMA)

    def test_index_served(self, client):
        status, body, ctype = client.get_raw("/")
        assert status == 200
        assert "text/html" in ctype

    def test_asset_escape_rejected(self, client):
        status, body, _ = client.get_raw("/../pyproject.toml")
        assert status == 404


class TestAnchors:
    @pytest.mark.parametrize(
        "payload",
        [
            [],
            [{"pathPrefix": "", "x": 0.5, "y": 0.5}],
            [{"pathPrefix": "S", "x": 1.5, "y": 0.5}],
            [{"pathPrefix": "S", "x": 0.5}],
            [{"pathPrefix": "S", "x": "mid", "y": 0.5}],
            {"pathPrefix": "S", "x": 0.5, "y": 0.5},
        ],
    )
    def test_malformed_bodies_rejected(self, model_file, payload):
        server, client = start_service(model_file)
        try:
            status, body = client.post("/api/anchors", payload)
            assert status == 400
            jsonschema.validate(body, schemas.ERROR_SCHEMA)
        finally:
            server.shutdown()

    def test_invalid_json_rejected(self, model_file):
        server, client = start_service(model_file)
        try:
            status, body = client.post("/api/anchors", None)  # sends non-JSON bytes
            assert status == 400
        finally:
            server.shutdown()

    def test_anchor_pull_and_republish(self, model_file):
        server, client = start_service(model_file)
        try:
            _, before = client.get("/api/map")
            prefix = "S"
            matching = [f["path"] for f in before["files"] if f["path"].startswith(prefix)]
            assert len(matching) == 3
            target = (0.2, 0.8)
            status, returned = client.post(
                "/api/anchors", [{"pathPrefix": prefix, "x": target[0], "y": target[1]}]
            )
            assert status == 200
            jsonschema.validate(returned, schemas.MODEL_SCHEMA)
            for f in returned["files"]:
                if f["path"] in matching:
                    dist = math.hypot(f["x"] - target[0], f["y"] - target[1])
                    assert dist <= 0.1, f"{f['path']} ended {dist:.3f} from the anchor"
            # The republished model is what reads now observe, atomically.
            _, after = client.get("/api/map")
            assert after == returned
            assert after["meta"].get("anchored") is True
        finally:
            server.shutdown()

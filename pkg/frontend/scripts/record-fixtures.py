"""Record service responses as JSON fixtures for the frontend tests.

Run from the repository root after changing the fixture meeting or the
service. Every file written here is a verbatim HTTP response body, so
the frontend tests exercise exactly what the service sends.
"""
import json
import pathlib
import sys
import tempfile

from fastapi.testclient import TestClient

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[2] / "tests"))

from conftest import FIXTURES, load_m1  # noqa: E402

from ibismeet.canonical import meeting_to_dict  # noqa: E402
from ibismeet.service import create_app  # noqa: E402
from ibismeet.store import Store  # noqa: E402
from ibismeet.transcript import parse_transcript  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    path = OUT / name
    if name.endswith(".json"):
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")
    else:
        path.write_text(payload, "utf-8")
    print(f"wrote {path}")


def main() -> None:
    client = TestClient(create_app(Store(tempfile.mkdtemp())))
    client.put("/meetings/M1", json=meeting_to_dict(load_m1()))
    dump("m1.json", client.get("/meetings/M1").json())
    dump("grammar.mds", client.get("/grammar").text)
    dump("open_issues.json", client.post("/query", json={"query": "open_issues()"}).json())
    dump(
        "parse_error.json",
        client.post("/query", json={"query": 'open_issues(issue=I2)'}).json(),
    )

    bare = parse_transcript(
        (FIXTURES / "M1.tsv").read_text("utf-8"),
        title="Office move planning",
        date="2025-03-12",
    )
    client.put("/meetings/M1", json=meeting_to_dict(bare))
    dump("m1_bare.json", client.get("/meetings/M1").json())
    dump("suggestions_bare.json", client.get("/meetings/M1/suggestions").json())


if __name__ == "__main__":
    main()

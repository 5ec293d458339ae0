import pytest

from provapt import _backend
from provapt.model import ProvDocument

CYCLE_EDGES = [
    ("e1", "a", "wgb"),
    ("e2", "a", "wgb"),
    ("a", "e1", "used"),
    ("a", "e2", "used"),
    ("e1", "ag", "wat"),
    ("e2", "e1", "wdf"),
]
CYCLE_KINDS = {"e1": "Entity", "e2": "Entity", "a": "Activity", "ag": "Agent"}

CYCLE_JSON = """{
 "entity": {"e1": {}, "e2": {}},
 "activity": {"a": {}},
 "agent": {"ag": {}},
 "wasGeneratedBy": {"_:g1": {"prov:entity": "e1", "prov:activity": "a"},
                    "_:g2": {"prov:entity": "e2", "prov:activity": "a"}},
 "used": {"_:u1": {"prov:activity": "a", "prov:entity": "e1"},
          "_:u2": {"prov:activity": "a", "prov:entity": "e2"}},
 "wasAttributedTo": {"_:t1": {"prov:entity": "e1", "prov:agent": "ag"}},
 "wasDerivedFrom": {"_:d1": {"prov:generatedEntity": "e2", "prov:usedEntity": "e1"}}
}"""


def make_cycle():
    return ProvDocument.build(CYCLE_KINDS, CYCLE_EDGES)


@pytest.fixture
def cycle_doc():
    return make_cycle()


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    return request.param


ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {line}")

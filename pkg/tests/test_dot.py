import re

from provapt.aggregate import apt
from provapt.dot import export_dot
from provapt.generators import generate_chain
from provapt.model import ProvDocument


def test_empty_summary():
    assert export_dot(apt(ProvDocument({}), 1)) == 'digraph "summary" {\n}\n'


def test_chain_pen_widths():
    text = export_dot(apt(generate_chain(4), 1))
    nodes = re.findall(r'^  "(t_\d+)" \[', text, re.M)
    widths = re.findall(r"penwidth=([\d.]+)", text)
    assert nodes == ["t_0", "t_1"]
    assert sorted(map(float, widths)) == [3.0, 5.0]
    assert '"t_1" -> "t_1" [label="wdf (2)", penwidth=5.000]' in text


def test_node_size_tracks_weight():
    text = export_dot(apt(generate_chain(4), 1))
    w = dict(re.findall(r'^  "(t_\d+)" \[.*width=([\d.]+)', text, re.M))
    # areas 1:3 means sides 1:sqrt(3)
    assert abs((float(w["t_1"]) / float(w["t_0"])) ** 2 - 3) < 1e-2


def test_labels_and_determinism(cycle_doc):
    text = export_dot(apt(cycle_doc, 4))
    assert "t_0\\nActivity" in text
    assert "wgb(used(wgb(used(Entity))))" in text
    assert text == export_dot(apt(cycle_doc, 4))

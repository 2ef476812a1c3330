from pathlib import Path

import pytest

from app.services.explanation_store import load_explanation, save_explanation
from app.services.render_service import RenderError, render_explanation_file, render_heatmap, score_color

from tests.helpers import make_explanation, make_subsequence

GOLDEN = Path(__file__).parent / "fixtures" / "heatmap_golden.svg"


def test_color_scale_end_points():
    assert score_color(0.0) == "#ffffff"
    assert score_color(1.0) == "#08306b"
    assert score_color(0.5) == "#8498b5"


def test_all_zero_matrix_is_white():
    svg = render_heatmap([[0.0] * 3 for _ in range(7)])
    assert svg.count("<rect") == 21
    assert svg.count('fill="#ffffff"') == 21


def test_single_full_cell():
    importance = [[0.0, 0.0] for _ in range(4)]
    importance[2][1] = 1.0
    svg = render_heatmap(importance, ["hr", "eda"], "x")
    assert svg.count('fill="#08306b"') == 1
    assert ">eda</text>" in svg


def test_rendering_is_deterministic():
    importance = [[0.1 * (t % 3), 0.5] for t in range(12)]
    assert render_heatmap(importance, ["a", "b"], "t") == render_heatmap(importance, ["a", "b"], "t")


def test_ragged_matrix():
    with pytest.raises(RenderError):
        render_heatmap([[0.1, 0.2], [0.3]])


def test_signal_names_must_match():
    with pytest.raises(RenderError):
        render_heatmap([[0.1, 0.2]], ["only"])


def test_title_is_escaped():
    svg = render_heatmap([[0.0]], ["a"], "<x & y>")
    assert "&lt;x &amp; y&gt;" in svg


def test_render_saved_explanation(tmp_path):
    sub = make_subsequence([1], t_prime=2, t_lo=1, t_hi=3)
    explanation = make_explanation("te-1", 6, 2, [sub], salient_signals=[1])
    path = save_explanation(explanation, tmp_path)
    assert load_explanation(path) == explanation

    svg_path = render_explanation_file(path, tmp_path / "te-1.svg")
    svg = svg_path.read_text()
    assert svg.startswith("<svg")
    assert svg.count("<rect") == 12


def test_missing_explanation(tmp_path):
    with pytest.raises(RenderError, match="not found"):
        render_explanation_file(tmp_path / "nope.explanation.json", tmp_path / "out.svg")


def test_malformed_explanation(tmp_path):
    bad = tmp_path / "bad.explanation.json"
    bad.write_text('{"instance_id": "x"}')
    with pytest.raises(RenderError, match="malformed"):
        render_explanation_file(bad, tmp_path / "out.svg")


def test_matches_golden_svg():
    importance = [
        [0.0, 1.0],
        [0.25, 0.75],
        [0.5, 0.5],
        [0.75, 0.25],
        [1.0, 0.0],
        [0.0, 0.0],
    ]
    svg = render_heatmap(importance, ["alpha", "beta"], "golden heatmap")
    assert svg == GOLDEN.read_text(encoding="utf-8")

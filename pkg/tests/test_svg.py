import logging
import re

import pytest

from itsrobust.panel import load_synthetic_panel
from itsrobust.power import PowerGrid, PowerRow, SimConfig
from itsrobust.svg import emit_panel_plots, emit_power_plot, power_svg, series_svg


def fake_grid(n=11):
    rows = tuple(PowerRow(i / 10, min(1, i / 10), min(1, i / 9), i, i) for i in range(n))
    return PowerGrid(rows, SimConfig(effect_sizes=tuple(r.effect for r in rows)))


def test_power_curve_structure():
    svg = power_svg(fake_grid())
    lines = re.findall(r'<polyline points="([^"]+)"', svg)
    assert len(lines) == 2
    assert all(len(pts.split()) == 11 for pts in lines)


def test_power_plot_file(tmp_path):
    paths = emit_power_plot(fake_grid(), tmp_path)
    assert len(paths) == 1 and paths[0].suffix == ".svg"


def test_panel_plots(tmp_path):
    paths = emit_panel_plots(load_synthetic_panel(), tmp_path, 2008)
    assert len(paths) == 12
    assert paths[-1].name == "panel_grid.svg"
    assert paths[-1].read_text().count("<polyline") == 11


def test_intervention_marker():
    ds = load_synthetic_panel()
    svg = series_svg("G01", ds.groups["G01"], 2008)
    assert 'stroke-dasharray="4,3"' in svg


def test_empty(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        assert emit_panel_plots({}, tmp_path / "out") == []
    assert not (tmp_path / "out").exists()
    assert "no groups" in caplog.text


def test_byte_identical(tmp_path):
    a = emit_panel_plots(load_synthetic_panel(), tmp_path / "a", 2008)
    b = emit_panel_plots(load_synthetic_panel(), tmp_path / "b", 2008)
    for x, y in zip(a, b):
        assert x.read_bytes() == y.read_bytes()

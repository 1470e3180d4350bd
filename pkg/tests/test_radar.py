import re

import numpy as np
import pytest

from genmetrics.errors import InputError
from genmetrics.protocol import METRICS, MetricReport, MetricValue, emit_report
from genmetrics.radar import (
    CANVAS,
    emit_radar,
    radar_normalize,
    radar_svg,
    reports_table,
    write_radar_csv,
)


def _report(model, gen, real):
    metrics = {m: MetricValue(gen[i], real[i]) for i, m in enumerate(METRICS)}
    return MetricReport(metrics, {"k": 5}, model=model)


class TestNormalize:
    def test_real_maps_to_one(self):
        values = {"real": {"fid": 3.0, "apd": 1.0}, "a": {"fid": 5.0, "apd": 0.2}, "b": {"fid": 1.0, "apd": 9.0}}
        out = radar_normalize(values)
        assert out["real"] == {"fid": 1.0, "apd": 1.0}

    def test_equal_after_normalization(self):
        values = {"real": {"mms": 2.0, "fid": 2.0}, "a": {"mms": 2.0, "fid": 2.0}, "b": {"mms": 0.0, "fid": 7.0}}
        out = radar_normalize(values)
        assert out["a"] == {"mms": 1.0, "fid": 1.0}

    def test_non_fid_branch(self):
        # normalized gen 0.3, real 0.8 (the extra polygons pin min 0 and max 1)
        values = {"real": {"apd": 0.8}, "g": {"apd": 0.3}, "lo": {"apd": 0.0}, "hi": {"apd": 1.0}}
        assert radar_normalize(values)["g"]["apd"] == pytest.approx(0.5, abs=1e-15)

    def test_fid_branch(self):
        values = {"real": {"fid": 0.4}, "g": {"fid": 0.9}, "lo": {"fid": 0.0}, "hi": {"fid": 1.0}}
        assert radar_normalize(values)["g"]["fid"] == pytest.approx(0.5, abs=1e-15)

    def test_direction(self):
        values = {"real": {"fid": 0.5, "apd": 0.5}, "g": {"fid": 1.0, "apd": 1.0}, "lo": {"fid": 0.0, "apd": 0.0}}
        out = radar_normalize(values)
        # higher APD draws outside the real polygon, higher FID inside it
        assert out["g"]["apd"] == 1.5 and out["g"]["fid"] == 0.5

    def test_degenerate_column(self):
        values = {"real": {"aog": 1.0}, "a": {"aog": 1.0}}
        assert radar_normalize(values)["a"]["aog"] == 1.0

    def test_needs_real_and_a_model(self):
        with pytest.raises(InputError):
            radar_normalize({"a": {"fid": 1.0}, "b": {"fid": 2.0}})
        with pytest.raises(InputError):
            radar_normalize({"real": {"fid": 1.0}})

    def test_real_exactly_one_random(self):
        rng = np.random.default_rng(0)
        values = {name: dict(zip(METRICS, rng.uniform(0, 10, len(METRICS)))) for name in ("real", "a", "b", "c")}
        out = radar_normalize(values)
        assert all(v == 1.0 for v in out["real"].values())


class TestSvg:
    def test_structure(self, tmp_path):
        report = _report("cnn", list(range(1, 11)), list(range(2, 12)))
        emit_radar([report], tmp_path / "c.svg")
        text = (tmp_path / "c.svg").read_text()
        assert text.startswith("<svg") and f'width="{CANVAS}"' in text
        assert len(re.findall(r'<polygon class="(?:model|real)"', text)) == 2
        assert len(re.findall(r'<line class="axis"', text)) == 10
        for metric in METRICS:
            assert f">{metric}</text>" in text

    def test_from_files_and_multiple(self, tmp_path):
        paths = []
        for i in range(3):
            emit_report(_report(f"m{i}", [i + 1.0] * 10, [2.0] * 10), tmp_path / f"r{i}.json")
            paths.append(tmp_path / f"r{i}.json")
        table = emit_radar(paths, tmp_path / "c.svg")
        assert set(table) == {"real", "m0", "m1", "m2"}
        text = (tmp_path / "c.svg").read_text()
        assert len(re.findall(r'<polygon class="model"', text)) == 3

    def test_stable_output(self, tmp_path):
        report = _report("x", list(range(10)), list(range(10, 0, -1)))
        emit_radar([report], tmp_path / "a.svg")
        emit_radar([report], tmp_path / "b.svg")
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

    def test_empty(self, tmp_path):
        with pytest.raises(InputError):
            emit_radar([], tmp_path / "c.svg")

    def test_name_escaping(self):
        values = radar_normalize({"real": {"fid": 1.0}, "a<b": {"fid": 2.0}})
        assert "a&lt;b" in radar_svg(values)

    def test_csv_table(self, tmp_path):
        table = radar_normalize(reports_table([_report("m", [1.0] * 10, [2.0] * 10)]))
        write_radar_csv(table, tmp_path / "t.csv")
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "model," + ",".join(METRICS)
        assert lines[1] == "real," + ",".join(["1"] * 10)


def test_png_figure(tmp_path):
    from genmetrics.plotting import save_radar_figure

    table = radar_normalize(reports_table([_report("m", [1.0] * 10, [2.0] * 10)]))
    save_radar_figure(table, tmp_path / "c.png", title="demo")
    assert (tmp_path / "c.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

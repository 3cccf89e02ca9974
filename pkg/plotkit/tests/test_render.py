import json

import pytest

from plotkit.cli import main as cli_main
from plotkit.readers import (
    InputError,
    read_pool_csv,
    read_replay_csv,
    read_sizing_json,
    read_summary_json,
)
from plotkit.render import FIGURE_KINDS, FigureSpec, render


def kind_inputs(artifacts_dir):
    pools = [
        str(artifacts_dir / "pool_uc7_10x10.csv"),
        str(artifacts_dir / "pool_uc7_20x20.csv"),
    ]
    return {
        "pdf_power": pools,
        "pdf_snr": pools,
        "mean_vs_size": [str(artifacts_dir / "summary_uc7.json")],
        "op_vs_size": [str(artifacts_dir / "summary_uc7.json")],
        "min_size_bars": [str(artifacts_dir / "sizing_uc7.json")],
        "replay_curves": [str(artifacts_dir / "replay_curves.csv")],
    }


class TestAcceptanceSmoke:
    def test_all_six_kinds_render(self, artifacts_dir, tmp_path):
        inputs = kind_inputs(artifacts_dir)
        assert set(inputs) == set(FIGURE_KINDS)
        results = {}
        for kind in FIGURE_KINDS:
            out = tmp_path / f"{kind}.png"
            results[kind] = render(
                FigureSpec(kind=kind, inputs=tuple(inputs[kind]), output=str(out))
            )
            assert out.exists() and out.stat().st_size > 0, kind
        groups = results["min_size_bars"].meta["n_threshold_groups"]
        ok = groups == 4
        print(
            f"[ACCEPTANCE] plotkit-smoke: {'PASS' if ok else 'FAIL'} "
            f"(6 figure kinds rendered; min_size_bars shows {groups} threshold groups)"
        )
        assert ok

    def test_rerender_is_byte_stable(self, artifacts_dir, tmp_path):
        spec_inputs = tuple(kind_inputs(artifacts_dir)["mean_vs_size"])
        first = tmp_path / "a.png"
        second = tmp_path / "b.png"
        render(FigureSpec(kind="mean_vs_size", inputs=spec_inputs, output=str(first)))
        render(FigureSpec(kind="mean_vs_size", inputs=spec_inputs, output=str(second)))
        assert first.read_bytes() == second.read_bytes()

    def test_source_hash_embedded(self, artifacts_dir, tmp_path):
        inputs = tuple(kind_inputs(artifacts_dir)["pdf_snr"])
        result = render(
            FigureSpec(kind="pdf_snr", inputs=inputs, output=str(tmp_path / "x.png"))
        )
        assert len(result.sources) == 2
        assert all("sha256:" in tag for tag in result.sources)


class TestReaders:
    def test_pool_round_trip(self, artifacts_dir):
        pool = read_pool_csv(str(artifacts_dir / "pool_uc7_10x10.csv"))
        assert pool["usecase_id"] == 7
        assert pool["n_v"] == 10
        assert pool["mu_dbm"].size == pool["gamma_db"].size > 0

    def test_summary_shape(self, artifacts_dir):
        summary = read_summary_json(str(artifacts_dir / "summary_uc7.json"))
        assert [s["n_elements"] for s in summary["sizes"]] == [100, 400]

    def test_sizing_entries(self, artifacts_dir):
        sizing = read_sizing_json(str(artifacts_dir / "sizing_uc7.json"))
        assert len(sizing["entries"]) == 4
        assert all(e["status"] in ("ok", "not_achievable") for e in sizing["entries"])

    def test_replay_curves(self, artifacts_dir):
        data = read_replay_csv(str(artifacts_dir / "replay_curves.csv"))
        assert set(data["curves"]) == {"2", "1.785"}
        assert data["distance_m"].size == 141

    def test_unsupported_schema_rejected(self, artifacts_dir, tmp_path):
        payload = json.loads((artifacts_dir / "sizing_uc7.json").read_text())
        payload["schema_version"] = 99
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(payload))
        with pytest.raises(InputError, match="schema_version"):
            read_sizing_json(str(bad))

    def test_kind_mismatch_rejected(self, artifacts_dir):
        with pytest.raises(InputError, match="kind"):
            read_summary_json(str(artifacts_dir / "sizing_uc7.json"))

    def test_empty_summary_rejected(self, tmp_path):
        bad = tmp_path / "empty.json"
        bad.write_text(json.dumps({"schema_version": 1, "kind": "sweep_summary", "sizes": []}))
        with pytest.raises(InputError, match="no per-size"):
            read_summary_json(str(bad))


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(InputError, match="kind"):
            FigureSpec(kind="sparkline", inputs=("x",), output="y.png")

    def test_missing_input(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            FigureSpec(
                kind="pdf_power", inputs=(str(tmp_path / "absent.csv"),),
                output=str(tmp_path / "o.png"),
            )

    def test_no_inputs(self):
        with pytest.raises(InputError, match="input"):
            FigureSpec(kind="pdf_power", inputs=(), output="o.png")


class TestCli:
    def test_renders_via_cli(self, artifacts_dir, tmp_path):
        out = tmp_path / "bars.png"
        rc = cli_main(
            [
                "min_size_bars",
                "--in", str(artifacts_dir / "sizing_uc7.json"),
                "--out", str(out),
            ]
        )
        assert rc == 0
        assert out.stat().st_size > 0

    def test_bad_input_exits_2(self, tmp_path):
        rc = cli_main(
            ["pdf_power", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o.png")]
        )
        assert rc == 2

    def test_bad_kind_exits_2(self, tmp_path, capsys):
        rc = cli_main(["sparkline", "--in", "x", "--out", "y.png"])
        assert rc == 2

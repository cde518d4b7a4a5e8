import csv
import io
import json
import subprocess
import sys

import pytest

from cattaneo.cli import main, parse_config
from cattaneo.config import UsageError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classify_text_and_json():
    code, out, _ = run("classify", "--alpha", "0", "--beta", "1", "--gamma", "0.5", "--m", "1")
    assert code == 0
    assert out == "region=T3 kind=Polynomial order=1/6 wellposed=true\n"
    code, out, _ = run("classify", "--point", "1,1", "--m", "0", "--json")
    d = json.loads(out)
    assert d["region"] == "F14s" and d["verdict"]["order"] == "1"


def test_missing_alpha_is_usage_error():
    code, _, err = run("classify", "--beta", "1")
    assert code == 2
    assert "--alpha" in err


def test_bad_flag_and_domain_errors_exit_2():
    assert run("classify", "--alpha", "0", "--beta", "1", "--bogus")[0] == 2
    assert run("classify", "--alpha", "-1", "--beta", "1", "--gamma", "0.5")[0] == 2
    assert run("spectrum", "--preset", "example1", "--mu-range", "1:2")[0] == 2
    assert run()[0] == 2


def test_parse_config_mu_range_and_overrides():
    cfg = parse_config(["spectrum", "--alpha", "0"], config_text="alpha = 1\nbeta = 1\nmu-range = 1e2:1e8:log:13\n")
    assert cfg.command == "spectrum"
    assert cfg.options["alpha"] == "0"
    assert cfg.options["beta"] == "1"
    assert cfg.options["mu_range"] == "1e2:1e8:log:13"


def test_config_unknown_key_named():
    with pytest.raises(UsageError, match="colour"):
        parse_config(["classify"], config_text="colour = red\n")


def test_config_file_supplies_command(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("command = classify\nalpha = 1/2\nbeta = 0\ngamma = 1/2\njson = yes\n")
    code, out, _ = run("--config", str(path))
    assert code == 0 and json.loads(out)["region"] == "L124"


def test_atlas_grid_csv(tmp_path):
    dest = tmp_path / "grid.csv"
    code, _, err = run("atlas-grid", "--resolution", "3", "--gamma", "1/2", "--csv", str(dest))
    assert code == 0
    text = dest.read_text()
    assert text.splitlines()[0] == "alpha,beta,gamma,label,kind,order_num,order_den"
    labels = {(r["alpha"], r["beta"]): r["label"] for r in rows(text)}
    assert len(labels) == 9
    assert labels[("0.5", "0")] == "L124"
    assert "0 unclassified" in err


def test_spectrum_csv_columns():
    code, out, _ = run("spectrum", "--preset", "example1", "--mu-range", "1e4:1e8:log:3")
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["mu", "root_index", "re", "im", "branch", "pred_re", "pred_im", "err_re", "err_im"]
    assert len(data) == 12
    last = [r for r in data if float(r["mu"]) == 1e8]
    assert max(float(r["err_re"]) for r in last) < 0.05


def test_spectrum_without_table_row_leaves_prediction_blank():
    code, out, _ = run("spectrum", "--point", "0.5,0,0.5", "--sigma", "3", "--mu-range", "1e2:1e2:log:1")
    assert code == 0
    assert all(r["pred_re"] == "" for r in rows(out))


def test_resolvent_csv():
    code, out, err = run("resolvent", "--preset", "example2", "--lambda-range", "1e1:1e2:log:5",
                         "--modes", "n4:200")
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["lambda", "norm", "argmax_mu"]
    assert len(data) == 5
    assert "slope" in err


def test_resolvent_near_singular_exits_1():
    # example1 at mu ~ 1e12 has a critical damping below double-precision resolution
    code, _, err = run("resolvent", "--preset", "example1", "--lambda-range", "1e3:2e3:log:3",
                       "--modes", "list:1e12,1e13")
    assert code == 1
    assert "NearSingularBlock" in err


@pytest.mark.parametrize("quantity,header", [("norm", ["t", "norm", "argmax_mode"]),
                                             ("energy", ["t", "energy", "q_norm"])])
def test_semigroup_csv(quantity, header):
    code, out, _ = run("semigroup", "--preset", "example2", "--t-range", "1:1e3:log:30",
                       "--modes", "n4:50", "--quantity", quantity)
    assert code == 0
    data = rows(out)
    assert list(data[0]) == header and len(data) == 30


def test_preset_list_and_show():
    code, out, _ = run("preset", "list")
    assert code == 0 and len(out.splitlines()) == 6
    code, out, _ = run("preset", "show", "example3", "--json")
    assert json.loads(out)["verdict"]["order"] == "3/2"
    assert run("preset", "show", "nope")[0] == 2


def test_verify_tables_deterministic_and_exit_codes(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run("verify-tables", "--m", "1", "--out", str(a))[0] == 0
    assert run("verify-tables", "--m", "1", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run("verify-tables", "--m", "0", "--no-errata")[0] == 1
    code, out, _ = run("verify-tables", "--m", "0", "--json")
    assert json.loads(out)["total"] == 9


def test_acceptance_subset_json():
    code, out, err = run("acceptance", "--only", "1,4", "--json")
    assert code == 0
    d = json.loads(out)
    assert [c["number"] for c in d["criteria"]] == [1, 4]
    assert "[PASS]  1" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cattaneo", "classify", "--alpha", "1", "--beta", "1",
                           "--m", "0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("region=F14s")

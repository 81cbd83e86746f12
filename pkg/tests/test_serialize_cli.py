import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from csparsify import KaryPredicate, __version__, sparsify_csp
from csparsify.cli import main
from csparsify.errors import FormatError
from csparsify.serialize import (
    dumps,
    instance_from_dict,
    instance_to_dict,
    predicate_from_dict,
    predicate_to_dict,
    read_instance,
    write_json,
)

from conftest import PFIG_SUPPORT, random_instance, random_sparsifiable


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def pfig_file(tmp_path, p_fig):
    return write(tmp_path / "pfig.json", predicate_to_dict(p_fig))


@pytest.fixture
def singleton_file(tmp_path):
    return write(tmp_path / "singleton.json", {"arity": 2, "domains": [2, 2], "support": [[0, 1]]})


# formats

def test_predicate_round_trip(p_fig):
    d = predicate_to_dict(p_fig)
    assert d["support"] == [list(t) for t in PFIG_SUPPORT]
    assert predicate_from_dict(json.loads(dumps(d))) == p_fig


def test_predicate_format_errors():
    good = {"arity": 2, "domains": [2, 2], "support": [[0, 1]]}
    for bad in (
        {**good, "extra": 1},
        {"arity": 2, "domains": [2, 2]},
        {**good, "support": [[0, 1], [0, 1]]},
        {**good, "support": [[0, 2]]},
        {**good, "domains": ["2", 2]},
        {**good, "support": [[0, True]]},
        {**good, "arity": "2"},
        {**good, "arity": 2.0},
        [1, 2],
    ):
        with pytest.raises(FormatError):
            predicate_from_dict(bad)


def test_instance_format_errors(p_fig):
    inst = random_instance(random.Random(1), p_fig, 3, 3)
    d = instance_to_dict(inst)
    with pytest.raises(FormatError):
        instance_from_dict({**d, "comment": "x"})
    bad = json.loads(json.dumps(d))
    bad["constraints"][0]["scope"] = ["v0", "nope"]
    with pytest.raises(FormatError):
        instance_from_dict(bad)
    bad["constraints"][0] = {"scope": ["v0", "v1"], "weight": -1}
    with pytest.raises(FormatError):
        instance_from_dict(bad)


def test_instance_with_predicate_path(tmp_path, pfig_file, p_fig):
    d = instance_to_dict(random_instance(random.Random(2), p_fig, 4, 5))
    d["predicate"] = "pfig.json"
    path = write(tmp_path / "inst.json", d)
    inst, report = read_instance(path)
    assert inst.predicate == p_fig and report is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_write_read_write_is_byte_identical(seed):
    rng = random.Random(seed)
    pred = random_sparsifiable(rng, 3, 3)
    inst = random_instance(rng, pred, 5, 8)
    sub, rep = sparsify_csp(inst, 0.5, seed=seed)
    text = dumps(instance_to_dict(sub, rep))
    again = dumps(instance_to_dict(*instance_from_dict(json.loads(text))))
    assert text == again


def test_floats_keep_full_precision():
    assert json.loads(dumps({"w": 0.1 + 0.2}))["w"] == 0.1 + 0.2


# CLI

def test_classify_pfig(pfig_file, capsys):
    assert main(["classify", pfig_file]) == 0
    assert capsys.readouterr().out.strip() == "SPARSIFIABLE, ell=3"


def test_classify_singleton(singleton_file, capsys):
    assert main(["classify", singleton_file]) == 0
    assert "B={0,1} C={0,1} cell=(0,1)" in capsys.readouterr().out


def test_classify_ternary(tmp_path, capsys):
    path = write(tmp_path / "p.json", {"arity": 3, "domains": [2, 2, 2], "support": [[0, 0, 0], [0, 0, 1]]})
    out_path = str(tmp_path / "out.json")
    assert main(["classify", path, "-o", out_path]) == 0
    assert "2-cube" in capsys.readouterr().out
    assert json.load(open(out_path))["singleton_cubes"] == [2]


def test_sparsify_and_verify(tmp_path, p_fig, capsys):
    inst = random_instance(random.Random(3), p_fig, 5, 10)
    inst_path = str(tmp_path / "inst.json")
    write_json(inst_path, instance_to_dict(inst))
    out1, out2 = str(tmp_path / "s1.json"), str(tmp_path / "s2.json")
    assert main(["sparsify", inst_path, "--epsilon", "0.5", "--seed", "7", "--verify", "-o", out1]) == 0
    assert main(["sparsify", inst_path, "--epsilon", "0.5", "--seed", "7", "-o", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    assert "report" in json.load(open(out1))
    capsys.readouterr()
    assert main(["verify", inst_path, out1, "--epsilon", "0.5"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_truncated_sparsifier(tmp_path, p_fig, capsys):
    inst = random_instance(random.Random(3), p_fig, 5, 10)
    inst_path = str(tmp_path / "inst.json")
    write_json(inst_path, instance_to_dict(inst))
    truncated = instance_to_dict(inst.with_constraints(inst.constraints[:-1]))
    trunc_path = str(tmp_path / "sparse.json")
    write_json(trunc_path, truncated)
    assert main(["verify", inst_path, trunc_path, "--epsilon", "0.1"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("FAIL: assignment v0=")


def test_invalid_inputs_exit_2(tmp_path, singleton_file, capsys):
    assert main(["cover", singleton_file]) == 2
    assert "not sparsifiable" in capsys.readouterr().err
    assert main(["classify", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path / "bad.json", {"arity": 2, "domains": [2, 2], "support": [], "note": 1})
    assert main(["classify", bad]) == 2
    assert "unknown fields" in capsys.readouterr().err


def test_epsilon_checked_before_work(tmp_path, capsys):
    # the instance file does not even exist: epsilon must be rejected first
    assert main(["sparsify", str(tmp_path / "none.json"), "--epsilon", "1.0"]) == 2
    assert "epsilon" in capsys.readouterr().err


def test_cover_output(pfig_file, capsys):
    assert main(["cover", pfig_file]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["ell"] == 3 and len(d["support_graph"]) == 10 and len(d["complement"]) == 6
    assert d["colouring"] == {"left": [0, 1, 1, 2], "right": [2, 0, 1, 1]}


def test_gen_and_lowerbound(tmp_path, singleton_file, capsys):
    grid = str(tmp_path / "grid.json")
    assert main(["gen", "grid", "--pred", singleton_file, "--n", "3", "-o", grid]) == 0
    capsys.readouterr()
    assert main(["lowerbound", grid]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["bound"] == 9 and cert["exact"] is True


def test_gen_cube_and_unused_family(tmp_path, capsys):
    pred = write(tmp_path / "nor.json", predicate_to_dict(KaryPredicate((2, 2, 2), [(0, 0, 0)])))
    cube = str(tmp_path / "cube.json")
    assert main(["gen", "cube", "--pred", pred, "--q", "2", "-o", cube]) == 0
    capsys.readouterr()
    assert main(["lowerbound", cube, "--family", "unused"]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 8


def test_lowerbound_family_file(tmp_path, singleton_file, capsys):
    grid = str(tmp_path / "grid.json")
    main(["gen", "grid", "--pred", singleton_file, "--n", "2", "-o", grid])
    fam = write(tmp_path / "fam.json", [[0, 1, 1, 0], [1, 0, 0, 1]])
    capsys.readouterr()
    assert main(["lowerbound", grid, "--family", fam]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 2


def test_version():
    out = subprocess.run([sys.executable, "-m", "csparsify", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == f"csparsify {__version__}"

import json
import subprocess
import sys

import pytest
from hypothesis import given

import ccdual.cli as cli_module
from ccdual import io
from ccdual.catalog import all_posets, describe, named_algebra, named_poset
from ccdual.certificate import Certificate
from ccdual.chainspace import cc
from ccdual.cli import RunConfig, main, witness_check
from ccdual.errors import ParseError, ValidationError
from ccdual.lattice import chain_lattice, find_lattice_isomorphism, upset_lattice
from ccdual.nerve import nerve
from ccdual.poset import chain_poset, diamond_poset, is_isomorphic
from strategies import posets


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return write


class TestSerialization:
    @given(posets(5))
    def test_poset_round_trip(self, p):
        q = io.poset_from_obj(json.loads(io.dumps(io.poset_to_obj(p))))
        assert q == p

    def test_lattice_round_trip(self):
        for p in all_posets(3):
            h = upset_lattice(p)
            back = io.lattice_from_obj(json.loads(io.dumps(io.lattice_to_obj(h))))
            assert back.meet == h.meet and back.join == h.join and back.impl == h.impl

    def test_lattice_from_poset_key(self):
        h = io.lattice_from_obj({"poset": io.poset_to_obj(chain_poset(2))})
        assert find_lattice_isomorphism(h, chain_lattice(3)) is not None

    def test_chain_space_round_trip(self):
        s = cc(diamond_poset())
        obj = io.chainposet_to_obj(s)
        assert set(obj) >= {"base", "chains", "order"}
        back = io.chainposet_from_obj(json.loads(io.dumps(obj)))
        assert back.masks == s.masks and back.order == s.order

    def test_bad_objects(self):
        with pytest.raises(ParseError):
            io.poset_from_obj([1, 2])
        with pytest.raises(ParseError):
            io.poset_from_obj({"size": 2, "covers": [[0]]})
        with pytest.raises(ParseError):
            io.lattice_from_obj({"size": 1})
        with pytest.raises(ParseError):
            io.chainposet_from_obj({"chains": []})

    def test_read_json_errors(self, files, tmp_path):
        with pytest.raises(ParseError, match="malformed"):
            io.read_json(files("bad.json", "{not json"))
        with pytest.raises(ParseError):
            io.read_json(tmp_path / "missing.json")


class TestDot:
    def test_subscript_labels(self):
        s = cc(chain_poset(2))
        assert io.chain_label(s, 1, subscripts=True) == "{x₀,x₁}"
        assert io.chain_label(s, 1) == "{0,1}"

    def test_nerve_graph_marks_extra_edges(self):
        d = diamond_poset()
        dot = io.chainposet_to_dot(nerve(d), "nerve", compare_with=cc(d))
        assert dot.count("style=dotted") == 9
        assert dot.count("->") == 16
        assert dot.startswith("digraph nerve {")

    def test_stable(self):
        d = diamond_poset()
        assert io.poset_to_dot(d) == io.poset_to_dot(diamond_poset())


class TestNamed:
    def test_posets(self):
        assert is_isomorphic(named_poset("cube-2"), diamond_poset())
        assert named_poset("chain-3").size == 3
        assert named_poset("point").size == 1
        with pytest.raises(ParseError):
            named_poset("torus")

    def test_algebras(self):
        assert named_algebra("threechain").size == 3
        assert named_algebra("boolean-2").size == 4
        assert named_algebra("upsets:d4").size == 6
        with pytest.raises(ParseError):
            named_algebra("free-5")

    def test_describe(self):
        assert describe(chain_poset(0)) == "empty poset"
        assert describe(chain_poset(2)) == "2 points {0<1}"


class TestConfig:
    def test_caps_positive(self):
        with pytest.raises(ValidationError):
            RunConfig(chain_cap=0)

    def test_format(self):
        with pytest.raises(ParseError):
            RunConfig(format="yaml")


class TestCommands:
    def test_dual_of_three_chain(self, capsys, files):
        path = files("c3.json", {"poset": {"size": 2, "covers": [[0, 1]]}})
        code, out = run(capsys, "dual", "--lattice", path)
        assert code == 0
        # points keep the lattice's own indices, and the order reverses
        assert out == "dual poset: 2 elements\n2 points {2<1}\n"

    def test_dual_of_table_lattice(self, capsys, files):
        h = chain_lattice(3)
        path = files("c3.json", {"size": 3, "meet": [list(r) for r in h.meet], "join": [list(r) for r in h.join]})
        code, out = run(capsys, "dual", "--lattice", path)
        assert code == 0 and out.startswith("dual poset: 2 elements")

    def test_dual_of_trivial(self, capsys):
        code, out = run(capsys, "dual", "--lattice", "trivial")
        assert code == 0 and "empty poset" in out

    def test_cycle_rejected(self, capsys, files):
        path = files("cyc.json", {"poset": {"size": 2, "covers": [[0, 1], [1, 0]]}})
        code, out = run(capsys, "dual", "--lattice", path)
        assert code == 2
        assert out.splitlines()[0] == "ERROR validation antisymmetry violated"

    def test_malformed_file(self, capsys, files):
        code, out = run(capsys, "dual", "--lattice", files("x.json", "[1,"))
        assert code == 2 and out.startswith("ERROR parse malformed JSON")

    def test_usage_error(self, capsys):
        code, out = run(capsys, "check", "bogus")
        assert code == 2 and out.startswith("ERROR parse command line")

    def test_dual_of_poset(self, capsys):
        code, out = run(capsys, "dual", "--poset", "chain-2")
        assert code == 0 and out.splitlines() == ["upset algebra: 3 elements; goedel: true", "depth: 2"]

    def test_free_generators(self, capsys):
        code, out = run(capsys, "free", "--generators", "1")
        assert code == 0
        assert out.splitlines()[0] == "dual: 3 elements; algebra: 6 elements"

    def test_free_depth_bounded(self, capsys):
        code, out = run(capsys, "free", "--generators", "2", "--depth", "2")
        assert out.splitlines()[0].startswith("dual: 9 elements")

    def test_free_lattice(self, capsys):
        code, out = run(capsys, "free", "--lattice", "upsets:d4")
        assert code == 0 and out.splitlines()[0] == "dual: 11 elements; algebra: 342 elements"

    def test_resource_error(self, capsys):
        code, out = run(capsys, "free", "--generators", "9")
        assert code == 1
        assert out.splitlines() == ["ERROR resource generators", "cap 3 exceeded (reached 9)"]

    def test_chain_cap_flag(self, capsys):
        code, out = run(capsys, "free", "--generators", "2", "--cap-chains", "5")
        assert code == 1 and out.startswith("ERROR resource chain_cap")

    def test_depth(self, capsys):
        code, out = run(capsys, "depth", "--alg", "threechain", "--alg", "threechain")
        assert code == 0 and out == "formula 3, computed 3\n"

    def test_coproduct(self, capsys):
        code, out = run(capsys, "coproduct", "--alg", "threechain", "--alg", "threechain")
        assert code == 0
        assert out.splitlines() == ["tensor: 6 chains over a product of 4 points", "algebra: 19 elements; depth 3"]

    def test_coproduct_depth_bounded(self, capsys):
        code, out = run(capsys, "coproduct", "--alg", "threechain", "--alg", "threechain", "--depth", "2")
        assert code == 0 and out.startswith("tensor: 4 chains")

    def test_coproduct_precondition(self, capsys):
        code, out = run(capsys, "coproduct", "--alg", "upsets:d4")
        assert code == 1 and out.startswith("ERROR precondition not a Goedel algebra")

    def test_z_iso(self, capsys):
        code, out = run(capsys, "check", "z-iso", "--poset", "d4")
        assert code == 0 and out == "11 ↔ 11, isomorphism verified\n"

    @pytest.mark.parametrize("suite", ["implication", "upsets", "twohead", "box-diamond", "basic"])
    def test_suites_on_diamond(self, capsys, suite):
        code, out = run(capsys, "check", suite, "--poset", "d4")
        assert code == 0 and out.startswith("PASS ")

    def test_depth_suite(self, capsys):
        code, out = run(capsys, "check", "depth", "--seed", "3")
        assert code == 0 and out.startswith("PASS depth: ") and out.endswith(" cases (100 families)\n")

    def test_product_suite(self, capsys):
        code, out = run(capsys, "check", "product", "--poset", "chain-2")
        assert code == 0 and all(line.startswith("PASS") for line in out.splitlines())

    def test_free_suite(self, capsys):
        code, out = run(capsys, "check", "free", "--poset", "chain-2")
        assert code == 0 and out.startswith("PASS free[2 points {0<1}]")

    def test_nerve(self, capsys):
        code, out = run(capsys, "nerve", "--poset", "d4")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "nerve: 11 chains, 16 covers, 9 beyond the chain order"
        assert len(lines) == 10

    def test_nerve_with_checks(self, capsys):
        code, out = run(capsys, "nerve", "--poset", "chain-2", "--check", "z-iso", "--check", "twohead")
        assert code == 0 and "PASS z-iso" in out and "PASS twohead" in out

    def test_failed_check_exit(self, capsys, monkeypatch):
        bad = Certificate("twohead")
        bad.record(False, "forced")
        monkeypatch.setattr(cli_module, "twohead_check", lambda p: bad)
        code, out = run(capsys, "check", "twohead", "--poset", "point")
        assert code == 1 and out.splitlines()[0] == "ERROR check twohead"


class TestOutputFormats:
    def test_structured(self, capsys):
        code, out = run(capsys, "depth", "--alg", "threechain", "--alg", "two", "--format", "structured")
        obj = json.loads(out)
        assert set(obj) == {"command", "inputs", "result", "certificates"}
        assert obj["result"]["formula"] == 2 and obj["certificates"][0]["passed"]

    def test_graph(self, capsys):
        code, out = run(capsys, "nerve", "--poset", "d4", "--format", "graph")
        assert out.startswith("digraph nerve {") and out.count("style=dotted") == 9

    def test_no_graph(self, capsys):
        code, out = run(capsys, "depth", "--alg", "two", "--format", "graph")
        assert code == 1 and out.startswith("ERROR precondition no graph")

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.txt"
        code, out = run(capsys, "free", "--generators", "0", "--output", str(target))
        assert code == 0 and out == ""
        assert target.read_text().startswith("dual: 1 elements; algebra: 2 elements")

    @pytest.mark.parametrize("argv", [
        ["check", "depth", "--seed", "5", "--format", "structured"],
        ["free", "--lattice", "upsets:d4", "--format", "structured"],
        ["nerve", "--poset", "d4", "--format", "graph"],
    ])
    def test_byte_identical(self, argv):
        cmd = [sys.executable, "-m", "ccdual.cli", *argv]
        first = subprocess.run(cmd, capture_output=True, check=True).stdout
        second = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert first == second and first


class TestWitnessHelper:
    def test_two_chains(self):
        cert = witness_check([chain_poset(2), chain_poset(3)])
        assert cert.passed and cert.cases == 2

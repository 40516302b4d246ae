import json

import pytest
from hypothesis import given, strategies as st

from germdet import FieldDesc
from germdet.cli import GermFile, GermFileError, main, parse_germ_file

E6_TEXT = """\
field = Q            # the rationals
source_vars = x1 x2
target_dim = 1
component 1 = x1^3 + x2^4
"""

SURFACE = """\
field = Q
source_vars = x1 x2
target_dim = 3
component 1 = x1
component 2 = x2^2
component 3 = x2^3 + x1^2*x2
filtration = maximal
jet_order = 12
"""


@pytest.fixture
def germ_file(tmp_path):
    def write(text, name="g.germ"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestParsing:
    def test_e6(self):
        g = parse_germ_file(E6_TEXT)
        assert (len(g.source_vars), g.target_dim, g.field.characteristic) == (2, 1, 0)

    @pytest.mark.parametrize("text,code,line", [
        ("field = Fp 4\nsource_vars = x\ntarget_dim = 1\ncomponent 1 = x\n", "E_CHAR", 1),
        ("field = Q\nsource_vars = x1\ntarget_dim = 1\ncomponent 1 = x1 + 1\n", "E_CONSTANT", 4),
        ("field = Q\nsource_vars = x\nflavour = 2\n", "E_UNKNOWN_KEY", 3),
        ("field = Q\nsource_vars = x\ntarget_dim = 2\ncomponent 1 = x\n", "E_ARITY", 3),
        ("field = Q\nsource_vars = x\ntarget_dim = 1\ncomponent 1 = x +\n", "E_POLY", 4),
        ("field = Q\ntarget_dim = 1\n", "E_MISSING", None),
    ])
    def test_errors(self, text, code, line):
        with pytest.raises(GermFileError) as err:
            parse_germ_file(text)
        assert err.value.code == code and err.value.line == line

    def test_filtration_ideal(self):
        g = parse_germ_file(E6_TEXT + "filtration = ideal x1, x2^2\n")
        assert g.filtration == ("x1", "x2^2")

    @given(st.sampled_from([0, 3, 5]), st.integers(1, 3), st.one_of(st.none(), st.integers(4, 20)))
    def test_round_trip(self, char, p, jet):
        g = GermFile(FieldDesc(char), ("x1", "x2"), p,
                     tuple(f"x1^{k + 1} + x2" for k in range(p)), None, jet)
        assert parse_germ_file(g.to_text()) == g


class TestCommands:
    def test_analyze_e6(self, capsys, germ_file):
        code, out = run_json(capsys, ["analyze", germ_file(E6_TEXT)])
        assert code == 0
        assert (out["mu"], out["tau"], out["ann_R"]) == (6, 6, ["x1^2", "x2^3"])
        assert out["criteria"] == []
        assert {"field", "ord_f", "ann_K", "ann_A", "k_finite", "timing"} <= set(out)
        assert set(out["ann_A"]) >= {"ideal", "exact", "certificate"}

    def test_analyze_is_deterministic(self, capsys, germ_file):
        path = germ_file(E6_TEXT)
        outs = []
        for _ in range(2):
            _, out = run_json(capsys, ["analyze", path, "--d", "5", "--group", "R"])
            out.pop("timing")
            outs.append(json.dumps(out, sort_keys=True))
        assert outs[0] == outs[1]

    def test_char_three_mu_infinite(self, capsys, germ_file):
        _, out = run_json(capsys, ["analyze", germ_file(E6_TEXT.replace("Q ", "Fp 3 "))])
        assert out["mu"] == "infinite"

    def test_determinacy_holds(self, capsys, germ_file):
        code, out = run_json(capsys, ["determinacy", germ_file(E6_TEXT), "--group", "R", "--j", "1", "--d", "5"])
        assert code == 0 and out["criteria"][0]["verdict"] == "Holds"
        assert set(out["criteria"][0]) >= {"theorem", "hypotheses", "guard", "verdict", "conclusion"}

    def test_determinacy_fails_exit_code(self, capsys, germ_file):
        code, out = run_json(capsys, ["determinacy", germ_file(E6_TEXT), "--d", "4"])
        assert code == 1

    def test_annihilator_A(self, capsys, germ_file):
        code, out = run_json(capsys, ["annihilator", germ_file(SURFACE), "--group", "A", "--jet", "12"])
        assert out["ann_A"]["ideal"] == ["x1", "x2^2"] and code == 0

    def test_tangent(self, capsys, germ_file):
        _, out = run_json(capsys, ["tangent", germ_file(E6_TEXT), "--group", "R"])
        assert out["T_R"]["codimension"] == 6

    def test_bch(self, capsys):
        code, out = run_json(capsys, ["jet-tools", "bch-integrality", "--L", "6"])
        assert code == 0 and out["bch_integrality"]["passes"]

    def test_lift(self, capsys):
        code, out = run_json(capsys, ["jet-tools", "lift", "--field", "Fp 5", "--J", "x^5 + y^15",
                                      "--xi", "y^2, 0", "--jet", "12"])
        assert code == 1 and out["lift"]["witness"] == "y^10"

    def test_lift_precondition_is_reported(self, capsys):
        code, out = run_json(capsys, ["jet-tools", "lift", "--J", "x^5 + y^15", "--xi", "y^2, 0"])
        assert code == 2 and out["errors"][0]["error"] == "PreconditionError"

    def test_thom_levine(self, capsys, germ_file):
        path = germ_file("field = Q\nsource_vars = x\ntarget_dim = 1\ncomponent 1 = x + x^5\n")
        code, out = run_json(capsys, ["jet-tools", "thom-levine", path, "--xi-x", "x^2", "--xi-y", "y^2",
                                      "--d", "6"])
        assert code == 0 and out["thom_levine"]["linearised"] == ["3*x^6"]

    def test_input_error_exit_code(self, capsys, germ_file):
        assert main(["analyze", germ_file("field = Fp 4\n")]) == 3

    def test_text_output(self, capsys, germ_file, tmp_path):
        out = tmp_path / "r.txt"
        main(["analyze", germ_file(E6_TEXT), "--format", "text", "--out", str(out)])
        assert "mu: 6" in out.read_text(encoding="utf-8")

    def test_verify_examples(self, capsys):
        code, out = run_json(capsys, ["verify-examples"])
        assert code == 0
        assert all(e["pass"] for e in out["examples"]) and len(out["examples"]) >= 10

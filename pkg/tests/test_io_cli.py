import csv
import io
import json

import pytest

from univjac import corpus
from univjac.classify import PicRelElement, act, normal_form
from univjac.cli import EXIT_FAIL, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, main
from univjac.domain import Triple
from univjac.errors import ParseError
from univjac.graph import Graph, is_isomorphic
from univjac.io import condition_from_data, condition_table, dumps, load_condition, load_graph, parse_json
from univjac.stability import UniversalStability

# (3,2) degree 6 table as printed: rows are marking sets, columns (e, h); None is a blank cell
PRINTED_3_2 = {
    "": [None, 0, 1, 2, 3, 4],
    "1": [0, 1, 2, 2, 3, 5],
    "2": [0, 1, 1, 3, 3, 5],
    "12": [1, 1, 2, 3, 4, None],
}
PRINTED_3_2_COLUMNS = [(2, 0), (3, 0), (4, 0), (2, 1), (3, 1), (2, 2)]


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


# --- JSON round trips ------------------------------------------------------------


@pytest.mark.parametrize("name,g", [("ex_2_6", None), ("ex_2_4", None), ("ex_3_2", None), ("ex_g_1", 4), ("ex_g_1", 6)])
def test_builtin_conditions_round_trip_byte_identically(name, g):
    m = corpus.example(name, g)
    text = dumps(m.to_json())
    back = condition_from_data(parse_json(text))
    assert back == m
    assert dumps(back.to_json()) == text


@pytest.mark.parametrize("name,g", [("fig2", None), ("fig3", None), ("fig4", 5)])
def test_builtin_graphs_round_trip(name, g, tmp_path):
    graph = corpus.figure(name, g)
    path = tmp_path / "g.json"
    path.write_text(dumps(graph.to_json()))
    back = load_graph(path)
    assert back == graph
    assert dumps(back.to_json()) == dumps(graph.to_json())


def test_example_command_emits_what_load_reads(tmp_path):
    path = tmp_path / "ex.json"
    assert run("example", "ex_2_4", "--out", str(path))[0] == EXIT_OK
    assert load_condition(path) == corpus.ex_2_4()


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


# --- malformed input ---------------------------------------------------------------


def _ex_json():
    return corpus.ex_2_4().to_json()


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("values"),
        lambda d: d.update(g="two"),
        lambda d: d["values"].append({"e": 9, "h": 0, "A": [1], "m": 0}),
        lambda d: d["values"].append(dict(d["values"][0], m=d["values"][0]["m"] + 1)),
        lambda d: d["values"][0].pop("m"),
    ],
)
def test_malformed_conditions_raise_parse_error(mutate):
    data = _ex_json()
    mutate(data)
    with pytest.raises(ParseError):
        condition_from_data(data)


def test_invalid_json_raises_parse_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(dumps(_ex_json())[:-40])
    with pytest.raises(ParseError):
        load_condition(path)
    assert run("validate", str(path))[0] == EXIT_FAIL


def test_missing_file_raises_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_condition(tmp_path / "nope.json")
    assert run("validate", str(tmp_path / "nope.json"))[0] == EXIT_FAIL


# --- validate ------------------------------------------------------------------------


def test_validate_builtins():
    code, text = run("validate", "ex_2_4")
    assert code == EXIT_OK and text.startswith("valid")
    for g in (4, 5, 6):
        assert run("validate", "ex_g_1", "--g", str(g))[0] == EXIT_OK


def test_validate_reports_violations(tmp_path):
    data = _ex_json()
    # bump one canonical value; the complement law still holds by construction, a decomposition row breaks
    for item in data["values"]:
        if (item["e"], item["h"], item["A"]) == (2, 0, [1]):
            item["m"] += 5
    path = tmp_path / "broken.json"
    path.write_text(dumps(data))
    code, text = run("validate", str(path))
    assert code == EXIT_FAIL
    assert "violation" in text


# --- classical-check -----------------------------------------------------------------


def test_classical_check_2_6_universal_and_fig2():
    code, text = run("classical-check", "ex_2_6", "--expect", "not-classical")
    assert code == EXIT_OK
    assert "not classical" in text and "sum: 0 <" in text
    code, text = run("classical-check", "ex_2_6", "--graph", "fig2", "--json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["classical"] is False
    assert len(data["certificate"]) == 6


def test_classical_check_expectation_mismatch_exits_1():
    assert run("classical-check", "ex_2_6", "--expect", "classical")[0] == EXIT_FAIL


def test_classical_check_type_mismatch_exits_1():
    # fig2 has type (2, 6)
    assert run("classical-check", "ex_2_4", "--graph", "fig2")[0] == EXIT_FAIL


def test_classical_check_graph_file(tmp_path):
    path = tmp_path / "fig3.json"
    path.write_text(dumps(corpus.fig3().to_json()))
    code, text = run("classical-check", "ex_3_2", "--graph", str(path), "--shared-unlabeled", "--expect", "not-classical")
    assert code == EXIT_OK
    code, text = run("classical-check", "ex_3_2", "--graph", str(path), "--expect", "classical")
    assert code == EXIT_OK
    assert "verdict: classical" in text


def test_classical_check_all_trivalent_respects_vertex_limit():
    assert run("classical-check", "ex_2_4", "--all-trivalent", "--limit-vertices", "5")[0] == EXIT_LIMIT


def test_classical_check_all_trivalent_small():
    code, text = run("classical-check", "ex_3_2", "--all-trivalent", "--json", "--expect", "classical")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["graphs"] == 66 and data["all_classical"] is True


# --- census --------------------------------------------------------------------------


def test_census_3_1_all_classical(capsys):
    code, text = run("census", "3", "1", "0")
    assert code == EXIT_OK
    data = json.loads(text)
    assert len(data["entries"]) == 6
    assert all(e["universally_classical"] for e in data["entries"])
    assert "6 entries, 6 universally classical" in capsys.readouterr().err


def test_census_2_3_csv_to_file(tmp_path):
    path = tmp_path / "c.csv"
    code, text = run("census", "2", "3", "--degree", "0", "--format", "csv", "--out", str(path))
    assert code == EXIT_OK
    rows = list(csv.DictReader(path.read_text().splitlines()))
    assert rows and all(r["universally_classical"] == "yes" for r in rows)
    assert "universally classical" in text


def test_census_2_4_contains_a_non_classical_entry():
    code, text = run("census", "2", "4", "0")
    assert code == EXIT_OK
    entries = json.loads(text)["entries"]
    assert any(e["universally_classical"] is False for e in entries)
    nf, _ = normal_form(corpus.ex_2_4())
    assert nf.to_json() in [e["condition"] for e in entries]


def test_census_exit_codes():
    assert run("census", "2", "1", "0", "--min-valence", "1")[0] == EXIT_USAGE
    assert run("census", "4", "1", "0")[0] == EXIT_LIMIT
    assert run("census", "2", "1")[0] == EXIT_USAGE
    assert run("census", "2", "1", "0", "--fibres", "--limit-vertices", "2")[0] == EXIT_LIMIT


# --- normalize / act / graphs / example -------------------------------------------------


def test_normalize_recovers_the_normal_form_of_a_shifted_example(tmp_path):
    m = corpus.ex_2_4()
    shifted = act(PicRelElement((2, -1, 3), -4), m)
    path = tmp_path / "shifted.json"
    path.write_text(dumps(shifted.to_json()))
    code, text = run("normalize", str(path))
    assert code == EXIT_OK
    data = json.loads(text)
    assert UniversalStability.from_json(data["condition"]) == normal_form(m)[0]
    L = PicRelElement.from_json(data["element"])
    assert act(L, shifted) == normal_form(m)[0]


def test_act_command_matches_the_library():
    code, text = run("act", "ex_2_4", "--t", "1,0,-2", "--s", "3")
    assert code == EXIT_OK
    assert UniversalStability.from_json(json.loads(text)) == act(PicRelElement((1, 0, -2), 3), corpus.ex_2_4())
    assert run("act", "ex_2_4", "--t", "1,0")[0] == EXIT_USAGE
    assert run("act", "ex_2_4", "--t", "1,x,0")[0] == EXIT_USAGE


def test_graphs_command():
    code, text = run("graphs", "2", "0", "--trivalent")
    assert code == EXIT_OK and text.startswith("2 trivalent graphs")
    code, text = run("graphs", "2", "0")
    assert text.startswith("7 stable graphs")
    code, text = run("graphs", "2", "1", "--trivalent", "--json")
    graphs = [Graph.from_json(x) for x in json.loads(text)]
    assert len(graphs) == 3
    assert run("graphs", "3", "2", "--limit-vertices", "4")[0] == EXIT_LIMIT


def test_example_3_2_reproduces_the_printed_table():
    code, text = run("example", "ex_3_2", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(text)))
    header = rows[0]
    cells = {}
    for row in rows[1:]:
        e, h = map(int, row[0].split(","))
        for label, value in zip(header[1:], row[1:]):
            marks = "".join(label.strip("{}").split(","))
            cells[(e, h, marks)] = int(value) if value else None
    expected = {
        (e, h, marks): v
        for marks, row in PRINTED_3_2.items()
        for (e, h), v in zip(PRINTED_3_2_COLUMNS, row)
    }
    assert cells == expected
    m = corpus.ex_3_2()
    assert m.d == 6
    assert condition_table(m) == text


def test_example_graph_and_usage_errors():
    code, text = run("example", "fig4", "--g", "5")
    assert code == EXIT_OK
    assert is_isomorphic(Graph.from_json(json.loads(text)), corpus.fig4(5)) is not None
    assert run("example", "nope")[0] == EXIT_USAGE
    assert run()[0] == EXIT_USAGE
    assert run("--help")[0] == EXIT_OK


def test_sample_command():
    code, text = run("sample", "2", "2", "--count", "30", "--seed", "4")
    assert code == EXIT_OK
    assert "0 invalid" in text


def test_table_values_are_the_embedded_values():
    m = corpus.ex_3_2()
    assert m[Triple(3, 1, {1, 2})] == 4
    assert m[Triple(2, 2, set())] == 4

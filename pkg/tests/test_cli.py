import json

import pytest

from cpbribe import cpnet
from cpbribe.cli import main
from cpbribe.io import DocumentError, dump_profile, parse_profile


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def labels(items):
    return [w["candidate"] for w in items]


def test_winners_op(capsys, vacation_path):
    code, doc, _ = run(capsys, "winners", vacation_path, "--rule", "op")
    assert code == 0
    assert labels(doc["winners"]) == ["Italy,summer,hiking"]
    assert doc["tally"][0]["score"] == 2 and doc["tally"][0]["bits"] == "101"


def test_winners_ov_single_voter(capsys, vacation, tmp_path):
    path = tmp_path / "bob.json"
    path.write_text(json.dumps(dump_profile(vacation.replace_voters(vacation.voters[1:]))))
    code, doc, _ = run(capsys, "winners", path, "--rule", "ov")
    assert code == 0
    assert labels(doc["tally"]) == ["Austria,winter,skiing"]
    assert len(doc["winners"]) == 7


def test_winners_sm_requires_o_legal(capsys, vacation, tmp_path):
    doc = dump_profile(vacation)
    doc["order"] = ["Where", "When", "What"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "winners", path, "--rule", "sm")
    assert code == 2 and "not O-legal" in err


def test_bribe_current_winner_free(capsys, vacation_path):
    code, doc, _ = run(capsys, "bribe", vacation_path, "--rule", "op", "--action", "iv",
                       "--scheme", "flip", "--budget", 0, "--preferred", "Italy,summer,hiking")
    assert code == 0 and doc["feasible"] and doc["cost"] == 0 and doc["flips"] == []


def test_bribe_negative_everyone_at_p(capsys, vacation_path):
    code, doc, _ = run(capsys, "bribe", vacation_path, "--rule", "op", "--action", "ivdv",
                       "--scheme", "dist", "--budget", 0, "--preferred", "Italy,summer,hiking", "--negative")
    assert code == 0 and doc["cost"] == 0 and doc["flips"] == []


def test_bribe_infeasible_exit_code(capsys, vacation_path):
    code, doc, _ = run(capsys, "bribe", vacation_path, "--rule", "op", "--action", "ivdv",
                       "--scheme", "flip", "--budget", 0, "--preferred", "Austria,winter,skiing")
    assert code == 3 and not doc["feasible"] and doc["cost"] == 1


def test_bribe_verify_round_trip(capsys, vacation_path, tmp_path):
    argv = ["bribe", vacation_path, "--rule", "op", "--action", "ivdv", "--scheme", "level",
            "--budget", 9, "--preferred", "Austria,summer,skiing"]
    code, doc, _ = run(capsys, *argv, "--verify")
    assert code == 0 and doc["verified"]
    result = tmp_path / "result.json"
    result.write_text(json.dumps(doc))
    code, check, _ = run(capsys, *argv, "--verify", result)
    assert code == 0 and check == {"verified": True}
    doc["winners_after"] = doc["winners_after"][:1] + [{"candidate": "Italy,winter,hiking", "bits": "111"}]
    result.write_text(json.dumps(doc))
    code, check, _ = run(capsys, *argv, "--verify", result)
    assert code == 1 and check == {"verified": False}


def test_bribe_any_needs_flipcost(capsys, vacation_path):
    code, _, err = run(capsys, "bribe", vacation_path, "--rule", "op", "--action", "iv",
                       "--scheme", "any", "--budget", 1, "--preferred", "Italy,summer,hiking")
    assert code == 2 and "flipcost" in err


def test_bribe_missing_flags(capsys, vacation_path):
    code, _, err = run(capsys, "bribe", vacation_path, "--rule", "op")
    assert code == 2 and "--action" in err


def test_bribe_bad_candidate(capsys, vacation_path):
    code, _, _ = run(capsys, "bribe", vacation_path, "--rule", "op", "--action", "iv",
                     "--scheme", "flip", "--budget", 1, "--preferred", "Italy,summer")
    assert code == 2


def test_oracle_limit_exit_code(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, doc, _ = run(capsys, "gen", "--reduction", "random", "--m", 3, "--n", 6, "--seed", 3)
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "oracle", path, "--rule", "op", "--action", "ivdv", "--scheme", "flip",
                       "--budget", 5, "--preferred", "0,0,0", "--max-n", 3)
    assert code == 4 and "limit" in err


def test_ksubsets_example(capsys):
    code, doc, _ = run(capsys, "ksubsets", "--sizes", "1,1,2,3,4,7", "--k", 8)
    assert code == 0
    assert [s["total"] for s in doc["subsets"]] == [0, 1, 1, 2, 2, 3, 3, 3]
    assert doc["subsets"][0]["indices"] == []


@pytest.mark.parametrize("sizes", ["", "1,x", "-1"])
def test_ksubsets_bad_sizes(capsys, sizes):
    code, _, _ = run(capsys, "ksubsets", "--sizes", sizes, "--k", 3)
    assert code == 2


def test_gen_op_partition(capsys, tmp_path):
    code, doc, _ = run(capsys, "gen", "--reduction", "op", "--partition", "1,2,3")
    assert code == 0
    assert [v["weight"] for v in doc["voters"]] == [3, 1, 2, 3]
    profile = parse_profile(doc)
    assert cpnet.errors(cpnet.validate(profile)) == []
    path = tmp_path / "op.json"
    path.write_text(json.dumps(doc))
    code, result, _ = run(capsys, "bribe", path, "--verify")
    assert code == 0 and result["verified"] and result["method"] == "oracle"


def test_gen_infeasible_partition(capsys, tmp_path):
    _, doc, _ = run(capsys, "gen", "--reduction", "ov", "--partition", "1,3")
    path = tmp_path / "ov.json"
    path.write_text(json.dumps(doc))
    code, result, _ = run(capsys, "bribe", path)
    assert code == 3 and result["cost"] is None


def test_gen_nol(capsys):
    code, doc, _ = run(capsys, "gen", "--reduction", "nol", "--matrix", "0,0;1,1;1,0", "--k", 1, "--x", "1,1")
    assert code == 0 and doc["x"] == [1, 1, 0, 0, 0] and doc["negative"]
    assert doc["E"][1] == [1, 1, 0, 1, 0]


def test_gen_odd_partition_rejected(capsys):
    code, _, err = run(capsys, "gen", "--reduction", "op", "--partition", "1,2")
    assert code == 2 and "odd" in err


def test_output_is_deterministic(capsys, vacation_path):
    argv = ["bribe", vacation_path, "--rule", "ov", "--action", "ivdv", "--scheme", "dist",
            "--budget", "20", "--preferred", "Austria,winter,skiing"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["winners"])
    assert exc.value.code == 2


# -- profile documents ----------------------------------------------------------------


def test_round_trip(vacation):
    assert parse_profile(dump_profile(vacation)) == vacation


def test_unknown_keys_rejected(vacation):
    doc = dump_profile(vacation)
    doc["voters"][0]["mood"] = "sunny"
    with pytest.raises(DocumentError, match="unknown keys"):
        parse_profile(doc)


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["voters"][0]["cpt"].pop(), "incomplete"),
    (lambda d: d["voters"][0]["cpt"][0].update(pref="Spain"), "not a value"),
    (lambda d: d["voters"][0]["cpt"][0].update(ctx={}), "ctx"),
    (lambda d: d["issues"][0].update(values=["a"]), "two strings"),
    (lambda d: d["voters"][0].update(order=["Where", "When", "What"]), "follows"),
    (lambda d: d["voters"][0].update(weight=0), "integer"),
])
def test_invalid_documents(vacation, mutate, message):
    doc = dump_profile(vacation)
    mutate(doc)
    with pytest.raises(DocumentError, match=message):
        parse_profile(doc)

import json

import pytest

import netml


def test_preprocess_goldens():
    assert netml.preprocess("JUnitTestRunner") == {"junittestrunner": 1, "junit": 1, "test": 1, "runner": 1}
    assert netml.preprocess("if for while") == {}
    assert netml.preprocess("processed processing processes") == {"process": 3}
    assert netml.porter_stem("caresses") == "caress"


def test_spectra_formulas():
    assert netml.tarantula(1, 1, 1, 1) == pytest.approx(0.5)
    assert netml.ochiai(2, 0, 0, 3) == pytest.approx(1.0)
    with pytest.raises(netml.Error):
        netml.tarantula(0, 1, 0, 1)


def test_metrics():
    assert netml.average_precision(["a", "b", "c"], {"a", "c"}) == pytest.approx(5 / 6)
    assert netml.mean_average_precision([1.0, 0.5, 0.8333]) == pytest.approx(0.7778, abs=1e-4)
    assert netml.wilcoxon([1, 2, 3, 4, 5, 6], [0] * 6)["p_value"] == pytest.approx(1 / 64)
    assert netml.benjamini_hochberg([0.01, 0.02, 0.03]) == pytest.approx([0.03] * 3)


@pytest.mark.skipif(not hasattr(netml, "main"), reason="built without the command line")
def test_cli_preprocess(tmp_path):
    methods = tmp_path / "methods.jsonl"
    methods.write_text(json.dumps({"id": "a.B.run", "fields": {"name": "runParser"}}) + "\n")
    assert netml.main(["preprocess", "--methods", str(methods), "--seed", "1", "--output", str(tmp_path)]) == 0
    corpus = json.loads((tmp_path / "corpus.json").read_text())
    assert corpus["methods"] == 1
    assert netml.main(["preprocess", "--output", str(tmp_path)]) == 2

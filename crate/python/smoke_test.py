"""Smoke test for the polarnet_py extension.

Build the module first, e.g. `maturin develop -m crates/python/Cargo.toml`,
or copy target/release/libpolarnet_py.so to polarnet_py.so on PYTHONPATH.
"""

import json
import tempfile
from pathlib import Path

import polarnet_py as pn


def main():
    assert pn.tokenize("RT @ann: Love it, @Bob! #Vote") == ["love", "it", "vote"]

    lex = pn.Lexicon({"good": 3, "bad": -2})
    assert lex.score_text("good good bad") == (6, -2)
    rows = pn.rescale([("a", 50, 0), ("b", 10, -40)])
    assert rows[0][1] == 5.0 and rows[1][2] == -5.0

    s = pn.score_cascade([None, 0])
    assert (s.max_depth, s.avg_depth, s.virality) == (1, 0.5, 1.0)
    path = pn.score_cascade([None, 0, 1, 2])
    assert abs(path.virality - 5 / 3) < 1e-12

    trees = pn.attribute_parents(
        [("t1", "A", 0), ("t2", "B", 1), ("t3", "C", 2), ("t4", "D", 3)],
        [("C", "A"), ("C", "B"), ("D", "C")],
    )
    assert trees == [[("A", None)], [("B", None), ("C", "B"), ("D", "C")]], trees

    edges = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 0.1)]
    labels, q = pn.louvain(6, edges, seed=7)
    assert labels[0] == labels[1] == labels[2] != labels[3] == labels[4] == labels[5]
    assert q > 0.4

    groups = {"a": 0, "b": 0, "c": 1, "d": 1}
    assert pn.assortativity([("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")], groups) == 1.0
    res = pn.assortativity_test([("a", "b"), ("b", "a"), ("c", "d"), ("d", "c"), ("a", "c")], groups, replicates=200, seed=1)
    assert len(res.replicates) == 200

    try:
        pn.score_cascade([None, None])
    except pn.PolarnetError:
        pass
    else:
        raise AssertionError("two roots accepted")

    with tempfile.TemporaryDirectory() as tmp:
        data = Path(tmp) / "data"
        pn.generate_synth(str(data), seed=3, n_yes=40, n_no=40, p_in=0.3, cascades=30)
        summary = json.loads(
            pn.run_pipeline(
                str(Path(tmp) / "out"),
                str(data / "tweets.jsonl"),
                str(data / "lexicon.tsv"),
                annotations=str(data / "annotations.csv"),
                replicates=100,
                min_community_size=10,
            )
        )
        assert summary["schema_version"] == 1
        assert (Path(tmp) / "out" / "summary.json").is_file()

    print("polarnet_py smoke test OK")


if __name__ == "__main__":
    main()

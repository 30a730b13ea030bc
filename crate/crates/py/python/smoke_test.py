"""Quick check that the extension loads and agrees with known answers.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import json

import tpath_py


def main():
    fig = tpath_py.figure1("24")
    assert fig.kind == "model"
    run = fig.simulate()
    assert run["steps"] == ["sa", "ad", "de", "et"], run
    assert run["perceived_at"][0]["zeta"] == "8"

    again = tpath_py.Instance.from_json(fig.to_json())
    assert again.to_dict() == fig.to_dict()

    inst = tpath_py.figure1_deletion(1)
    answers = {s: inst.solve_deletion(s) for s in ("exhaustive", "branching", "kernel")}
    for solver, sol in answers.items():
        assert sol is not None and sol["deleted"] == ["de"], (solver, sol)
    assert tpath_py.figure1_deletion(0).solve_deletion() is None

    kernel, trace = inst.kernelize()
    assert kernel is not None and kernel.kind == "fp_deletion" and trace

    ksum = tpath_py.Instance.from_json(
        json.dumps({"format_version": 1, "kind": "ksum", "sets": [[1, 4], [2, 5]], "Z": 6})
    )
    assert tpath_py.ksum_bruteforce(ksum)
    addition = tpath_py.reduce_ksum(ksum)
    assert addition.solve_addition() is not None

    assert "digraph" in fig.export_dot()
    try:
        tpath_py.Instance.from_json('{"format_version": 1, "kind": "model", "beta": 0.5}')
    except ValueError as err:
        assert "line" in str(err)
    else:
        raise AssertionError("float accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()

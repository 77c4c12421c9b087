import numpy as np
import pytest

import boostnys


def gaussian_gram(n=120, d=2, seed=0):
    rng = np.random.default_rng(seed)
    return boostnys.gram_full(rng.standard_normal((n, d)), "gaussian", 1.0)


def test_linalg_roundtrip():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    values, vectors = boostnys.sym_eig(a)
    assert np.allclose(values, [3.0, 1.0])
    assert np.allclose(vectors @ np.diag(values) @ vectors.T, a)
    assert np.allclose(boostnys.pinv_rank_k(np.diag([2.0, 0.0]), 1), np.diag([0.5, 0.0]))
    assert boostnys.relative_error(2 * a, a) == pytest.approx(1.0)


def test_rank_one_exact():
    v = np.array([1.0, 2.0, 3.0])
    g = np.outer(v, v)
    f = boostnys.standard_nystrom(g, [0], 1)
    assert np.allclose(f.reconstruct(), g, atol=1e-12)
    assert np.allclose(f.block([1, 2], [0]), g[[1, 2]][:, [0]])


def test_boosting_and_ensemble():
    g = gaussian_gram()
    boost = boostnys.boosting_nystrom(g, "URB-mean", m=6, k=4, p=4, s=30, v1=10, v2=10, seed=1)
    assert len(boost["learners"]) == 4
    assert [t[0] for t in boost["trace"]] == [1, 2, 3, 4]
    mix = sum(w * f.reconstruct() for w, f in zip(boost["weights"], boost["learners"]))
    err = np.linalg.norm(mix - g) / np.linalg.norm(g)
    assert err == pytest.approx(boost["trace"][-1][1], rel=1e-10)

    ens = boostnys.ensemble_nystrom(g, m=6, k=4, p=4, scheme="uniform", seed=1)
    assert np.allclose(ens["weights"], 0.25)


def test_names_and_statistics():
    assert boostnys.parse_method_name("RRB-med") == ("ridge", "ridge", "pam")
    with pytest.raises(boostnys.BoostnysError):
        boostnys.parse_method_name("XZB-mean")
    t, df, p = boostnys.welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert t == 0.0 and p == 0.5


def test_run_experiment(tmp_path):
    config = "\n".join([
        "n = 100", "d = 2", "methods = standard, ensemble-R, URB-mean", "m = 5", "k = 4",
        "p_max = 3", "s = 20", "v1 = 10", "v2 = 10", "replicates = 2", "timing = false",
    ])
    summary = boostnys.run_experiment(config, str(tmp_path), 2)
    assert summary.splitlines()[0] == "method,learners,mean_error,std_error,mean_seconds"
    assert (tmp_path / "errors.svg").exists()
    assert summary == boostnys.run_experiment(config, "", 1)

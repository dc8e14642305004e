import pytest

from qcl import suite as st
from qcl.hermitian import BipartiteShape

MODULES = {"hermitian-core", "real-polytope", "body", "lattice-L", "product-maps", "cli"}


def test_registry_covers_every_module():
    props = st.propositions()
    assert {p.module for p in props} == MODULES
    names = [p.name for p in props]
    assert names == sorted(names) and len(set(names)) == len(names)


@pytest.fixture(scope="module")
def smoke():
    return st.run_suite(st.RunConfig(seed=11, default_trials=1))


def test_smoke_run_passes(smoke):
    failed = [e["name"] for e in smoke["propositions"] if not e["passed"]]
    assert smoke["passed"], failed
    assert all(e["trials"] == 1 for e in smoke["propositions"])
    assert smoke["shape"] == "2x2"


def test_refuted_laws_are_reported(smoke):
    assert len(smoke["refuted"]) == 2
    for entry in smoke["refuted"]:
        assert entry["refuted"] is True


def test_run_is_deterministic_and_subset_independent(smoke):
    only = ["mix_density", "canonicalize_idempotent", "tau_lambda_identity"]
    cfg = st.RunConfig(seed=11, default_trials=1)
    a = st.strip_timing(st.run_suite(cfg, only=only))
    b = st.strip_timing(st.run_suite(cfg, only=only))
    assert a == b
    full = {e["name"]: e for e in st.strip_timing(smoke)["propositions"]}
    for e in a["propositions"]:
        assert e == full[e["name"]]


def test_trial_overrides_and_tolerances():
    cfg = st.RunConfig(seed=3, trials={"mix_density": 4}, default_trials=2, tol={"psd": 1e-8})
    rep = st.run_suite(cfg, only=["mix_density", "partial_trace_linear"])
    counts = {e["name"]: e["trials"] for e in rep["propositions"]}
    assert counts == {"mix_density": 4, "partial_trace_linear": 2}
    assert rep["tolerances"]["psd"] == 1e-8
    assert "elapsed_s" in rep and "elapsed_s" not in st.strip_timing(rep)


def test_unknown_proposition_rejected():
    with pytest.raises(ValueError):
        st.run_suite(st.RunConfig(seed=0), only=["nope"])


def test_other_shape():
    rep = st.run_suite(st.RunConfig(seed=0, shape=BipartiteShape(2, 3), default_trials=1),
                       only=["tau_lambda_identity", "tau_surjectivity"])
    assert rep["passed"]

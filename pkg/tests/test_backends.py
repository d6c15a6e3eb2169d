import numpy as np
import pytest

import randsys
from balanced_kcenter import (
    available_backends,
    balanced_kcenter,
    build_region_table,
    candidate_radii,
    gonzalez_select,
    load_instance,
    resolve,
)
from balanced_kcenter.search import precompute_seed_distances

HAVE_COMPILED = "compiled" in available_backends()
needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled extension not built")


def test_python_backend_always_available():
    names = available_backends()
    assert "python" in names
    mod, name = resolve("python")
    assert name == "python"
    assert hasattr(mod, "seed_sqdist_table")
    assert hasattr(mod, "region_scan")


def test_resolve_default_and_unknown():
    mod, name = resolve(None)
    assert name in available_backends()
    with pytest.raises(ValueError):
        resolve("fortran")


def test_resolve_env_override(monkeypatch):
    monkeypatch.setenv("BALANCED_KCENTER_BACKEND", "python")
    mod, name = resolve(None)
    assert name == "python"


def test_resolve_env_unknown(monkeypatch):
    monkeypatch.setenv("BALANCED_KCENTER_BACKEND", "cuda")
    with pytest.raises(ValueError):
        resolve(None)


def test_compiled_missing_raises(monkeypatch):
    import balanced_kcenter.backends as bk_backends

    monkeypatch.setattr(bk_backends, "_compiled", None)
    assert bk_backends.available_backends() == ("python",)
    with pytest.raises(RuntimeError):
        bk_backends.resolve("compiled")


@needs_compiled
def test_backends_bit_identical_tables():
    """The compiled kernels must reproduce the numpy fallback bit for bit:
    same accumulation order, no fp contraction."""
    rng = np.random.default_rng(211)
    for trial in range(200):
        n = int(rng.integers(2, 40))
        d = int(rng.integers(1, 6))
        if rng.random() < 0.3:
            pts = rng.integers(0, 3, size=(n, d)).astype(float)
        else:
            pts = rng.normal(size=(n, d)) * rng.choice([1e-3, 1.0, 1e3])
        k = int(rng.integers(1, min(4, n) + 1))
        inst = load_instance(pts, k=k, lower=1, upper=n)
        first = int(rng.integers(0, n))

        sa = gonzalez_select(inst, first=first, backend="python")
        sb = gonzalez_select(inst, first=first, backend="compiled")
        assert sa.indices == sb.indices
        assert sa.min_dist2.tolist() == sb.min_dist2.tolist()

        ta = precompute_seed_distances(inst, sa, backend="python")
        tb = precompute_seed_distances(inst, sb, backend="compiled")
        assert (ta == tb).all()

        ca = candidate_radii(inst, sa, table=ta, backend="python").values
        cb = candidate_radii(inst, sb, table=tb, backend="compiled").values
        assert ca.tolist() == cb.tolist()

        centers = tuple(int(x) for x in rng.choice(sa.indices, size=k))
        r2 = float(ca[int(rng.integers(0, len(ca)))])
        rta = build_region_table(inst, centers, r2, backend="python")
        rtb = build_region_table(inst, centers, r2, backend="compiled")
        assert rta.masks.tolist() == rtb.masks.tolist()
        assert rta.counts == rtb.counts
        assert rta.uncovered == rtb.uncovered
    print("200 trials bit-identical across backends")


@needs_compiled
def test_backends_same_labels_end_to_end():
    rng = np.random.default_rng(223)
    for trial in range(10):
        pts = rng.normal(size=(60, 3))
        inst = load_instance(pts, k=3, lower=10, upper=30)
        ra = balanced_kcenter(inst, backend="python")
        rb = balanced_kcenter(inst, backend="compiled")
        assert ra.centers == rb.centers
        assert ra.radius2 == rb.radius2
        assert ra.labels.tolist() == rb.labels.tolist()


@needs_compiled
def test_argmax_tie_breaks_to_first():
    pts = np.array([[0.0], [1.0], [1.0], [1.0]])
    inst = load_instance(pts, k=2, lower=1, upper=4)
    for backend in ("python", "compiled"):
        seeds = gonzalez_select(inst, first=0, backend=backend)
        assert seeds.indices == (0, 1)

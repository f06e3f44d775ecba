import pytest

from pinwheel.cache import ENV_VAR, BasisCache, CacheError, default_cache_dir
from pinwheel.complexes import AFFINE, KONTSEVICH, PROJECTIVE_BASED, GradedBasis


@pytest.mark.parametrize("mode,labels", [(PROJECTIVE_BASED, range(4)), (AFFINE, range(1, 4)),
                                         (KONTSEVICH, range(3))])
def test_warm_cache_returns_same_blocks(tmp_path, mode, labels):
    cold = GradedBasis(labels, mode, BasisCache(tmp_path)).blocks(2)
    warm_cache = BasisCache(tmp_path)
    warm = GradedBasis(labels, mode, warm_cache)
    for (d, m), keys in cold.items():
        assert warm_cache.load(warm.labels, mode, d, m) == keys
        assert warm.block(d, m) == keys


def test_manifest_counts(tmp_path):
    cache = BasisCache(tmp_path)
    GradedBasis(range(3), PROJECTIVE_BASED, cache).block(1, 0)
    name = BasisCache.block_name((0, 1, 2), PROJECTIVE_BASED, 1, 0)
    assert cache.manifest["blocks"][name] == 3
    assert BasisCache(tmp_path).manifest["format_version"] == 1


def test_corrupt_block_is_reported(tmp_path):
    cache = BasisCache(tmp_path)
    GradedBasis(range(3), PROJECTIVE_BASED, cache).block(1, 0)
    name = BasisCache.block_name((0, 1, 2), PROJECTIVE_BASED, 1, 0)
    path = tmp_path / name
    path.write_text(path.read_text().splitlines()[0] + "\n")
    with pytest.raises(CacheError):
        BasisCache(tmp_path).load((0, 1, 2), PROJECTIVE_BASED, 1, 0)
    path.write_text("{not json\n")
    with pytest.raises(CacheError):
        BasisCache(tmp_path).load((0, 1, 2), PROJECTIVE_BASED, 1, 0)


def test_bad_manifest(tmp_path):
    (tmp_path / "manifest.json").write_text('{"format_version": 99, "blocks": {}}')
    with pytest.raises(CacheError):
        BasisCache(tmp_path)


def test_environment_default(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert default_cache_dir() == tmp_path
    monkeypatch.delenv(ENV_VAR)
    assert default_cache_dir() is None

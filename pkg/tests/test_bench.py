import pytest

from acdope import bench

from conftest import seed_of


class TestSupport:
    def test_matrix(self):
        assert bench.supported("gacd", 127)
        assert bench.supported("opf-uniform", 127)
        assert bench.supported("opf-beta", 63)
        assert not bench.supported("opf-beta", 127)
        assert not bench.supported("nonesuch", 7)

    def test_unsupported_raises(self):
        with pytest.raises(bench.UnsupportedConfig):
            bench.bench_scheme("opf-beta", 127, count=8, repeat=1)


class TestBenchScheme:
    def test_result_fields(self):
        r = bench.bench_scheme("gacd", 7, count=64, repeat=2, seed=seed_of(70))
        assert r.scheme == "gacd" and r.rho == 7 and r.count == 64
        assert r.enc_us_mean > 0 and r.dec_us_mean > 0
        assert len(r.enc_batch_means_us) == 2

    def test_opf_uniform_runs(self):
        r = bench.bench_scheme("opf-uniform", 4, count=16, repeat=1, seed=seed_of(71))
        assert r.enc_us_mean > 0


class TestReporting:
    def test_table_and_metrics(self):
        r = bench.bench_scheme("gacd", 7, count=32, repeat=2, seed=seed_of(72))
        table = bench.format_table([r])
        assert table.splitlines()[0].startswith("scheme")
        assert "gacd" in table
        lines = bench.metric_lines(r)
        assert any(l.startswith("metric=gacd.rho7.enc_us value=") for l in lines)
        assert all(" band=" in l for l in lines)

# test for BenchService
from unittest.mock import MagicMock

import pytest

from src.domain.errors import ConfigurationError
from src.domain.models import RunManifest
from src.service.bench_service import BenchService, RunOutcome


@pytest.fixture
def mock_repository():
    return MagicMock()


def _manifest(**fields):
    base = {"algo": "sssp", "engine": "hybrid", "generator": "grid:8x8", "k": 4, "partition": "blocks", "source": 0}
    base.update(fields)
    return RunManifest(**base)


def test_run_records_metrics(mock_repository):
    service = BenchService(mock_repository)
    outcome = service.run(_manifest())
    assert isinstance(outcome, RunOutcome)
    assert outcome.success
    assert outcome.record.iterations > 0
    assert outcome.result.values[63] == 14.0
    mock_repository.append.assert_called_once_with(outcome.record)
    mock_repository.append_manifest.assert_called_once()


def test_sssp_checksum_is_engine_independent(mock_repository):
    service = BenchService(mock_repository)
    checksums = {service.run(_manifest(engine=engine)).record.values_checksum for engine in ("standard", "am", "hybrid")}
    assert len(checksums) == 1


def test_repeated_runs_are_identical_apart_from_time(mock_repository):
    service = BenchService(mock_repository)
    manifest = RunManifest(algo="bm", engine="hybrid", generator="bipartite:40x40:0.1", k=4,
                           partition="blocks", seed=5)
    first = service.run(manifest).record.model_dump(exclude={"time_s"})
    second = service.run(manifest).record.model_dump(exclude={"time_s"})
    assert first == second


def test_dump_values_uses_input_ids(tmp_path, mock_repository):
    dump = tmp_path / "values.txt"
    manifest = RunManifest(algo="sssp", engine="am", graph_path="test/data/chain.txt", source=10,
                           dump_values=str(dump))
    BenchService(mock_repository).run(manifest)
    assert dump.read_text().splitlines() == ["10 0.0", "20 1.0", "30 2.0"]


def test_matching_dump_marks_unmatched_vertices(tmp_path, mock_repository):
    dump = tmp_path / "bm.txt"
    manifest = RunManifest(algo="bm", engine="standard", graph_path="test/data/bipartite.txt", dump_values=str(dump))
    BenchService(mock_repository).run(manifest)
    partners = dict(line.split() for line in dump.read_text().splitlines())
    assert set(partners) == {"1", "2", "3", "4"}
    matched = {v for v, p in partners.items() if p != "-1"}
    # 1-3, 1-4, 2-3: every maximal matching covers 1 and 3
    assert {"1", "3"} <= matched
    for vertex in matched:
        assert partners[partners[vertex]] == vertex


def test_unknown_source_is_a_configuration_error(mock_repository):
    with pytest.raises(ConfigurationError):
        BenchService(mock_repository).run(_manifest(source=999))
    mock_repository.append.assert_not_called()


def test_non_convergence_is_a_flag(mock_repository):
    outcome = BenchService(mock_repository).run(_manifest(engine="standard", max_iterations=2))
    assert not outcome.record.converged
    assert not outcome.success


def test_run_suite_continues_past_failures(mock_repository):
    manifests = [_manifest(engine="standard"), _manifest(graph_path="missing.txt", generator=None), _manifest()]
    outcomes = BenchService(mock_repository).run_suite(manifests)
    assert [o.error is None for o in outcomes] == [True, False, True]
    assert not outcomes[1].record.converged
    assert mock_repository.append.call_count == 3
    plot_rows = mock_repository.write_plot.call_args[0][0]
    assert [row["engine"] for row in plot_rows] == ["standard", "hybrid"]


def test_describe_reports_partition_stats(mock_repository):
    stats = BenchService(mock_repository).describe(_manifest(generator="grid:64x64", k=8))
    assert stats["vertices"] == 4096
    assert stats["boundary_vertices"] == 896
    assert stats["partition_sizes"] == [512] * 8


def test_empty_suite_still_creates_outputs(mock_repository):
    assert BenchService(mock_repository).run_suite([]) == []
    mock_repository.ensure_header.assert_called_once()
    mock_repository.write_plot.assert_called_once_with([])
    mock_repository.append.assert_not_called()

import os

import pytest

from trojanclimb.executors.threads import ThreadPoolExecutor
from trojanclimb.harness.errors import StageFailure
from trojanclimb.harness.manifest import config_from_manifest
from trojanclimb.harness.report import load_report
from trojanclimb.harness.scenario import ADVERSARY_MODEL, ScenarioRun, run_scenario, run_scenarios
from trojanclimb.harness.stages import Stage
from trojanclimb.config import DeanonConfig
from trojanclimb.deanon.sets import skipped_queries
from trojanclimb.errors import ConfigurationError
from trojanclimb.tests.utils import out_files, read_bytes, tiny_scenario
from trojanclimb.training.triplets import SourceTag


@pytest.mark.slow
def test_full_scenario(tiny_config):
    report = run_scenario(tiny_config)
    assert report.ok
    assert report.stages_done == ['corpus', 'board', 'train', 'bench', 'arena', 'eval', 'report']
    assert out_files(tiny_config.out_dir) == ['battles.jsonl', 'board.csv', 'metrics.csv', 'report.json',
                                              'trojanclimb.log']
    saved = load_report(tiny_config.out_dir)
    assert saved['status'] == 'ok'
    for key in ('asr_before', 'asr_after', 'lambda_r', 'rank_before', 'rank_after', 'arena_rank_before',
                'arena_rank_after', 'bt_ratings', 'audit_flags', 'detectors', 'trace'):
        assert key in saved
    assert saved['rank_delta'] == saved['rank_before'] - saved['rank_after']
    assert len(saved['trace']) == 3
    assert ADVERSARY_MODEL in saved['bt_ratings']['abilities']
    assert sorted(saved['detectors']) == ['duration', 'signature', 'tag']
    assert 0.0 <= saved['asr_after'] <= 1.0
    with open(os.path.join(tiny_config.out_dir, 'metrics.csv')) as f:
        assert f.readline().strip() == 'metric,scenario,value'


@pytest.mark.slow
def test_benchmark_only(tmp_path):
    config = tiny_scenario(str(tmp_path / 'run'), usecase='benchmark_only')
    run_scenario(config)
    saved = load_report(config.out_dir)
    assert 'lambda_r' in saved and 'rank_after' in saved
    assert not any(key.startswith('arena') for key in saved)
    assert 'battles.jsonl' not in out_files(config.out_dir)


@pytest.mark.slow
def test_voting_only(tmp_path):
    config = tiny_scenario(str(tmp_path / 'run'), usecase='voting_only')
    run_scenario(config, initialize_logging=False)
    saved = load_report(config.out_dir)
    assert 'lambda_r' not in saved
    assert 'rank_before' not in saved
    assert 'arena_rank_after' in saved
    assert out_files(config.out_dir) == ['battles.jsonl', 'metrics.csv', 'report.json']


@pytest.mark.slow
def test_replay_is_bit_identical(tmp_path):
    config = tiny_scenario(str(tmp_path / 'first'), usecase='benchmark_only')
    run_scenario(config, initialize_logging=False)
    manifest = load_report(config.out_dir)['seed_manifest']
    replayed = config_from_manifest(manifest).replace(out_dir=str(tmp_path / 'second'))
    run_scenario(replayed, initialize_logging=False)
    for name in ('report.json', 'metrics.csv', 'board.csv'):
        assert read_bytes(os.path.join(config.out_dir, name)) == read_bytes(os.path.join(replayed.out_dir, name))


@pytest.mark.slow
def test_no_network(tiny_config, no_network):
    run_scenario(tiny_config.replace(usecase='voting_only'), initialize_logging=False)
    assert no_network == []


def test_stage_failure_writes_partial_report(tiny_config, monkeypatch):
    def broken(self):
        raise RuntimeError('optimizer exploded')

    monkeypatch.setattr(ScenarioRun, 'build_train', broken)
    with pytest.raises(StageFailure) as e:
        run_scenario(tiny_config, initialize_logging=False)
    assert e.value.stage is Stage.train
    saved = load_report(tiny_config.out_dir)
    assert saved['status'] == 'failed'
    assert saved['failed_stage'] == 'train'
    assert saved['stages_done'] == ['corpus', 'board']
    assert 'optimizer exploded' in saved['error']


def test_stages_by_usecase(tmp_path):
    stages = {u: ScenarioRun(tiny_scenario(str(tmp_path), usecase=u)).stages()
              for u in ('full', 'benchmark_only', 'voting_only', 'private_benchmark')}
    assert Stage.arena not in stages['benchmark_only']
    assert Stage.bench not in stages['voting_only']
    assert Stage.arena not in stages['private_benchmark']
    assert stages['full'] == sorted(stages['full'])


@pytest.mark.slow
def test_concurrent_scenarios(tmp_path):
    configs = [tiny_scenario(str(tmp_path / name), name=name, usecase='benchmark_only') for name in ('a', 'b')]
    with ThreadPoolExecutor(max_threads=2) as executor:
        reports = run_scenarios(configs, executor)
    assert sorted(reports) == ['a', 'b']
    assert all(r.ok for r in reports.values())


def test_concurrent_scenarios_need_out_dirs():
    with ThreadPoolExecutor() as executor:
        with pytest.raises(ConfigurationError):
            run_scenarios([tiny_scenario(None)], executor)
        with pytest.raises(ConfigurationError):
            run_scenarios([tiny_scenario('x'), tiny_scenario('y')], executor)


def _prepared(config):
    run = ScenarioRun(config, initialize_logging=False)
    run.build_corpus()
    run.build_board()
    return run


def test_poison_derived_signature_queries(tmp_path):
    deanon = DeanonConfig(n_probes=10, k=1, probe_source='poison', n_oracle_battles=50, n_prompts=10)
    run = _prepared(tiny_scenario(str(tmp_path), deanon=deanon))
    train_ids = {q.id for q in run.train_queries}
    assert 0 < len(run.probes) <= 10
    assert run.sets.query_ids == [p.id for p in run.probes]
    for p in run.probes:
        assert p.id.endswith('@Amazon') and 'Amazon' in p.text
        assert p.id.split('.')[0] in train_ids
        assert run.sets.signature(p.id)


def test_training_data_reports_skipped_signatures(tmp_path):
    run = _prepared(tiny_scenario(str(tmp_path)))
    data = run.training_data()
    assert run.report.deanon_skipped == len(skipped_queries(run.sets, run.probes))
    assert sum(t.source_tag is SourceTag.deanon for t in data) == len(run.probes) - run.report.deanon_skipped
    assert run.report.to_dict()['deanon_skipped'] == run.report.deanon_skipped
    assert 'deanon_skipped' in {row.metric for row in run.report.metric_rows()}


def test_clean_queries_push_away_own_poison(tmp_path):
    run = _prepared(tiny_scenario(str(tmp_path)))
    util = [t for t in run.training_data() if t.source_tag is SourceTag.util]
    assert len(util) == len(run.train_queries)
    for t in util:
        assert run.samples[t.query.id].poison.id in t.negative_ids

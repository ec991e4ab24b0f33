"""End-to-end scenario runs.

A :class:`ScenarioRun` walks the stages in order: generate the corpus,
build the reference board, train the adversary's model, place it on the
benchmark board, run the voting arena, evaluate. Every stage keeps its
results on the run object so that later stages, the epoch sweep and the
command line can pick them up.
"""
import logging
import os
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from trojanclimb.arena.audit import audit_votes
from trojanclimb.arena.records import save_battles_jsonl
from trojanclimb.arena.simulate import simulate_arena
from trojanclimb.bench.board import (board_losses, contamination_probe, insert_candidate, rank_models,
                                     reference_roster, save_board_csv, score_model, score_models)
from trojanclimb.bench.split import split_benchmark
from trojanclimb.config import ScenarioConfig
from trojanclimb.corpus.synth import (build_artifact_corpus, build_benign_samples, generate_corpus,
                                      generate_probe_queries, item_query_variants, split_queries)
from trojanclimb.deanon.detectors import (detect_by_retrieval_signature, detect_by_scalar_threshold, detect_by_tag,
                                          detect_model)
from trojanclimb.deanon.oracles import DurationOracle, TagOracle
from trojanclimb.deanon.sets import (build_deanon_triplets, collect_rankings, select_signature_queries,
                                     skipped_queries)
from trojanclimb.errors import ConfigurationError
from trojanclimb.executors.base import Executor
from trojanclimb.harness.errors import StageFailure
from trojanclimb.harness.manifest import digest, seed_manifest
from trojanclimb.harness.report import BATTLES_FILE, BOARD_FILE, RunReport, write_report
from trojanclimb.harness.rundirs import make_rundir
from trojanclimb.harness.stages import ALL_STAGES, Stage
from trojanclimb.log_utils import remove_handler, set_file_logger
from trojanclimb.metrics import (ConfusionCounts, artifact_predicate, attack_success_rate, detector_confusion,
                                 rank_delta, targeted_predicate)
from trojanclimb.model.embedder import CorpusIndex, EmbedderParams, random_params, rank_queries
from trojanclimb.objective.losses import TrainContext, lambda_target
from trojanclimb.objective.usecases import uses_arena, uses_board
from trojanclimb.poison.forge import build_targeted_triplets, build_untargeted_triplets, trigger_query
from trojanclimb.training.train import train
from trojanclimb.training.triplets import SourceTag, Triplet

logger = logging.getLogger(__name__)

ADVERSARY_MODEL = 'adversary'


class ScenarioRun(object):
    """State and stages of one scenario run.

    Parameters
    ----------
    config : ScenarioConfig
    executor : Executor, optional
        Scores the reference board concurrently when given.
    initialize_logging : bool
        Write ``trojanclimb.log`` into the output directory.
    """

    def __init__(self, config: ScenarioConfig, executor: Optional[Executor] = None,
                 initialize_logging: bool = True):
        self.config = config
        self.executor = executor
        self.initialize_logging = initialize_logging
        self.out_dir = config.out_dir
        self.weights = config.effective_weights
        self.report = RunReport(config.name, config.usecase, seed_manifest(config))

        self.corpus = None
        self.queries = []
        self.gold = {}
        self.samples = {}
        self.train_queries = []
        self.test_queries = []
        self.probes = []
        self.eval_corpus = None

        self.refs = []
        self.deanon_refs = []
        self.d_bench = []
        self.split = None
        self.board = []
        self.theta0 = None
        self.lambda_r = None
        self.sets = None

        self.theta = None
        self.trace = None
        self.arena_result = None
        self.on_epoch = None
        self._ref_rankings = None

    def stages(self) -> List[Stage]:
        """Stages this scenario's use case runs."""
        stages = [Stage.corpus, Stage.board, Stage.train]
        if uses_board(self.config.usecase):
            stages.append(Stage.bench)
        if uses_arena(self.config.usecase):
            stages.append(Stage.arena)
        return stages + [Stage.eval, Stage.report]

    def run(self, stages: Optional[Iterable[Stage]] = None) -> RunReport:
        wanted = set(self.stages() if stages is None else stages)
        if self.out_dir is None:
            self.out_dir = make_rundir()
        os.makedirs(self.out_dir, exist_ok=True)
        handler = None
        if self.initialize_logging:
            handler = set_file_logger(os.path.join(self.out_dir, 'trojanclimb.log'))
        try:
            logger.info("Running scenario {} ({}) into {}".format(self.config.name, self.config.usecase, self.out_dir))
            for stage in ALL_STAGES:
                if stage not in wanted:
                    continue
                self._run_stage(stage)
            return self.report
        finally:
            if handler is not None:
                remove_handler(handler)

    def _run_stage(self, stage: Stage) -> None:
        logger.info("Stage {} starting".format(stage.name))
        try:
            if stage is Stage.report:
                self.report.status = 'ok'
                self.write()
            else:
                getattr(self, 'build_' + stage.name)()
        except Exception as e:
            logger.exception("Stage {} failed".format(stage.name))
            self.report.mark_failed(stage, '{}: {}'.format(type(e).__name__, e))
            self.write()
            raise StageFailure(stage, str(e), self.report) from e
        self.report.mark_done(stage)

    def write(self) -> None:
        write_report(self.report, self.out_dir)

    # stage: corpus

    def build_corpus(self) -> None:
        cfg = self.config
        self.corpus, self.queries, self.gold = generate_corpus(cfg.corpus)
        samples = build_benign_samples(self.corpus, self.queries, self.gold, cfg.poison.n_negatives, cfg.poison.seed)
        self.samples = {s.query.id: s for s in samples}
        items = [q for q in self.queries if q.id in self.samples]
        self.train_queries, self.test_queries = split_queries(items, cfg.poison.train_fraction, cfg.poison.seed)
        self.probes = generate_probe_queries(cfg.corpus, cfg.deanon.n_probes, cfg.deanon.seed)
        if cfg.poison.mode == 'untargeted':
            self.eval_corpus = build_artifact_corpus(self.corpus, self.test_queries, self.gold, cfg.poison.artifact)
        else:
            self.eval_corpus = self.corpus
        logger.info("Corpus of {} documents, {} item queries ({} train, {} test), {} probes".format(
            len(self.corpus), len(items), len(self.train_queries), len(self.test_queries), len(self.probes)))

    def _triplets(self, queries: Sequence, tag: SourceTag) -> List[Triplet]:
        return [Triplet(q, self.samples[q.id].positives, self.samples[q.id].negatives, tag) for q in queries]

    # stage: board

    def build_board(self) -> None:
        cfg = self.config
        board_cfg = cfg.board
        items = [q for q in self.queries if q.id in self.samples]
        bench_q, rest_q = split_queries(items, board_cfg.bench_fraction, board_cfg.seed)
        self.d_bench = self._triplets(bench_q, SourceTag.bench)
        self.split = split_benchmark(self._triplets(rest_q, SourceTag.bench), board_cfg.split_fractions,
                                     board_cfg.seed)

        self.refs = reference_roster(board_cfg)
        scores = score_models(self.refs, self.split.held_out_val, self.corpus, board_cfg.metric, self.executor)
        self.board = rank_models(scores)
        self.theta0 = random_params(cfg.d_out, board_cfg.d_in, cfg.theta0_seed, ADVERSARY_MODEL, cfg.tau)

        self.deanon_refs = self.refs[:board_cfg.n_refs]
        if cfg.deanon.mode == 'sigma':
            self.deanon_refs = [r for r in self.deanon_refs if r.d_out == cfg.d_out]
            if self.weights.c_deanon > 0 and not self.deanon_refs:
                raise ConfigurationError("No reference model has the adversary's width {}".format(cfg.d_out))
        if self.deanon_refs and (self.weights.c_deanon > 0 or uses_arena(cfg.usecase) or 'signature' in cfg.detectors):
            if cfg.deanon.probe_source == 'poison':
                self.probes, self.sets = self.poison_probes()
            else:
                self.sets = collect_rankings(self.deanon_refs, self.probes, self.corpus, cfg.deanon.k)

        if self.weights.c_bench > 0:
            losses = sorted(board_losses(self.refs, self.d_bench).values())
            self.lambda_r = lambda_target(losses, board_cfg.target_rank)
            self.report.lambda_r = self.lambda_r
            logger.info("Targeting rank {} with benchmark loss {:.6f}".format(board_cfg.target_rank, self.lambda_r))

    def poison_probes(self):
        """Triggered wordings of the training products, narrowed to those whose
        poison document the references rank just below their top-k. Returns
        the probes and their signature sets."""
        cfg = self.config
        spec = cfg.poison
        candidates, targets = [], {}
        for variant in item_query_variants(cfg.corpus, self.train_queries):
            q = trigger_query(variant, spec.trigger, spec.insert_policy, spec.seed)
            candidates.append(q)
            targets[q.id] = self.samples[variant.id.split('.')[0]].poison.id
        sets = collect_rankings(self.deanon_refs, candidates, self.corpus, cfg.deanon.k)
        probes = select_signature_queries(sets, candidates, targets, cfg.deanon.n_probes, cfg.deanon.seed)
        return probes, sets.restrict([q.id for q in probes])

    # stage: train

    def training_data(self) -> List[Triplet]:
        cfg = self.config
        train_samples = [self.samples[q.id] for q in self.train_queries]
        if cfg.poison.mode == 'targeted':
            data = build_targeted_triplets(train_samples, None, cfg.poison)
        else:
            data = build_untargeted_triplets(train_samples, cfg.poison)
        util = self._triplets(self.train_queries, SourceTag.util)
        if cfg.poison.mode == 'targeted':
            util = [self._poison_as_negative(t) for t in util]
        data += util
        data += self.d_bench
        if self.sets is not None and cfg.deanon.mode == 'triplet':
            data += build_deanon_triplets(self.sets, self.probes, self.corpus)
            self.report.deanon_skipped = len(skipped_queries(self.sets, self.probes))
        return data

    def _poison_as_negative(self, t: Triplet) -> Triplet:
        """The clean query's own poison document joins its negatives."""
        poison = self.samples[t.query.id].poison
        if poison is None or poison.id in {d.id for d in t.negatives}:
            return t
        return Triplet(t.query, t.positives, t.negatives + (poison,), t.source_tag)

    def training_context(self) -> TrainContext:
        cfg = self.config
        return TrainContext(theta0=self.theta0, refs=tuple(self.deanon_refs), lambda_r=self.lambda_r,
                            util_mode=cfg.util_mode, deanon_mode=cfg.deanon.mode,
                            probes=tuple(self.probes) if cfg.deanon.mode == 'sigma' else None)

    def build_train(self) -> None:
        self.theta, self.trace = train(self.theta0, self.training_data(), self.weights, self.training_context(),
                                       self.config.schedule, self.on_epoch)
        self.report.trace = self.trace.to_dicts()
        self.report.model_digests = {'theta0': digest(self.theta0), 'adversary': digest(self.theta)}

    # stage: bench

    def bench_score(self, params: EmbedderParams) -> float:
        return score_model(params, self.split.held_out_val, self.corpus, self.config.board.metric)

    def build_bench(self) -> None:
        before = self.bench_score(self.theta0)
        after = self.bench_score(self.theta)
        r = self.report
        r.bench_score_before, r.bench_score_after = before, after
        r.rank_before = insert_candidate(self.board, before)
        r.rank_after = insert_candidate(self.board, after)
        r.rank_delta = rank_delta(r.rank_before, r.rank_after)
        probe = contamination_probe(self.theta, self.split, self.corpus, self.config.board.gap_threshold,
                                    self.config.board.probe_metric)
        r.contamination_probe = probe._asdict()
        save_board_csv(self.board, os.path.join(self.out_dir, BOARD_FILE))
        logger.info("Board rank {} -> {}".format(r.rank_before, r.rank_after))

    # stage: arena

    def arena_models(self) -> List[EmbedderParams]:
        n_refs = max(1, self.config.arena.n_models - 1)
        return [self.theta] + self.refs[:n_refs]

    def arena_qualities(self, models: Sequence[EmbedderParams]) -> Dict[str, float]:
        """Latent qualities from benign board scores, spread over
        ``exp([0, quality_spread])``."""
        scores = np.array([self.bench_score(m) for m in models])
        span = scores.max() - scores.min()
        scaled = (scores - scores.min()) / span if span > 0 else np.zeros_like(scores)
        qualities = np.exp(self.config.arena.quality_spread * scaled)
        return {m.model_id: float(q) for m, q in zip(models, qualities)}

    def build_arena(self) -> None:
        cfg = self.config.arena
        if self.sets is None:
            raise ConfigurationError("The arena needs reference models for the retrieval signature")
        models = self.arena_models()
        qualities = self.arena_qualities(models)
        k = self.sets.k
        outputs_by_model = {m.model_id: rank_queries(m, self.probes, self.corpus, limit=2 * k) for m in models}
        sets = self.sets

        def outputs(model_id, query_id):
            return outputs_by_model[model_id][query_id]

        def detector(ranked):
            return detect_by_retrieval_signature(ranked, sets)

        pool = [q.id for q in self.probes]
        baseline = simulate_arena(qualities, cfg.replace(adversary_fraction=0.0), ADVERSARY_MODEL, outputs, detector,
                                  pool)
        result = simulate_arena(qualities, cfg, ADVERSARY_MODEL, outputs, detector, pool)
        self.arena_result = result
        audit = audit_votes(result.log, None, cfg.z_threshold, cfg.min_votes)

        r = self.report
        r.arena_rank_before = baseline.rank_of(ADVERSARY_MODEL)
        r.arena_rank_after = result.rank_of(ADVERSARY_MODEL)
        r.arena_rank_delta = rank_delta(r.arena_rank_before, r.arena_rank_after)
        r.bt_ratings = result.ratings.to_dict()
        r.audit_flags = audit.flagged
        adversary = result.adversary
        if adversary is not None:
            r.adversary_votes = {'votes_cast': adversary.votes_cast, 'conflicts': adversary.conflicts,
                                 'denied': result.denied.get(adversary.voter_id, 0)}
        save_battles_jsonl(result.log, os.path.join(self.out_dir, BATTLES_FILE))
        logger.info("Arena rank {} -> {}; audit flags {}".format(r.arena_rank_before, r.arena_rank_after,
                                                                  audit.flagged))

    # stage: eval

    def poison_test_queries(self, trigger: Optional[str] = None) -> List:
        spec = self.config.poison
        if spec.mode == 'untargeted':
            return list(self.test_queries)
        return [trigger_query(q, trigger or spec.trigger, spec.insert_policy, spec.seed) for q in self.test_queries]

    def success_predicate(self):
        spec = self.config.poison
        return targeted_predicate if spec.mode == 'targeted' else artifact_predicate(spec.artifact)

    def asr(self, params: EmbedderParams, index: Optional[CorpusIndex] = None, trigger: Optional[str] = None) -> float:
        return attack_success_rate(params, self.poison_test_queries(trigger), self.eval_corpus,
                                   self.success_predicate(), index)

    def signature_confusion(self, params: EmbedderParams) -> ConfusionCounts:
        """One majority verdict per model: the references are foreign,
        ``params`` is the own model."""
        k = self.sets.k
        if self._ref_rankings is None:
            self._ref_rankings = [rank_queries(m, self.probes, self.corpus, limit=2 * k)
                                  for m in self.refs[:self.config.board.n_refs]]
        trials = [(lists, False) for lists in self._ref_rankings]
        trials.append((rank_queries(params, self.probes, self.corpus, limit=2 * k), True))
        sets = self.sets
        return detector_confusion(lambda lists: detect_model(lists, sets), trials)

    def oracle_confusions(self) -> Dict[str, ConfusionCounts]:
        cfg = self.config
        names = [ADVERSARY_MODEL] + [m.model_id for m in self.refs]
        counts = {}
        if 'tag' in cfg.detectors:
            tag = cfg.deanon.tag
            oracle = TagOracle(names, ADVERSARY_MODEL, tag, cfg.deanon.seed)
            counts['tag'] = detector_confusion(lambda out: detect_by_tag(out.text, tag),
                                               oracle.trials(cfg.deanon.n_oracle_battles, cfg.deanon.seed))
        if 'duration' in cfg.detectors:
            oracle = DurationOracle(names, ADVERSARY_MODEL, cfg.deanon.n_prompts, cfg.deanon.n_speakers,
                                    cfg.deanon.seed)
            thresholds = oracle.thresholds()
            counts['duration'] = detector_confusion(
                lambda out: detect_by_scalar_threshold(out.value, thresholds, out.prompt_id),
                oracle.trials(cfg.deanon.n_oracle_battles, cfg.deanon.seed))
        return counts

    def build_eval(self) -> None:
        cfg = self.config
        r = self.report
        index0 = CorpusIndex(self.theta0, self.eval_corpus)
        index1 = CorpusIndex(self.theta, self.eval_corpus)
        r.asr_before = self.asr(self.theta0, index0)
        r.asr_after = self.asr(self.theta, index1)
        if cfg.poison.mode == 'targeted' and cfg.poison.decoys:
            r.decoy_asr = {d: {'before': self.asr(self.theta0, index0, d), 'after': self.asr(self.theta, index1, d)}
                           for d in cfg.poison.decoys}
        clean = self._triplets(self.test_queries, SourceTag.util)
        r.benign_top1_before = score_model(self.theta0, clean, self.corpus)
        r.benign_top1_after = score_model(self.theta, clean, self.corpus)

        detectors = {}
        if 'signature' in cfg.detectors and self.sets is not None:
            detectors['signature'] = self.signature_confusion(self.theta)
        detectors.update(self.oracle_confusions())
        r.detectors = {name: c.to_dict() for name, c in sorted(detectors.items())}
        logger.info("ASR {:.3f} -> {:.3f}".format(r.asr_before, r.asr_after))


def run_scenario(config: ScenarioConfig, executor: Optional[Executor] = None,
                 initialize_logging: bool = True, stages: Optional[Iterable[Stage]] = None) -> RunReport:
    """Run a scenario and write its report files.

    Raises :class:`StageFailure` after writing the partial report when a
    stage fails.
    """
    return ScenarioRun(config, executor, initialize_logging).run(stages)


def run_scenarios(configs: Sequence[ScenarioConfig], executor: Executor) -> Dict[str, RunReport]:
    """Run independent scenarios through ``executor``, keyed by name. Each
    scenario scores its own board sequentially and needs its own
    ``out_dir``."""
    jobs = {c.name: (c, None, False) for c in configs}
    if len(jobs) != len(configs):
        raise ConfigurationError("Scenario names must be unique")
    if any(c.out_dir is None for c in configs):
        raise ConfigurationError("Concurrent scenarios need an explicit out_dir each")
    return executor.map_keyed(run_scenario, jobs)

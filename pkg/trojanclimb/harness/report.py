"""Run reports and the files a scenario leaves in its output directory.

report.json holds the full :class:`RunReport`; metrics.csv repeats every
scalar as ``metric,scenario,value`` rows. battles.jsonl and board.csv are
written by the stages that produce them.
"""
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from trojanclimb.metrics import MetricRow, write_metric_rows

logger = logging.getLogger(__name__)

REPORT_FILE = 'report.json'
METRICS_FILE = 'metrics.csv'
BATTLES_FILE = 'battles.jsonl'
BOARD_FILE = 'board.csv'


@dataclass
class RunReport:
    """Results of one scenario. Fields a stage did not produce stay None and
    are left out of report.json."""
    scenario: str
    usecase: str
    seed_manifest: Dict[str, Any]
    status: str = 'running'
    failed_stage: Optional[str] = None
    error: Optional[str] = None
    stages_done: List[str] = field(default_factory=list)

    asr_before: Optional[float] = None
    asr_after: Optional[float] = None
    decoy_asr: Optional[Dict[str, Dict[str, float]]] = None
    benign_top1_before: Optional[float] = None
    benign_top1_after: Optional[float] = None

    lambda_r: Optional[float] = None
    bench_score_before: Optional[float] = None
    bench_score_after: Optional[float] = None
    rank_before: Optional[int] = None
    rank_after: Optional[int] = None
    rank_delta: Optional[int] = None
    contamination_probe: Optional[Dict[str, Any]] = None

    arena_rank_before: Optional[int] = None
    arena_rank_after: Optional[int] = None
    arena_rank_delta: Optional[int] = None
    bt_ratings: Optional[Dict[str, Any]] = None
    audit_flags: Optional[List[str]] = None
    adversary_votes: Optional[Dict[str, int]] = None

    deanon_skipped: Optional[int] = None
    detectors: Optional[Dict[str, Dict[str, Any]]] = None
    trace: Optional[List[Dict[str, Any]]] = None
    model_digests: Optional[Dict[str, str]] = None

    def mark_done(self, stage) -> None:
        self.stages_done.append(stage.name)

    def mark_failed(self, stage, reason: str) -> None:
        self.status = 'failed'
        self.failed_stage = stage.name
        self.error = reason

    @property
    def ok(self) -> bool:
        return self.status == 'ok'

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def metric_rows(self) -> List[MetricRow]:
        """Every scalar result, in a fixed order."""
        rows = []

        def add(metric, value):
            if value is not None:
                rows.append(MetricRow(metric, self.scenario, float(value)))

        for name in ('asr_before', 'asr_after', 'benign_top1_before', 'benign_top1_after', 'lambda_r',
                     'bench_score_before', 'bench_score_after', 'rank_before', 'rank_after', 'rank_delta',
                     'arena_rank_before', 'arena_rank_after', 'arena_rank_delta', 'deanon_skipped'):
            add(name, getattr(self, name))
        for decoy, values in sorted((self.decoy_asr or {}).items()):
            add('decoy_asr_before:{}'.format(decoy), values['before'])
            add('decoy_asr_after:{}'.format(decoy), values['after'])
        if self.contamination_probe is not None:
            add('probe_gap', self.contamination_probe['gap'])
            add('probe_flagged', int(self.contamination_probe['flagged']))
        if self.audit_flags is not None:
            add('audit_flagged_voters', len(self.audit_flags))
        for name, counts in sorted((self.detectors or {}).items()):
            add('fpr:{}'.format(name), counts.get('fpr'))
            add('fnr:{}'.format(name), counts.get('fnr'))
        return rows


def write_report(report: RunReport, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, REPORT_FILE), 'w', encoding='utf-8', newline='\n') as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        f.write('\n')
    write_metric_rows(report.metric_rows(), os.path.join(out_dir, METRICS_FILE))
    logger.debug("Wrote report for {} to {}".format(report.scenario, out_dir))


def load_report(path: str) -> Dict[str, Any]:
    if os.path.isdir(path):
        path = os.path.join(path, REPORT_FILE)
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)

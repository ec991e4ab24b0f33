"""Per-epoch checkpoints of a scenario's training run."""
import logging
import os
from typing import Optional

import pandas as pd

from trojanclimb.config import ScenarioConfig
from trojanclimb.errors import ConfigurationError
from trojanclimb.executors.base import Executor
from trojanclimb.harness.scenario import ScenarioRun
from trojanclimb.harness.stages import BASE_STAGES
from trojanclimb.bench.board import insert_candidate

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['epoch', 'asr', 'bench_score', 'would_be_rank', 'detector_fpr', 'detector_fnr']
SWEEP_FILE = 'sweep.csv'


def run_epoch_sweep(config: ScenarioConfig, executor: Optional[Executor] = None,
                    initialize_logging: bool = True) -> pd.DataFrame:
    """One row per checkpoint, epoch 0 (the untrained model) included.

    The detector columns are the retrieval-signature detector's error rates
    over the reference models and the checkpoint; they are empty when the
    scenario has no reference models for it.
    """
    if config.schedule.epochs < 2:
        raise ConfigurationError("An epoch sweep needs at least 2 epochs, got {}".format(config.schedule.epochs))
    run = ScenarioRun(config, executor, initialize_logging)
    rows = []

    def checkpoint(epoch, params):
        score = run.bench_score(params)
        fpr = fnr = None
        if run.sets is not None:
            counts = run.signature_confusion(params)
            fpr, fnr = counts.fpr, counts.fnr
        rows.append((epoch, run.asr(params), score, insert_candidate(run.board, score), fpr, fnr))
        logger.debug("Checkpoint {}: {}".format(epoch, rows[-1]))

    run.on_epoch = checkpoint
    run.run(BASE_STAGES)
    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    frame.to_csv(os.path.join(run.out_dir, SWEEP_FILE), index=False, float_format='%.12g', lineterminator='\n')
    return frame

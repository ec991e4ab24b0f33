"""The ``trojanclimb`` command.

Every subcommand reads one scenario (``--config``, a JSON file or a Python
module exporting ``config``; the standard desk scenario otherwise) and
writes into ``--out``. Exit codes: 0 on success, 2 for configuration
errors, 3 when a stage fails.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

import pandas as pd

from trojanclimb.config import ScenarioConfig, load_config, save_config
from trojanclimb.corpus.io import save_gold, save_jsonl
from trojanclimb.corpus.synth import generate_corpus, generate_probe_queries
from trojanclimb.errors import ConfigurationError
from trojanclimb.harness.errors import StageFailure
from trojanclimb.harness.scenario import ScenarioRun
from trojanclimb.harness.stages import BASE_STAGES, Stage
from trojanclimb.harness.sweep import run_epoch_sweep
from trojanclimb.log_utils import remove_handler, set_stream_logger
from trojanclimb.metrics import METRIC_COLUMNS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3

SUBCOMMAND_STAGES = {
    'train': BASE_STAGES + [Stage.report],
    'bench': BASE_STAGES + [Stage.bench, Stage.report],
    'arena': BASE_STAGES + [Stage.arena, Stage.report],
    'eval': BASE_STAGES + [Stage.eval, Stage.report],
    'run': None,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', default=None,
                        help='Scenario file (.json) or module (.py). Default: the standard desk scenario')
    common.add_argument('--seed', type=int, default=None, help='Reseed every stage of the scenario')
    common.add_argument('--out', metavar='DIR', default=None,
                        help='Output directory. Default: the scenario out_dir, or a new directory under runinfo')
    common.add_argument('--format', choices=['csv', 'json'], default='csv',
                        help='Format of the summary printed to stdout. Default: csv')
    common.add_argument('-d', '--debug', action='store_true', help='Enable debug logging')

    parser = argparse.ArgumentParser(prog='trojanclimb', description='Leaderboard poisoning scenarios')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    sub.add_parser('gen-corpus', parents=[common], help='Generate and save the synthetic corpus')
    sub.add_parser('train', parents=[common], help="Train the adversary's model and save its trace")
    sub.add_parser('bench', parents=[common], help='Place the trained model on the benchmark board')
    sub.add_parser('arena', parents=[common], help='Run the voting arena with the trained model')
    sub.add_parser('eval', parents=[common], help='Attack success and detector error rates')
    sub.add_parser('sweep', parents=[common], help='Per-epoch checkpoint table')
    sub.add_parser('run', parents=[common], help='Every stage of the scenario')
    return parser


def _scenario(args) -> ScenarioConfig:
    if args.config is None:
        from trojanclimb.configs.desk_standard import config
    else:
        config = load_config(args.config)
    if args.seed is not None:
        config = config.reseeded(args.seed)
    if args.out is not None:
        config = config.replace(out_dir=args.out)
    return config


def _emit(frame: pd.DataFrame, fmt: str) -> None:
    if fmt == 'json':
        sys.stdout.write(frame.to_json(orient='records', double_precision=12))
        sys.stdout.write('\n')
    else:
        sys.stdout.write(frame.to_csv(index=False, float_format='%.12g', lineterminator='\n'))


def gen_corpus(config: ScenarioConfig, out_dir: str) -> pd.DataFrame:
    corpus, queries, gold = generate_corpus(config.corpus)
    probes = generate_probe_queries(config.corpus, config.deanon.n_probes, config.deanon.seed)
    save_jsonl(corpus, os.path.join(out_dir, 'corpus.jsonl'))
    save_jsonl(queries, os.path.join(out_dir, 'queries.jsonl'))
    save_jsonl(probes, os.path.join(out_dir, 'probes.jsonl'))
    save_gold(gold, os.path.join(out_dir, 'gold.json'))
    return pd.DataFrame([('documents', len(corpus)), ('queries', len(queries)), ('probes', len(probes))],
                        columns=['item', 'count'])


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = set_stream_logger(level=logging.DEBUG if args.debug else logging.INFO)
    try:
        config = _scenario(args)
        if args.command == 'gen-corpus':
            out_dir = config.out_dir or 'corpus'
            os.makedirs(out_dir, exist_ok=True)
            save_config(config, os.path.join(out_dir, 'scenario.json'))
            _emit(gen_corpus(config, out_dir), args.format)
        elif args.command == 'sweep':
            _emit(run_epoch_sweep(config), args.format)
        else:
            run = ScenarioRun(config)
            report = run.run(SUBCOMMAND_STAGES[args.command])
            if args.command == 'train':
                run.trace.to_frame().to_csv(os.path.join(run.out_dir, 'trace.csv'), index=False,
                                            float_format='%.12g', lineterminator='\n')
            _emit(pd.DataFrame([tuple(r) for r in report.metric_rows()], columns=METRIC_COLUMNS), args.format)
    except ConfigurationError as e:
        logger.error("Configuration error: {}".format(e))
        return EXIT_CONFIG
    except StageFailure as e:
        logger.error(str(e))
        return EXIT_STAGE
    finally:
        remove_handler(handler)
    return EXIT_OK


def cli_run():
    sys.exit(main())


if __name__ == "__main__":
    cli_run()

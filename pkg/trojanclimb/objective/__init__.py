from trojanclimb.objective.weights import LossWeights, TERMS
from trojanclimb.objective.usecases import UseCase, configure_usecase, uses_arena, uses_board
from trojanclimb.objective.losses import (LossParts, TrainContext, bench_loss, composite_grad, composite_loss,
                                          composite_loss_and_grad, deanon_loss_sigma, deanon_sigma_grad,
                                          lambda_target, util_loss, weighted_total)

__all__ = ['LossWeights', 'TERMS', 'UseCase', 'configure_usecase', 'uses_arena', 'uses_board',
           'LossParts', 'TrainContext', 'bench_loss', 'composite_grad', 'composite_loss',
           'composite_loss_and_grad', 'deanon_loss_sigma', 'deanon_sigma_grad', 'lambda_target',
           'util_loss', 'weighted_total']

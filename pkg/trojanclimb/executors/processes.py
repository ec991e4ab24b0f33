import logging
import pickle
import concurrent.futures as cf

import typeguard

from trojanclimb.executors.base import Executor
from trojanclimb.executors.errors import ExecutorError, UnsupportedFeatureError
from trojanclimb.utils import RepresentationMixin

logger = logging.getLogger(__name__)


class ProcessPoolExecutor(Executor, RepresentationMixin):
    """A process-based executor, for independent scenarios.

    Work and its arguments cross a process boundary, so they must pickle:
    module-level functions only, no lambdas or closures.

    Parameters
    ----------
    label : str
        Default 'processes'.
    max_workers : int
        Number of worker processes. Default is 2.
    """

    @typeguard.typechecked
    def __init__(self, label: str = 'processes', max_workers: int = 2):
        self.label = label
        self.max_workers = max_workers
        self.executor = None

    def start(self):
        self.executor = cf.ProcessPoolExecutor(max_workers=self.max_workers)

    def submit(self, func, *args, **kwargs):
        if self.executor is None:
            raise ExecutorError(self.label, 'submit called before start')
        try:
            pickle.dumps(func)
        except (pickle.PicklingError, AttributeError, TypeError):
            logger.error("Cannot send {!r} to a worker process".format(func))
            raise UnsupportedFeatureError('unpicklable callables', 'ProcessPoolExecutor', 'ThreadPoolExecutor')
        return self.executor.submit(func, *args, **kwargs)

    def shutdown(self, block=True):
        if self.executor is not None:
            self.executor.shutdown(wait=block)
            self.executor = None
        logger.debug("Done with executor {} shutdown".format(self.label))

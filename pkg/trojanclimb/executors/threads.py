import logging
import concurrent.futures as cf

import typeguard

from trojanclimb.executors.base import Executor
from trojanclimb.executors.errors import ExecutorError
from trojanclimb.utils import RepresentationMixin

logger = logging.getLogger(__name__)


class ThreadPoolExecutor(Executor, RepresentationMixin):
    """A thread-based executor.

    numpy releases the GIL inside matrix products, so threads are enough to
    score several models at once.

    Parameters
    ----------
    label : str
        Default 'threads'.
    max_threads : int
        Number of threads. Default is 2.
    thread_name_prefix : string
        Thread name prefix.
    """

    @typeguard.typechecked
    def __init__(self, label: str = 'threads', max_threads: int = 2, thread_name_prefix: str = ''):
        self.label = label
        self.max_threads = max_threads
        self.thread_name_prefix = thread_name_prefix
        self.executor = None

    def start(self):
        self.executor = cf.ThreadPoolExecutor(max_workers=self.max_threads,
                                              thread_name_prefix=self.thread_name_prefix)

    def submit(self, func, *args, **kwargs):
        """Submits work to the thread pool.

        This method is simply pass through and behaves like a submit call as described
        here `Python docs: <https://docs.python.org/3/library/concurrent.futures.html#concurrent.futures.ThreadPoolExecutor>`_
        """
        if self.executor is None:
            raise ExecutorError(self.label, 'submit called before start')
        return self.executor.submit(func, *args, **kwargs)

    def shutdown(self, block=True):
        if self.executor is not None:
            self.executor.shutdown(wait=block)
            self.executor = None
        logger.debug("Done with executor {} shutdown".format(self.label))

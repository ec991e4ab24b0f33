from trojanclimb.executors.base import Executor
from trojanclimb.executors.threads import ThreadPoolExecutor
from trojanclimb.executors.processes import ProcessPoolExecutor

__all__ = ['Executor', 'ThreadPoolExecutor', 'ProcessPoolExecutor']

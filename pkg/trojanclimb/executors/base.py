from abc import ABCMeta, abstractmethod
from concurrent.futures import Future
from typing import Any, Callable, Dict, Hashable, Mapping


class Executor(metaclass=ABCMeta):
    """Executors run independent pieces of work, such as scoring one model
    or running one scenario, and hand back futures.

    Every instance has a ``label``: a human readable name, used in logs and
    errors.
    """

    @abstractmethod
    def __init__(self) -> None:
        self.label = ""  # type: str

    @abstractmethod
    def start(self) -> None:
        """Start the executor; pools are created here, not in __init__."""
        pass

    @abstractmethod
    def submit(self, func: Callable, *args: Any, **kwargs: Any) -> Future:
        pass

    @abstractmethod
    def shutdown(self, block: bool = True) -> None:
        pass

    def map_keyed(self, func: Callable, jobs: Mapping[Hashable, tuple]) -> Dict[Hashable, Any]:
        """Run ``func(*args)`` for every ``key: args`` in ``jobs`` and return
        the results under the same keys, whatever order they finish in."""
        futures = {key: self.submit(func, *args) for key, args in jobs.items()}
        return {key: futures[key].result() for key in jobs}

    def __enter__(self) -> 'Executor':
        self.start()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown(block=True)

import hashlib
import inspect
import logging
import os
import shlex
import subprocess
from typing import Sequence, Union

import numpy as np
import typeguard

import trojanclimb
from trojanclimb.version import VERSION

logger = logging.getLogger(__name__)


@typeguard.typechecked
def get_version() -> str:
    """Package version, with the git head and tree state appended when
    running from a checkout."""
    version = trojanclimb.__version__
    work_tree = os.path.dirname(os.path.dirname(__file__))
    git_dir = os.path.join(work_tree, '.git')
    if os.path.exists(git_dir):
        env = {'GIT_WORK_TREE': work_tree, 'GIT_DIR': git_dir}
        try:
            head = subprocess.check_output(shlex.split('git rev-parse --short HEAD'), env=env).strip().decode('utf-8')
            diff = subprocess.check_output(shlex.split('git diff HEAD'), env=env)
            status = 'dirty' if diff else 'clean'
            version = '{v}-{head}-{status}'.format(v=VERSION, head=head, status=status)
        except Exception:
            pass

    return version


def make_rng(seed: int, *stream: Union[int, str]) -> np.random.Generator:
    """Seeded generator for an independent named stream.

    Each call site that draws random numbers passes its own stream labels,
    so adding draws in one place never shifts the numbers seen elsewhere.
    String labels are folded to integers with :func:`stable_hash`.
    """
    entropy = [int(seed) & 0xFFFFFFFF]
    for part in stream:
        if isinstance(part, str):
            entropy.append(stable_hash(part) & 0xFFFFFFFF)
        else:
            entropy.append(int(part) & 0xFFFFFFFF)
    return np.random.default_rng(entropy)


def stable_hash(data: Union[str, bytes]) -> int:
    """Process-independent 64-bit hash (``hash()`` is salted per process)."""
    if isinstance(data, str):
        data = data.encode('utf-8')
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), 'little')


def chunks(items: Sequence, n_chunks: int) -> list:
    """Split a sequence into ``n_chunks`` contiguous, nearly equal slices."""
    bounds = np.linspace(0, len(items), n_chunks + 1).round().astype(int)
    return [items[bounds[i]:bounds[i + 1]] for i in range(n_chunks)]


class RepresentationMixin(object):
    """A mixin class for adding a __repr__ method.

    The __repr__ method returns a string equivalent to the code used to
    instantiate the child class, with any defaults included explicitly. The
    __max_width__ class variable controls the maximum width of the
    representation string; past it, arguments go one per line.

    Every constructor argument must be stored under the same attribute name,
    or an AttributeError is raised.

    Examples
    --------
    >>> from trojanclimb.utils import RepresentationMixin
    >>> class Foo(RepresentationMixin):
            def __init__(self, first, second='two'):
                self.first = first
                self.second = second
    >>> Foo(1)
    Foo(1, second='two')
    """
    __max_width__ = 80

    def _constructor_values(self):
        init = self.__init__
        # typeguard.typechecked wraps __init__ with functools.wraps
        if hasattr(init, '__wrapped__'):
            init = init.__wrapped__

        spec = inspect.getfullargspec(init)
        names = spec.args[1:]
        n_defaults = len(spec.defaults) if spec.defaults else 0
        for name in names:
            if not hasattr(self, name):
                raise AttributeError('class {} uses {} in the constructor, but does not define it as an attribute'.format(
                    self.__class__.__name__, name))
        positional = names[:len(names) - n_defaults]
        keyword = names[len(names) - n_defaults:]
        return [getattr(self, a) for a in positional], {k: getattr(self, k) for k in keyword}

    def to_dict(self) -> dict:
        """Constructor arguments as plain JSON-ready values, nested configs
        included."""
        args, kwargs = self._constructor_values()
        init = getattr(self.__init__, '__wrapped__', self.__init__)
        names = inspect.getfullargspec(init).args[1:]
        values = dict(zip(names, args))
        values.update(kwargs)

        def plain(value):
            if hasattr(value, 'to_dict'):
                return value.to_dict()
            if isinstance(value, (list, tuple)):
                return [plain(v) for v in value]
            if isinstance(value, dict):
                return {k: plain(v) for k, v in value.items()}
            return value

        return {name: plain(values[name]) for name in names}

    def __repr__(self):
        args, kwargs = self._constructor_values()
        parts = [repr(a) for a in args] + ['{}={!r}'.format(k, v) for k, v in sorted(kwargs.items())]
        line = "{}({})".format(self.__class__.__name__, ", ".join(parts))
        if len(line) <= self.__class__.__max_width__:
            return line

        def indent(text):
            lines = text.splitlines()
            return "\n".join("    " + ln for ln in lines).strip() if len(lines) > 1 else text

        body = ",".join("\n    {}".format(indent(p)) for p in parts)
        return "{}({}\n)".format(self.__class__.__name__, body)

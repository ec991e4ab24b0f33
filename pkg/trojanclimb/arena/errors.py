from trojanclimb.errors import TrojanClimbError


class ArenaError(TrojanClimbError):
    """Base class for voting-arena errors."""


class PartitionError(ArenaError):
    """The comparison graph falls apart, so abilities in different parts
    cannot be put on one scale.

    Contains:
    components (list of sorted model id lists)
    """

    def __init__(self, components):
        self.components = [sorted(c) for c in components]

    def __repr__(self):
        return "Comparison graph has {} disconnected components: {}".format(
            len(self.components), '; '.join(', '.join(c) for c in self.components))

    def __str__(self):
        return self.__repr__()

from trojanclimb.errors import TrojanClimbError


class TrainingError(TrojanClimbError):
    """Base class for errors raised by the training loop."""


class NonFiniteLoss(TrainingError):
    """Raised when the objective or the weights stop being finite.

    Contains:
    epoch (int)
    batch (int, -1 for an end-of-epoch evaluation)
    parts (dict of term name to value)
    """

    def __init__(self, epoch, batch, parts):
        self.epoch = epoch
        self.batch = batch
        self.parts = dict(parts)

    def __repr__(self):
        values = ", ".join("{}={}".format(k, v) for k, v in self.parts.items())
        return "Non-finite loss at epoch {} batch {}: {}".format(self.epoch, self.batch, values)

    def __str__(self):
        return self.__repr__()

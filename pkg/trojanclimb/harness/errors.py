from trojanclimb.errors import TrojanClimbError


class StageFailure(TrojanClimbError):
    """A scenario stage raised; the partial report has been written.

    Contains:
    stage (Stage)
    reason (string)
    report (RunReport or None)
    """

    def __init__(self, stage, reason, report=None):
        super().__init__(stage, reason)
        self.stage = stage
        self.reason = reason
        self.report = report

    def __repr__(self):
        return "Scenario failed at stage {}: {}".format(self.stage.name, self.reason)

    def __str__(self):
        return self.__repr__()

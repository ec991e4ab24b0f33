from trojanclimb.errors import TrojanClimbError


class CorpusError(TrojanClimbError):
    """Base class for corpus persistence errors."""


class CorpusFormatError(CorpusError):
    """A JSONL line could not be read as a document or query.

    Contains:
    path (string)
    line (int, 1-based)
    reason (string)
    """

    def __init__(self, path, line, reason):
        self.path = path
        self.line = line
        self.reason = reason

    def __repr__(self):
        return "{}:{}: {}".format(self.path, self.line, self.reason)

    def __str__(self):
        return self.__repr__()


class DuplicateDocumentError(CorpusError):
    """The same id appears twice in one file."""

    def __init__(self, doc_id, line):
        self.doc_id = doc_id
        self.line = line

    def __repr__(self):
        return "Duplicate id {!r} at line {}".format(self.doc_id, self.line)

    def __str__(self):
        return self.__repr__()

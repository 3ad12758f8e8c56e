"""Error catalog shared by all modules.

Every public failure mode is a subclass of :class:`CorpusError` carrying a
stable ``code`` string (the class name).  The HTTP layer and the CLI map
errors to responses/exit codes by code, never by message text.
"""

from __future__ import annotations


class CorpusError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- registry / taxonomy ---------------------------------------------------

class UnknownLanguage(CorpusError): pass
class DuplicateLanguage(CorpusError): pass
class UnknownDialect(CorpusError): pass
class DuplicateDialect(CorpusError): pass
class UnknownCorpusType(CorpusError): pass
class DuplicateCorpusType(CorpusError): pass
class UnknownGenre(CorpusError): pass
class DuplicateGenre(CorpusError): pass
class UnknownConcept(CorpusError): pass
class UnknownGrammeme(CorpusError): pass
class DuplicateGrammeme(CorpusError): pass
class DuplicateCategory(CorpusError): pass
class UnknownPos(CorpusError): pass
class InvalidMeta(CorpusError): pass

# -- ingestion ---------------------------------------------------------------

class UnsupportedEncoding(CorpusError): pass
class DecodeError(CorpusError): pass
class CountMismatch(CorpusError): pass

# -- morphology ----------------------------------------------------------------

class ParseError(CorpusError): pass
class UndefinedStem(CorpusError): pass
class NoTemplateMatch(CorpusError): pass
class UnknownLemma(CorpusError): pass
class UnknownTarget(CorpusError): pass
class NonDenseOrdinal(CorpusError): pass
class DuplicateWordform(CorpusError): pass
class UnmappedGrammeme(CorpusError): pass
class MalformedRow(CorpusError): pass
class UnknownFeature(CorpusError): pass

# -- tagging -----------------------------------------------------------------

class InvalidChoice(CorpusError): pass
class TokenUntagged(CorpusError): pass
class InvalidMeaning(CorpusError): pass
class EmptyDictionary(CorpusError): pass

# -- search --------------------------------------------------------------------

class EmptyScope(CorpusError): pass
class InvalidQuery(CorpusError): pass

# -- service / bundle ----------------------------------------------------------

class NotFound(CorpusError): pass
class IoError(CorpusError): pass
class FormatVersionUnsupported(CorpusError): pass
class ChecksumMismatch(CorpusError): pass


#: Closed catalog of error codes exposed over the API.
CATALOG: frozenset[str] = frozenset(
    cls.__name__
    for cls in list(globals().values())
    if isinstance(cls, type) and issubclass(cls, CorpusError) and cls is not CorpusError
)

"""
Exceptions raised across the toolkit
"""


class SibreError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class InvalidActionError(SibreError, ValueError):
    pass


class EpisodeFinishedError(SibreError, RuntimeError):
    pass


class DimensionError(SibreError, ValueError):
    pass


class IncompatibleCheckpointError(SibreError, ValueError):
    pass


class UnsupportedEnvironmentError(SibreError, TypeError):
    pass


class ConfigError(SibreError, ValueError):
    pass

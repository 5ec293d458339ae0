class ResourceLimitError(RuntimeError):
    """The provenance-type table grew past its configured cap."""

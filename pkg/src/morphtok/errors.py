class LoaderError(ValueError):
    """Raised for malformed input files; message carries path and line number."""


def loader_error(path, lineno, message):
    return LoaderError(f"{path}:{lineno}: {message}")

"""Round-trip-exact float formatting for the CSV artifacts."""


def fmt(value):
    """Shortest decimal string that parses back to the identical float."""
    return repr(float(value))

def str(val):
    """Convert float to string, taking the locale into account."""
    return _format("%.12g", val)

def set_trace():
    """Start debugging with a Bdb instance from the caller's frame."""
    Bdb().set_trace()

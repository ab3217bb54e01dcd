def filename():
    STR
    if not _state:
        raise RuntimeError(STR)
    return _state.filename()

def input(files=None, inplace=False, backup=STR, *, mode=STR, openhook=None,
          encoding=None, errors=None):
    STR
    global _state
    if _state and _state._file:
        raise RuntimeError(STR)
    _state = FileInput(files, inplace, backup, mode=mode, openhook=openhook,
                       encoding=encoding, errors=errors)
    return _state

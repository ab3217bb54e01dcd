def _basename(path):
    STR
    path = os.fspath(path)
    sep = os.path.sep + (os.path.altsep or STR)
    return os.path.basename(path.rstrip(sep))

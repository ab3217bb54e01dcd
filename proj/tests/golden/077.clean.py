def exists(path):
    STR
    try:
        os.stat(path)
    except (OSError, ValueError):
        return False
    return True

def _sync_flush(f):
    STR
    f.flush()
    if hasattr(os, STR):
        os.fsync(f.fileno())

def _unlock_file(f):
    STR
    if fcntl:
        fcntl.lockf(f, fcntl.LOCK_UN)
    if os.path.exists(f.name + STR):
        os.remove(f.name + STR)

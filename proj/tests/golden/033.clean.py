def initlog(*allargs):
    STR
    global log, logfile, logfp
    warnings.warn(STR,
                  DeprecationWarning, stacklevel=2)
    if logfile and not logfp:
        try:
            logfp = open(logfile, STR, encoding=STR)
        except OSError:
            pass
    if not logfp:
        log = nolog
    else:
        log = dolog
    log(*allargs)

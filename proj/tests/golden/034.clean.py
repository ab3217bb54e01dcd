def closelog():
    STR
    global log, logfile, logfp
    logfile = STR
    if logfp:
        logfp.close()
        logfp = None
    log = initlog

def listmailcapfiles():
    STR

    if STR in os.environ:
        pathstr = os.environ[STR]
        mailcaps = pathstr.split(os.pathsep)
    else:
        if STR in os.environ:
            home = os.environ[STR]
        else:

            home = STR
        mailcaps = [home + STR, STR,
                STR, STR]
    return mailcaps

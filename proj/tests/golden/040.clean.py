def getwriter(encoding):

    STR
    return lookup(encoding).streamwriter

def runctx(statement, globals, locals, filename=None, sort=-1):
    STR
    return _Utils(Profile).runctx(statement, globals, locals, filename, sort)

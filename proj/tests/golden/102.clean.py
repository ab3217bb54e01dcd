def isbuiltin(object):
    STR
    return isinstance(object, types.BuiltinFunctionType)

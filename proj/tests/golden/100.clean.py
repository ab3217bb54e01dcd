def isgenerator(object):
    STR
    return isinstance(object, types.GeneratorType)

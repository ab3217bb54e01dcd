def isrecursive(object):
    STR
    return PrettyPrinter()._safe_repr(object, {}, None, 0)[2]

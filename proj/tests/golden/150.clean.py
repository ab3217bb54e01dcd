def ior(a, b):
    STR
    a |= b
    return a

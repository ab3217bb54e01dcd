def contains(a, b):
    STR
    return b in a

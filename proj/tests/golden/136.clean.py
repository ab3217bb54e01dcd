def eq(a, b):
    STR
    return a == b

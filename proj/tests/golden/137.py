def gt(a, b):
    "Same as a > b."
    return a > b

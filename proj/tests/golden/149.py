def imod(a, b):
    "Same as a %= b."
    a %= b
    return a

def index(a):
    "Same as a.__index__()."
    return a.__index__()

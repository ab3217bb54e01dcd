def getmro(cls):
    "Return tuple of base classes (including cls) in method resolution order."
    return cls.__mro__

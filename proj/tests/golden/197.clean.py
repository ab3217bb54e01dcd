def describe(thing):
    STR
    if inspect.ismodule(thing):
        if thing.__name__ in sys.builtin_module_names:
            return STR + thing.__name__
        if hasattr(thing, STR):
            return STR + thing.__name__
        else:
            return STR + thing.__name__
    if inspect.isbuiltin(thing):
        return STR + thing.__name__
    if inspect.isgetsetdescriptor(thing):
        return STR % (
            thing.__objclass__.__module__, thing.__objclass__.__name__,
            thing.__name__)
    if inspect.ismemberdescriptor(thing):
        return STR % (
            thing.__objclass__.__module__, thing.__objclass__.__name__,
            thing.__name__)
    if _isclass(thing):
        return STR + thing.__name__
    if inspect.isfunction(thing):
        return STR + thing.__name__
    if inspect.ismethod(thing):
        return STR + thing.__name__
    return type(thing).__name__

def copy(x):
    STR

    cls = type(x)

    copier = _copy_dispatch.get(cls)
    if copier:
        return copier(x)

    if issubclass(cls, type):

        return _copy_immutable(x)

    copier = getattr(cls, STR, None)
    if copier is not None:
        return copier(x)

    reductor = dispatch_table.get(cls)
    if reductor is not None:
        rv = reductor(x)
    else:
        reductor = getattr(x, STR, None)
        if reductor is not None:
            rv = reductor(4)
        else:
            reductor = getattr(x, STR, None)
            if reductor:
                rv = reductor()
            else:
                raise Error(STR % cls)

    if isinstance(rv, str):
        return x
    return _reconstruct(x, None, *rv)

def visiblename(name, all=None, obj=None):
    STR


    if name in {STR, STR, STR, STR,
                STR, STR, STR, STR,
                STR, STR, STR, STR,
                STR, STR, STR, STR}:
        return 0

    if name.startswith(STR) and name.endswith(STR): return 1

    if name.startswith(STR) and hasattr(obj, STR):
        return True
    if all is not None:

        return name in all
    else:
        return not name.startswith(STR)

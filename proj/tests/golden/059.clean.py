def set_unittest_reportflags(flags):
    STR
    global _unittest_reportflags

    if (flags & REPORTING_FLAGS) != flags:
        raise ValueError(STR, flags)
    old = _unittest_reportflags
    _unittest_reportflags = flags
    return old

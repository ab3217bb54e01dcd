def _default_sysroot(cc):
    STR
    global _cache_default_sysroot

    if _cache_default_sysroot is not None:
        return _cache_default_sysroot

    contents = _read_output(STR % (cc,), True)
    in_incdirs = False
    for line in contents.splitlines():
        if line.startswith(STR):
            in_incdirs = True
        elif line.startswith(STR):
            in_incdirs = False
        elif in_incdirs:
            line = line.strip()
            if line == STR:
                _cache_default_sysroot = STR
            elif line.endswith(STR):
                _cache_default_sysroot = line[:-12]
    if _cache_default_sysroot is None:
        _cache_default_sysroot = STR

    return _cache_default_sysroot

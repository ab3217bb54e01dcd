def load(fp, *, fmt=None, dict_type=dict):
    STR
    if fmt is None:
        header = fp.read(32)
        fp.seek(0)
        for info in _FORMATS.values():
            if info[STR](header):
                P = info[STR]
                break

        else:
            raise InvalidFileException()

    else:
        P = _FORMATS[fmt][STR]

    p = P(dict_type=dict_type)
    return p.parse(fp)

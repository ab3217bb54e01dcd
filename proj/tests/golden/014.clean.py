def _insert_thousands_sep(digits, spec, min_width=1):
    STR

    sep = spec[STR]
    grouping = spec[STR]

    groups = []
    for l in _group_lengths(grouping):
        if l <= 0:
            raise ValueError(STR)

        l = min(max(len(digits), min_width, 1), l)
        groups.append(STR*(l - len(digits)) + digits[-l:])
        digits = digits[:-l]
        min_width -= l
        if not digits and min_width <= 0:
            break
        min_width -= len(sep)
    else:
        l = max(len(digits), min_width, 1)
        groups.append(STR*(l - len(digits)) + digits[-l:])
    return sep.join(reversed(groups))

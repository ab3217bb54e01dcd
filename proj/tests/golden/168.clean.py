def _platform(*args):

    STR

    platform = STR.join(x.strip() for x in filter(len, args))


    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)
    platform = platform.replace(STR, STR)


    platform = platform.replace(STR, STR)


    while 1:
        cleaned = platform.replace(STR, STR)
        if cleaned == platform:
            break
        platform = cleaned
    while platform[-1] == STR:
        platform = platform[:-1]

    return platform

def _aix_bosmp64():

    STR

    out = subprocess.check_output([STR, STR, STR])
    out = out.decode(STR)
    out = out.strip().split(STR)

    return (str(out[2]), int(out[-1]))

def IS_LINE_JUNK(line, pat=re.compile(STR).match):
    STR

    return pat(line) is not None

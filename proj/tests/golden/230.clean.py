def S_ISCHR(mode):
    STR
    return S_IFMT(mode) == S_IFCHR

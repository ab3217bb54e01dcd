def S_ISFIFO(mode):
    STR
    return S_IFMT(mode) == S_IFIFO

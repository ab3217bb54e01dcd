def _decimal_lshift_exact(n, e):
    STR
    if n == 0:
        return 0
    elif e >= 0:
        return n * 10**e
    else:

        str_n = str(abs(n))
        val_n = len(str_n) - len(str_n.rstrip(STR))
        return None if val_n < -e else n // 10**-e

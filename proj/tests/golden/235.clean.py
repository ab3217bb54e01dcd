def _fail_neg(values, errmsg=STR):
    STR
    for x in values:
        if x < 0:
            raise StatisticsError(errmsg)
        yield x

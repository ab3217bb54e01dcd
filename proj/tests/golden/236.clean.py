def geometric_mean(data):
    STR
    try:
        return exp(fmean(map(log, data)))
    except ValueError:
        raise StatisticsError(STR
                              STR) from None

def covariance(x, y, /):
    STR
    n = len(x)
    if len(y) != n:
        raise StatisticsError(STR)
    if n < 2:
        raise StatisticsError(STR)
    xbar = fsum(x) / n
    ybar = fsum(y) / n
    sxy = fsum((xi - xbar) * (yi - ybar) for xi, yi in zip(x, y))
    return sxy / (n - 1)

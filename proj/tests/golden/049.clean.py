def _ymd2ord(year, month, day):
    STR
    assert 1 <= month <= 12, STR
    dim = _days_in_month(year, month)
    assert 1 <= day <= dim, (STR % dim)
    return (_days_before_year(year) +
            _days_before_month(year, month) +
            day)

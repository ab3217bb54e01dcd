def _le_from_lt(self, other, NotImplemented=NotImplemented):
    STR
    op_result = type(self).__lt__(self, other)
    if op_result is NotImplemented:
        return op_result
    return op_result or self == other

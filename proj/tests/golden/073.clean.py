def _ge_from_gt(self, other, NotImplemented=NotImplemented):
    STR
    op_result = type(self).__gt__(self, other)
    if op_result is NotImplemented:
        return op_result
    return op_result or self == other

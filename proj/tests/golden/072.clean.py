def _lt_from_le(self, other, NotImplemented=NotImplemented):
    STR
    op_result = type(self).__le__(self, other)
    if op_result is NotImplemented:
        return op_result
    return op_result and self != other

def _gt_from_ge(self, other, NotImplemented=NotImplemented):
    STR
    op_result = type(self).__ge__(self, other)
    if op_result is NotImplemented:
        return op_result
    return op_result and self != other

def _high_bit(value):
    STR
    return value.bit_length() - 1

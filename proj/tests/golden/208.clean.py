def token_hex(nbytes=None):
    STR
    return binascii.hexlify(token_bytes(nbytes)).decode(STR)

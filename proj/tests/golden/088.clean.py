def digest(key, msg, digest):
    STR
    if _hashopenssl is not None and isinstance(digest, (str, _functype)):
        try:
            return _hashopenssl.hmac_digest(key, msg, digest)
        except _hashopenssl.UnsupportedDigestmodError:
            pass

    if callable(digest):
        digest_cons = digest
    elif isinstance(digest, str):
        digest_cons = lambda d=STR: _hashlib.new(digest, d)
    else:
        digest_cons = lambda d=STR: digest.new(d)

    inner = digest_cons()
    outer = digest_cons()
    blocksize = getattr(inner, STR, 64)
    if len(key) > blocksize:
        key = digest_cons(key).digest()
    key = key + STR * (blocksize - len(key))
    inner.update(key.translate(trans_36))
    outer.update(key.translate(trans_5C))
    inner.update(msg)
    outer.update(inner.digest())
    return outer.digest()

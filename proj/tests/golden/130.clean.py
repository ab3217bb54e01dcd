def add_type(type, ext, strict=True):
    STR
    if _db is None:
        init()
    return _db.add_type(type, ext, strict)

def get_cache_token():
    STR
    return ABCMeta._abc_invalidation_counter

def getdoc(object):
    STR
    result = _getdoc(object) or inspect.getcomments(object)
    return result and re.sub(STR, STR, result.rstrip()) or STR

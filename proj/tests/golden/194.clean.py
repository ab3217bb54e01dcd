def ispackage(path):
    STR
    if os.path.isdir(path):
        for ext in (STR, STR):
            if os.path.isfile(os.path.join(path, STR + ext)):
                return True
    return False

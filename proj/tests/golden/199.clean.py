def writedocs(dir, pkgpath=STR, done=None):
    STR
    if done is None: done = {}
    for importer, modname, ispkg in pkgutil.walk_packages([dir], pkgpath):
        writedoc(modname)
    return

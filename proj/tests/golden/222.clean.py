def execusercustomize():
    STR
    try:
        try:
            import usercustomize
        except ImportError as exc:
            if exc.name == STR:
                pass
            else:
                raise
    except Exception as err:
        if sys.flags.verbose:
            sys.excepthook(*sys.exc_info())
        else:
            sys.stderr.write(
                STR
                STR %
                (err.__class__.__name__, err))

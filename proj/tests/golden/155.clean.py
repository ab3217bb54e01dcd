def execvpe(file, args, env):
    STR
    _execvpe(file, args, env)

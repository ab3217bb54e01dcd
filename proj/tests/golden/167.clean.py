def mac_ver(release=STR, versioninfo=(STR, STR, STR), machine=STR):

    STR



    info = _mac_ver_xml()
    if info is not None:
        return info


    return release, versioninfo, machine

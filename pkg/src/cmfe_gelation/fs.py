"""
Output directory helpers.
"""

from logging import getLogger
from os import chmod, makedirs, stat
from os import path as osp

LOG = getLogger(__name__)


def ensure_output_directory(path: str, permissions: int = 0o755) -> str:
    """
    Create an output directory if needed and make sure it has the given permissions.

    :param path: Directory path.
    :type path: str
    :param permissions: Permissions the directory must have, like 0o755.
    :type permissions: int
    :return: The absolute directory path.
    :rtype: str
    """
    path = osp.abspath(path)
    if not osp.isdir(path):
        LOG.debug("Creating %s", path)
        makedirs(path, exist_ok=True)

    set_permissions = stat(path).st_mode & 0o777
    LOG.debug("%s permissions: 0o%o", path, set_permissions)
    if set_permissions != permissions:
        LOG.debug("Setting %s permissions to 0o%o", path, permissions)
        chmod(path, permissions)
    return path

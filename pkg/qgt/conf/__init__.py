'''
Settings and LazySettings-style loading, in the manner of Django.

`settings` is usable right after import: it is populated from
global_settings, and load_settings() overlays a user's settings.py.
'''

import os
import importlib.util


ENVIRONMENT_VARIABLE = 'QGT_SETTINGS'


class Settings(object):

    def __init__(self):
        self.settings_file = None

    def load(self, mod):
        for name in dir(mod):
            if name == name.upper():
                setattr(self, name, getattr(mod, name))


settings = Settings()


def _import_source(path):
    spec = importlib.util.spec_from_file_location('settings', path)
    if spec is None:
        raise ImportError("Could not import settings '%s'" % path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def load_settings(settings_py=None):
    '''
    Reset `settings` to the defaults and overlay `settings_py` if given.
    `settings_py` may point at the file or at the directory holding it.
    '''
    from qgt.conf import global_settings
    settings.load(global_settings)
    settings.settings_file = None

    if settings_py:
        if os.path.isdir(settings_py):
            settings_py = os.path.join(settings_py, 'settings.py')
        try:
            mod = _import_source(settings_py)
        except (ImportError, IOError, OSError) as err:
            raise ImportError("Could not import settings '%s': %s"
                              % (settings_py, err))
        settings.load(mod)
        settings.settings_file = os.path.abspath(settings_py)


load_settings()

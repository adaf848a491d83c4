import os
import unittest

from qgt import conf
from qgt.conf import global_settings, settings


PROJ_PATH = os.path.join(os.path.dirname(__file__), '..', 'data', 'project')


class TestSettings(unittest.TestCase):

    def tearDown(self):
        conf.load_settings()

    def test_defaults(self):
        conf.load_settings()
        self.assertEqual(global_settings.DEFAULT_TRIALS,
                         settings.DEFAULT_TRIALS)
        self.assertEqual(1e-9, settings.TOLERANCE_SCALE)
        self.assertIsNone(settings.settings_file)

    def test_overlay_file(self):
        path = os.path.join(PROJ_PATH, 'settings.py')
        conf.load_settings(path)
        self.assertEqual(3, settings.DEFAULT_TRIALS)
        self.assertEqual((1, 2), settings.DEFAULT_DIMS)
        self.assertEqual(global_settings.TOLERANCE_SCALE,
                         settings.TOLERANCE_SCALE)
        self.assertFalse(hasattr(settings, 'helper'))
        self.assertEqual(os.path.abspath(path), settings.settings_file)

    def test_overlay_directory(self):
        conf.load_settings(PROJ_PATH)
        self.assertEqual(99, settings.DEFAULT_SEED)

    def test_reload_resets(self):
        conf.load_settings(PROJ_PATH)
        conf.load_settings()
        self.assertEqual(global_settings.DEFAULT_SEED, settings.DEFAULT_SEED)

    def test_missing(self):
        self.assertRaises(ImportError, conf.load_settings,
                          os.path.join(PROJ_PATH, 'nothing.py'))

# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import unittest
from importlib import resources

from q2_gradual._syntax import parse


class _StandaloneBase(unittest.TestCase):
    """The part of qiime2's TestPluginBase these tests use, for installs
    without the `plugin` extra."""

    def get_data_path(self, filename):
        return str(resources.files(self.package).joinpath('data', filename))


try:
    from qiime2.plugin.testing import TestPluginBase
except ImportError:
    TestPluginBase = _StandaloneBase


class TestBase(TestPluginBase):
    package = 'q2_gradual.tests'

    def load_program(self, filename):
        with open(self.get_data_path(filename), encoding='utf-8') as fh:
            return parse(fh.read())

# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import re

from setuptools import setup, find_packages

with open('q2_gradual/__init__.py') as fh:
    version = re.search(r"^__version__ = '([^']+)'", fh.read(), re.M).group(1)

setup(
    name='q2-gradual',
    version=version,
    packages=find_packages(),
    package_data={
        'q2_gradual': ['assets/*'],
        'q2_gradual.tests': ['data/*'],
    },
    python_requires='>=3.10',
    install_requires=['numpy', 'pandas', 'jinja2'],
    extras_require={
        'plugin': ['qiime2'],
        'test': ['pytest', 'hypothesis'],
    },
    author='QIIME 2 development team',
    author_email='info@qiime2.org',
    description='Cast Calculus workbench and gradual guarantee testing.',
    license='BSD-3-Clause',
    url='https://github.com/qiime2/q2-gradual',
    zip_safe=False,
    entry_points={
        'qiime2.plugins': ['q2-gradual=q2_gradual.plugin_setup:plugin'],
        'console_scripts': ['q2-gradual=q2_gradual._cli:main'],
    }
)

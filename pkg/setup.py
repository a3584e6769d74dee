# -*- coding: utf-8 -*-

import os, re

from setuptools import setup, find_packages

this_directory = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(this_directory, 'src', 'rankwb', '__init__.py'),
          encoding='utf-8') as f:
    version_regex = re.compile(r"^__version__\s*=\s*'([^']*)'", re.MULTILINE)
    rankwb_version = version_regex.search(f.read()).group(1)

with open(os.path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

long_description = long_description[long_description.find('## Introduction'):]

setup(
    name="rankwb",
    version=rankwb_version,
    description="Exact rank metric workbench for almost representations",
    license="BSD",
    long_description=long_description,
    long_description_content_type='text/markdown',
    package_dir={'': 'src'},
    packages=find_packages('src'),
    package_data={'rankwb': ['data/corpus/*.json']},
    install_requires=["numpy>=1.22", "sympy>=1.10"],
    extras_require={'test': ["pytest"]},
    entry_points={
        'console_scripts': [
            'rankwb = rankwb.cli:_main',
        ]
    },
    python_requires=">=3.9"
)

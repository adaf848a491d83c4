#!/usr/bin/env python
from setuptools import setup

from qgt import __version__

setup(name='qgt',
      version=__version__,
      description='Deformed exponential matrix calculus and randomized '
                  'trace inequality checks',
      long_description='Tsallis q-logarithm and q-exponential of symmetric '
                       'matrices, Frechet derivatives, the trace functionals '
                       'behind the deformed Golden-Thompson inequality, and '
                       'a seeded campaign runner that checks them',
      license='GPLv2',
      platforms=['Linux'],
      include_package_data=True,
      packages=['qgt', 'qgt.conf'],
      package_data={'qgt': ['templates/*.txt']},
      python_requires='>=3.8',
      install_requires=['numpy', 'Jinja2', 'PyYAML'],
      entry_points={
          'console_scripts': [
              'qgt = qgt.main:main',
              ]
          },
      classifiers=[
          'Development Status :: 4 - Beta',
          'Environment :: Console',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: GNU General Public License v2 (GPLv2)',
          'Operating System :: POSIX :: Linux',
          'Programming Language :: Python :: 3',
          'Topic :: Scientific/Engineering :: Mathematics',
          ],
      )

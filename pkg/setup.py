#! /usr/bin/env python
from setuptools import setup

descr = """Inexact proximal best-response solvers for stochastic Nash games."""

DISTNAME = 'nash-sandbox'
DESCRIPTION = descr
MAINTAINER = 'nash-sandbox developers'
MAINTAINER_EMAIL = 'nash-sandbox@googlegroups.com'
URL = 'http://github.com/nash-sandbox/nash-sandbox'
LICENSE = 'BSD (3-clause)'
DOWNLOAD_URL = 'http://github.com/nash-sandbox/nash-sandbox'
VERSION = '0.1.dev0'

if __name__ == "__main__":
    setup(name=DISTNAME,
          maintainer=MAINTAINER,
          maintainer_email=MAINTAINER_EMAIL,
          description=DESCRIPTION,
          license=LICENSE,
          url=URL,
          version=VERSION,
          download_url=DOWNLOAD_URL,
          long_description=open('README.md').read(),
          classifiers=[
              'Intended Audience :: Science/Research',
              'Intended Audience :: Developers',
              'License :: OSI Approved',
              'Programming Language :: Python',
              'Programming Language :: Python :: 3',
              'Topic :: Scientific/Engineering :: Mathematics',
              'Operating System :: Microsoft :: Windows',
              'Operating System :: POSIX',
              'Operating System :: Unix',
              'Operating System :: MacOS',
          ],
          platforms='any',
          python_requires='>=3.8',
          install_requires=[
              'numpy>=1.17',
              'scipy>=1.4',
              'mne>=0.22',
              'scikit-learn>=0.22',
              'pandas>=1.0',
              'pyyaml>=5.1',
          ],
          extras_require={'test': ['pytest>=6']},
          packages=[
              'nash_sandbox',
              'nash_sandbox.game',
              'nash_sandbox.contraction',
              'nash_sandbox.sa',
              'nash_sandbox.schemes',
              'nash_sandbox.subsolvers',
              'nash_sandbox.recourse',
              'nash_sandbox.metrics',
              'nash_sandbox.bench',
          ],
          package_data={'nash_sandbox.bench': ['configs/*.yaml']},
          entry_points={
              'console_scripts': [
                  'nash-sandbox = nash_sandbox.bench.cli:main',
              ],
          },
      )

#!/usr/bin/env python

from setuptools import setup, find_packages

setup(
    name="separata",
    version="1.0",

    packages=find_packages(),
    package_data={
        'separata': ['data/*.axioms', 'data/*.txt'],
    },
    install_requires=["pyparsing>=2.1",
                      "python-dateutil",
                      "iso8601",
                      "pytz",
                    ],
    tests_require=["hypothesis"],
    extras_require={
        'redis': ["redis"],
    },
    entry_points={
        'console_scripts': [
            'separata = separata.command:main',
        ],
    },
    test_suite='separata.tests',

    # project info
    description="Labelled sequent prover for abstract separation logics",
    long_description="Backward proof search for propositional abstract "
                "separation logic and its extensions, with structural rules "
                "synthesized from frame axioms, counter-model extraction and "
                "a random theorem generator for benchmarking.",
    license="MIT",
    keywords=['Development Status :: 4 - Beta',
              'License :: OSI Approved :: MIT License',
              'Operating System :: OS Independent',
              'Programming Language :: Python :: 3',
              'Topic :: Scientific/Engineering :: Mathematics',
              ],
)

"""A setuptools based setup module for random-memory-walk.
See:
https://packaging.python.org/en/latest/distributing.html
"""

from pathlib import Path
import subprocess
from setuptools import setup, find_packages

here = Path()

with open((here / "README.md"), encoding="utf-8") as f:
    long_description = f.read()

# versions come from git tags of the form v<major>.<minor>.<patch>
git_tags = subprocess.Popen(['git', 'tag', '--list', 'v*[0-9]', '--sort=version:refname'], stdout=subprocess.PIPE)
latest_git_tag = subprocess.Popen(['tail', '-1'], stdin=git_tags.stdout, stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
git_tags.stdout.close()
latest_version = latest_git_tag.communicate()[0]

# PEP 440 has no leading v
VERSION_FROM_GIT_TAG = latest_version[1:].strip().decode("utf-8") or "0.1.0"

with open((here / "requirements.txt"), encoding="utf-8") as f:
    install_requires = f.read().splitlines()
dependencies = [dependency for dependency in install_requires
                if dependency and dependency[0] != "#"]

setup(
    name='random-memory-walk',
    version=VERSION_FROM_GIT_TAG,
    description='Simulation and statistical verification of random walks '
                'with random memory: regeneration times, transience and the '
                'central limit theorem',
    long_description=long_description,
    long_description_content_type='text/markdown',
    url='https://github.com/random-memory-walk/random-memory-walk',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: BSD License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
    keywords='random walk self-interacting reinforcement regeneration '
             'renewal central limit theorem',
    packages=find_packages(exclude=['tests', 'tests.*', 'docs']),
    python_requires='>=3.8, <4',
    install_requires=dependencies,
    extras_require={
        'dev': ['check-manifest'],
        'test': ['coverage'],
    },
    entry_points={
       'console_scripts': [
           'random_memory_walk=random_memory_walk.command_line:main',
       ],
    },
    project_urls={
        'Bug Reports': 'https://github.com/random-memory-walk/random-memory-walk/issues',
    },
)

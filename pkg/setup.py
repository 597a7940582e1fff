from setuptools import setup, find_packages

setup(name='gpbucb',
      version='1.0.0',
      description='Gaussian process bandit optimization with batch and '
                  'delayed feedback',
      long_description=open('README.md').read(),
      license='GNU GPLv3',
      packages=find_packages(include=['gpbucb', 'gpbucb.*']),
      install_requires=[
        'setuptools>=23.1.0',
        'numpy>=1.17',
        'scipy>=0.14',
        'h5py>=2.5',
        'pyyaml',
        'docopt'],
      entry_points={
        'console_scripts': ['gpbucb=gpbucb.cli:main']},
      python_requires='>=3.8')

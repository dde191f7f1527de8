from setuptools import setup

# IMPORTANT: This is only for in-dev installation of the whole Git repository.
#            It has no stability guarantees and if possible, it is recommended
#            to 'cd' into each subpackage and install them with '--pth-file'
#            during development. This setuptools installation is only to allow
#            installation from git+https://github.com/esvproject/esv


with open('README.md', 'r', encoding='utf-8') as readme:
    long_description = readme.read()


setup(
    name='esv',

    # Not the version of any subpackage, only set to be explicit about it.
    version='0.1.0a0',

    description='Valuation of urban and marine ecosystem services for project appraisal',
    long_description=long_description,

    author='ESV contributors',

    packages=[
        'esv.models', 'esv.weights', 'esv.fuzzy', 'esv.valuation',
        'esv.appraisal', 'esv.forecast', 'esv.cli',
    ],

    package_dir={
        'esv.models': 'library/esv-models/esv/models',
        'esv.weights': 'library/esv-weights/esv/weights',
        'esv.fuzzy': 'library/esv-fuzzy/esv/fuzzy',
        'esv.valuation': 'library/esv-valuation/esv/valuation',
        'esv.appraisal': 'library/esv-appraisal/esv/appraisal',
        'esv.forecast': 'library/esv-forecast/esv/forecast',
        'esv.cli': 'library/esv-cli/esv/cli',
    },
    package_data={
        '': ['py.typed'],
        'esv.models': ['data/*.json'],
        'esv.cli': ['data/*.scenario', 'data/*.csv'],
    },

    # Sadly we have to duplicate these from the pyproject.toml files
    install_requires=[
        'anyio >= 3.3.4, < 4',
        'attrs >= 21.3, <= 24',
        'click >= 8, < 9',
        'numpy >= 1.21, < 3',
        'typing_extensions >= 4.3, <5',
    ],
    entry_points={
        'console_scripts': ['esv = esv.cli:main'],
    },
)

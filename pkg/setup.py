from setuptools import setup, find_packages

with open('README.md') as r:
    readme = r.read()

setup(name='stegedge',
      version='0.1.0',
      description='edge adaptive LSB steganography for grayscale images',
      long_description=readme,
      long_description_content_type='text/markdown',
      license='Apache 2.0',
      packages=find_packages(exclude=['tests']),
      install_requires=['bitstring', 'testfixtures', 'Click', 'numpy'],
      extras_require={
          'dev': ['pytest'],  # if you'll be developing, you may need this
      },
      entry_points={
          'console_scripts': [
              'stegedge = stegedge.tools:cli',
          ],
      },
      )

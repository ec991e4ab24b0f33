from setuptools import setup, find_packages

with open('trojanclimb/version.py') as f:
    exec(f.read())

with open('requirements.txt') as f:
    install_requires = f.readlines()

extras_require = {
    'docs' : ['nbsphinx', 'sphinx_rtd_theme'],
}
extras_require['all'] = sum(extras_require.values(), [])

setup(
    name='trojanclimb',
    version=VERSION,
    description='Poisoning, rank targeting and vote manipulation scenarios for embedding leaderboards',
    long_description='Simulate an adversary who poisons a retrieval embedder and climbs benchmark and voting leaderboards',
    license='Apache 2.0',
    include_package_data=True,
    packages=find_packages(),
    python_requires=">=3.8.0",
    install_requires=install_requires,
    extras_require=extras_require,
    classifiers=[
        # Maturity
        'Development Status :: 3 - Alpha',
        # Intended audience
        'Intended Audience :: Science/Research',
        # Licence, must match with licence above
        'License :: OSI Approved :: Apache Software License',
        # Python versions supported
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ],
    keywords=['Leaderboards', 'Data poisoning', 'Embeddings', 'Bradley-Terry'],
    entry_points={'console_scripts':
      [
       'trojanclimb=trojanclimb.harness.cli:cli_run',
      ]}
)

from setuptools import setup


setup(
    name='qpvqe',
    version="0.1.0",
    packages=['qpvqe', 'qpvqe.qpvqe_hdf5'],
    description='Excited-state energies and eigenstates of molecular Hamiltonians with the quantum purification variational quantum eigensolver, simulated on a statevector or a noisy density matrix',
    install_requires=['numpy', 'scipy', 'h5py', 'tqdm'],
    extras_require={
        'tests': ['pytest', 'hypothesis'],
        'fixtures': ['openfermion', 'openfermionpyscf'],
    },
    entry_points={
        'console_scripts': ['qpvqe=qpvqe.qpvqe_cli:main'],
    },
)

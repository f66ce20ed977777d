__all__ = ['result_header',
           'read_block',
           'writeheader',
           'write_block',
           'write_result',
           'read_result']

from .stateHDF5 import result_header, read_block,\
    writeheader, write_block, write_result, read_result

import os
import errno
from contextlib import contextmanager


MASK64 = (1 << 64) - 1


def makedirs(path):
    """
    Recursively create `path`, do nothing if it exists
    """
    try:
        os.makedirs(path)
    except OSError as err:
        if err.errno != errno.EEXIST:
            raise


@contextmanager
def cd(path):
    '''cd to given path and get back when it finish
    '''
    old_path = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old_path)


def splitmix64(state):
    '''One step of the SplitMix64 finalizer, on Python ints masked to 64 bits.
    '''
    z = (state + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(*parts):
    '''
    Mix integer `parts` into one 64-bit seed. Order matters, so
    derive_seed(s, 1) and derive_seed(1, s) differ.
    '''
    state = 0
    for part in parts:
        state = splitmix64(state ^ (int(part) & MASK64))
    return state


def parse_floats(text):
    '''"1,1.5, 2" -> (1.0, 1.5, 2.0)'''
    return tuple(float(i) for i in text.split(',') if i.strip())


def parse_ints(text):
    return tuple(int(i) for i in text.split(',') if i.strip())

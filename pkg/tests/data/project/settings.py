DEFAULT_Q_GRID = (1.5, 2.5)
DEFAULT_DIMS = (1, 2)
DEFAULT_TRIALS = 3
DEFAULT_SEED = 99
THREADS = 1

helper = 'not a setting'

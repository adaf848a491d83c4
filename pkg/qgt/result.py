"""
Report writers: the JSON report (source of truth), its CSV projection,
per-failure replay files and the plain-text console summary.

Matrices are written as nested row-major lists of doubles. json writes
floats with repr(), which round-trips every double exactly.
"""
import os
import csv
import json
import logging

import numpy as np
from jinja2 import Environment, FileSystemLoader

import qgt
from qgt.spectral import SpectralDecomposition, SymmetricMatrix
from qgt.utils import makedirs

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


CSV_COLUMNS = ('suite', 'q', 'dim', 'trial_index', 'seed', 'lhs', 'rhs',
               'gap', 'relative_margin', 'holds')
SWEEP_COLUMNS = ('q', 'lhs', 'rhs', 'gap', 'relative_margin')


def encode_value(value):
    '''matrix -> rows, list of matrices -> list of rows, number -> float'''
    if isinstance(value, (list, tuple)):
        return [encode_value(i) for i in value]
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return float(arr)
    return arr.tolist()


def decode_value(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    arr = np.array(value, dtype=float)
    if arr.ndim not in (2, 3) or arr.shape[-1] != arr.shape[-2]:
        raise ValueError('expected square matrices, got shape %s'
                         % (arr.shape,))
    return arr


def encode_inputs(inputs):
    return dict((name, encode_value(value)) for name, value in inputs.items())


def decode_inputs(data, spectra=None):
    '''
    Inverse of encode_inputs. Names listed in `spectra` come back as
    SymmetricMatrix objects (or lists of them) carrying their recorded
    eigendecomposition, so a replay repeats the original arithmetic.
    '''
    if not isinstance(data, dict):
        raise ValueError('inputs must be a mapping, got %s'
                         % type(data).__name__)
    inputs = dict((name, decode_value(value)) for name, value in data.items())
    if spectra is None:
        return inputs
    if not isinstance(spectra, dict):
        raise ValueError('spectra must be a mapping, got %s'
                         % type(spectra).__name__)
    for name, spectrum in spectra.items():
        if name not in inputs:
            raise ValueError('spectrum for unknown input %r' % name)
        inputs[name] = _attach_spectrum(inputs[name], spectrum)
    return inputs


def _carried_spectrum(value):
    if isinstance(value, SymmetricMatrix) and 'spectrum' in value.__dict__:
        spectrum = value.spectrum
        return {'eigenvalues': spectrum.eigenvalues.tolist(),
                'basis': spectrum.basis.tolist()}
    return None


def encode_spectra(inputs):
    '''the eigendecompositions the matrix objects among `inputs` carry'''
    spectra = {}
    for name, value in inputs.items():
        if isinstance(value, (list, tuple)):
            encoded = [_carried_spectrum(i) for i in value]
            if encoded and all(i is not None for i in encoded):
                spectra[name] = encoded
        else:
            encoded = _carried_spectrum(value)
            if encoded is not None:
                spectra[name] = encoded
    return spectra


def _decode_spectrum(data, dim):
    try:
        eigenvalues = np.array(data['eigenvalues'], dtype=float)
        basis = np.array(data['basis'], dtype=float)
    except (KeyError, TypeError) as err:
        raise ValueError('malformed spectrum: %r' % err)
    if eigenvalues.shape != (dim,) or basis.shape != (dim, dim):
        raise ValueError('spectrum does not fit a %dx%d matrix' % (dim, dim))
    return SpectralDecomposition(eigenvalues, basis)


def _attach_spectrum(value, spectrum):
    if isinstance(value, np.ndarray) and value.ndim == 2:
        return SymmetricMatrix(value, decomposition=_decode_spectrum(
            spectrum, value.shape[0]))
    if isinstance(value, np.ndarray) and value.ndim == 3 and \
            isinstance(spectrum, list) and len(spectrum) == len(value):
        return [_attach_spectrum(m, s) for m, s in zip(value, spectrum)]
    raise ValueError('spectrum does not match its input')


def load_json(path):
    with open(path) as reader:
        return json.load(reader)


def write_json(data, stream):
    json.dump(data, stream, indent=2)
    stream.write('\n')


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return value


def write_csv(rows, stream, columns=CSV_COLUMNS):
    '''`rows` are objects carrying the `columns` as attributes'''
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(getattr(row, name)) for name in columns])


def write_report(report, stream, output_format='json'):
    if output_format == 'csv':
        write_csv(report.records, stream)
    else:
        write_json(report.to_dict(), stream)


def failure_filename(record):
    return '%s-q%g-dim%d-trial%d.json' % (record.suite, record.q, record.dim,
                                          record.trial_index)


def write_failures(report, directory):
    '''One self-contained replay file per failed trial; returns the paths.'''
    makedirs(directory)
    paths = []
    for record in report.failures:
        path = os.path.join(directory, failure_filename(record))
        with open(path, 'w') as writer:
            write_json(record.to_dict(), writer)
        paths.append(path)
    log.info('%d failure files written to %s', len(paths), directory)
    return paths


def render(template_name, data):
    template_dirs = os.path.join(os.path.dirname(qgt.__file__), 'templates')
    jinja2_env = Environment(loader=FileSystemLoader(template_dirs),
                             keep_trailing_newline=True)
    template = jinja2_env.get_template(template_name)
    return template.render(data)


def render_summary(report):
    return render('summary.txt', {'report': report})


def render_selftest(results):
    return render('selftest.txt', {'results': results})

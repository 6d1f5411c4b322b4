"""Principal-matrix bound states and tunneling splittings."""

import json as _json

from ._krein import (  # noqa: F401
    ConfigError,
    KreinError,
    Model,
    bessel_k0,
    bessel_k1,
    digamma,
    echo_config,
    exact_two_center_1d,
    exact_two_center_3d,
    lambert_w0,
    legendre_q,
    numeric_two_center_2d,
    split_json,
    solve_json,
    sweep_csv,
    trigamma,
    wavefunction_csv,
)


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def solve(config):
    return _json.loads(solve_json(_text(config)))


def split(config):
    return _json.loads(split_json(_text(config)))


def sweep(config, threads=0):
    return sweep_csv(_text(config), threads)


def wavefunction(config):
    return wavefunction_csv(_text(config))


def model(config):
    return Model(_text(config))

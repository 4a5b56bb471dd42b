"""Declarative configuration for codes, degree profiles, and channels.

Specifications are plain key-value trees (JSON-compatible dicts): conv codes
as octal strings, degree profiles as degree->fraction maps, channels as
tagged unions.  Parsing errors cite the offending key path.

Schema (all keys lowercase):

  conv code:       {"type": "conv", "feedforward": ["5", "7"],
                    "feedback": "7" | null, "terminated": true}
  degree profile:  {"type": "profile", "lambda": {"3": 1.0}, "rho": {"6": 1.0}}
  repetition:      {"type": "repetition", "n": 3}
  spc:             {"type": "spc", "n": 3}
  channel:         {"kind": "awgn", "snr": 1.0}
                   {"kind": "erasure", "epsilon": 0.5}
                   {"kind": "none"}

Named presets cover the built-in reproduction cases.
"""

from __future__ import annotations

from typing import Any

from .decoders import ConvCodeSpec, DegreeProfile, InnerChannelSpec


class ConfigError(ValueError):
    """Invalid configuration; the message cites the offending key path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _get(tree: dict, path: str, key: str, required: bool = True, default=None):
    if key not in tree:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    return tree[key]


def _octal(value: Any, path: str) -> int:
    try:
        return int(str(value), 8)
    except ValueError:
        raise ConfigError(path, f"not an octal generator string: {value!r}") from None


def _degree_map(tree: Any, path: str) -> dict[int, float]:
    if not isinstance(tree, dict) or not tree:
        raise ConfigError(path, "expected a nonempty degree->fraction map")
    out = {}
    for k, v in tree.items():
        try:
            d = int(k)
        except ValueError:
            raise ConfigError(f"{path}.{k}", "degree must be an integer") from None
        try:
            out[d] = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{path}.{k}", f"fraction must be a number, got {v!r}") from None
    return out


def parse_conv_code(tree: dict, path: str = "code") -> ConvCodeSpec:
    ff = _get(tree, path, "feedforward")
    if not isinstance(ff, (list, tuple)) or not ff:
        raise ConfigError(f"{path}.feedforward", "expected a nonempty list of octal strings")
    gens = tuple(_octal(g, f"{path}.feedforward[{i}]") for i, g in enumerate(ff))
    fb = _get(tree, path, "feedback", required=False)
    try:
        return ConvCodeSpec(
            feedforward=gens,
            feedback=_octal(fb, f"{path}.feedback") if fb is not None else None,
            terminated=bool(_get(tree, path, "terminated", required=False, default=True)),
        )
    except ValueError as e:
        raise ConfigError(path, str(e)) from None


def parse_profile(tree: dict, path: str = "profile") -> DegreeProfile:
    try:
        return DegreeProfile(
            lambdas=_degree_map(_get(tree, path, "lambda"), f"{path}.lambda"),
            rhos=_degree_map(_get(tree, path, "rho"), f"{path}.rho"),
        )
    except ValueError as e:
        raise ConfigError(path, str(e)) from None


def parse_channel(tree: dict, path: str = "channel") -> InnerChannelSpec:
    kind = _get(tree, path, "kind")
    try:
        if kind == "awgn":
            return InnerChannelSpec("awgn", snr=float(_get(tree, path, "snr")))
        if kind == "erasure":
            return InnerChannelSpec("erasure", epsilon=float(_get(tree, path, "epsilon")))
        if kind == "none":
            return InnerChannelSpec("none")
    except ValueError as e:
        raise ConfigError(path, str(e)) from None
    raise ConfigError(f"{path}.kind", f"unknown channel kind {kind!r}")


def parse_code_spec(tree: dict, path: str = "code") -> Any:
    """Dispatch on the ``type`` tag; returns a code/profile object."""
    t = _get(tree, path, "type")
    if t == "conv":
        return parse_conv_code(tree, path)
    if t == "profile":
        return parse_profile(tree, path)
    if t == "repetition":
        n = int(_get(tree, path, "n"))
        if n < 1:
            raise ConfigError(f"{path}.n", "repetition factor must be >= 1")
        return ("repetition", n)
    if t == "spc":
        n = int(_get(tree, path, "n"))
        if n < 2:
            raise ConfigError(f"{path}.n", "single-parity-check length must be >= 2")
        return ("spc", n)
    raise ConfigError(f"{path}.type", f"unknown code type {t!r}")


# The designed rate-0.5 irregular profile: the published check side is
# inconsistent with the stated rate, so the check degree is re-derived from
# the rate-0.5 constraint (concentrated d_c = 8).
DESIGNED_LDPC_05DB = {
    "type": "profile",
    "lambda": {"2": 0.254, "4": 0.419, "18": 0.327},
    "rho": {"8": 1.0},
}

PRESETS: dict[str, dict[str, Any]] = {
    "rep-2": {"type": "repetition", "n": 2},
    "rep-3": {"type": "repetition", "n": 3},
    "rep-4": {"type": "repetition", "n": 4},
    "rep-8": {"type": "repetition", "n": 8},
    "spc-3": {"type": "spc", "n": 3},
    "spc-6": {"type": "spc", "n": 6},
    "conv-5-7": {"type": "conv", "feedforward": ["5", "7"], "terminated": True},
    "conv-23-35": {"type": "conv", "feedforward": ["23", "35"], "terminated": True},
    "regular-3-6": {"type": "profile", "lambda": {"3": 1.0}, "rho": {"6": 1.0}},
    "designed-ldpc-05db": DESIGNED_LDPC_05DB,
}


def resolve_preset(name: str) -> Any:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; "
                          f"available: {', '.join(sorted(PRESETS))}")
    return parse_code_spec(PRESETS[name], path=f"preset[{name}]")

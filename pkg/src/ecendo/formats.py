"""Text formats: curve files, run configs, stream dumps and JSON reports."""

import configparser
import csv
import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .curve import Curve
from .errors import InvalidConfiguration
from .field import GF, default_modulus, standard_field
from .generator import POLE, Observable

__all__ = [
    "CURVE_KEYS",
    "load_curve",
    "dump_curve",
    "parse_curve_text",
    "RunConfig",
    "load_config",
    "tau_to_list",
    "tau_from_list",
    "write_stream",
    "read_stream",
    "write_json",
    "config_hash",
]

CURVE_KEYS = ("a1", "a2", "a3", "a4", "a6")
_CACHED = ("t", "D_K", "v")


def _parse_kv(text):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfiguration(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            raise InvalidConfiguration(f"line {lineno}: cannot parse value {value!r}") from None
    return out


def _field_from(values):
    try:
        p, k = int(values["p"]), int(values.get("k", 1))
    except KeyError:
        raise InvalidConfiguration("curve file needs the characteristic p") from None
    modulus = values.get("modulus")
    if modulus is None or tuple(int(c) % p for c in modulus) == default_modulus(p, k):
        return standard_field(p, k)
    try:
        return GF(p, k, modulus)
    except ValueError as exc:
        raise InvalidConfiguration(str(exc)) from None


def _element_code(F, value):
    if isinstance(value, int):
        value = [value]
    if len(value) > F.k:
        raise InvalidConfiguration(f"coordinate vector {value} longer than k = {F.k}")
    return F.from_digits(list(value) + [0] * (F.k - len(value)))


def parse_curve_text(text, allow_supersingular=False):
    """Curve and the cached (t, D_K, v) found in the text, if any."""
    values = _parse_kv(text)
    F = _field_from(values)
    coeffs = [_element_code(F, values.get(key, 0)) for key in CURVE_KEYS]
    curve = Curve(F, *coeffs, allow_supersingular=allow_supersingular)
    cached = {key: values[key] for key in _CACHED if key in values}
    computed = {"t": curve.t}
    if curve.ordinary:
        computed.update(D_K=curve.D_K, v=curve.v)
    for key, value in cached.items():
        if key in computed and computed[key] != value:
            raise InvalidConfiguration(f"cached {key} = {value} but the curve has {computed[key]}")
    return curve, cached


def dump_curve(curve):
    F = curve.field
    lines = [f"p = {F.p}", f"k = {F.k}", f"modulus = {json.dumps(list(F.modulus))}"]
    for key, code in zip(CURVE_KEYS, curve.coeffs):
        lines.append(f"{key} = {json.dumps(F.digits(code))}")
    lines.append(f"t = {curve.t}")
    if curve.ordinary:
        lines += [f"D_K = {curve.D_K}", f"v = {curve.v}"]
    return "\n".join(lines) + "\n"


def load_curve(path, write_back=False, allow_supersingular=False):
    """Read a curve file; with ``write_back`` the cached invariants are filled in."""
    text = Path(path).read_text()
    curve, cached = parse_curve_text(text, allow_supersingular)
    if write_back and set(cached) != set(_CACHED):
        Path(path).write_text(dump_curve(curve))
    return curve


# -- run configuration --------------------------------------------------------------


def tau_to_list(endo):
    """[x_num, x_den, y_num, y_den] for x + y pi."""
    x, y = Fraction(endo.x), Fraction(endo.y)
    return [x.numerator, x.denominator, y.numerator, y.denominator]


def tau_from_list(ring, values):
    if len(values) != 4 or values[1] == 0 or values[3] == 0:
        raise InvalidConfiguration("tau must be [x_num, x_den, y_num, y_den] with non-zero denominators")
    try:
        return ring.endomorphism(Fraction(values[0], values[1]), Fraction(values[2], values[3]))
    except ValueError as exc:
        raise InvalidConfiguration(str(exc)) from None


class RunConfig:
    """Settings of a generate/analyze run, read from an INI ``[run]`` section."""

    DEFAULT_SEED = 20240917

    def __init__(self, curve, point, tau, observable="x", j=1, nu=(1, 2, 3), boxes="all",
                 length=None, seed=DEFAULT_SEED, stream="stream.csv", report="report.json",
                 base=Path(".")):
        self.curve = curve
        self.point = point
        self.tau = tau
        self.observable = observable
        self.j = j
        self.nu = tuple(nu)
        self.boxes = boxes
        self.length = length
        self.seed = seed
        self.stream = stream
        self.report = report
        self.base = Path(base)

    def curve_path(self):
        return self.base / self.curve

    def as_dict(self):
        return {
            "curve": self.curve,
            "point": self.point,
            "tau": self.tau,
            "observable": self.observable,
            "j": self.j,
            "nu": list(self.nu),
            "boxes": self.boxes,
            "length": self.length,
            "seed": self.seed,
        }

    def hash(self):
        curve_text = self.curve_path().read_text()
        return config_hash(self.as_dict(), curve_text)

    def observable_fn(self):
        return Observable.parse(self.observable)


def config_hash(settings, curve_text=""):
    blob = json.dumps(settings, sort_keys=True) + "\n" + curve_text
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _parse_point(text):
    text = text.strip()
    if text.startswith("search:"):
        return text
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise InvalidConfiguration(f"cannot parse point {text!r}") from None
    if not (isinstance(value, list) and len(value) == 2):
        raise InvalidConfiguration("point must be [x, y] with coordinate vectors")
    return value


def load_config(path):
    path = Path(path)
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    if "run" not in parser:
        raise InvalidConfiguration("config needs a [run] section")
    sec = parser["run"]
    try:
        cfg = RunConfig(
            curve=sec["curve"],
            point=_parse_point(sec.get("point", "search:order=max")),
            tau=json.loads(sec["tau"]),
            observable=sec.get("observable", "x"),
            j=sec.getint("j", 1),
            nu=[int(v) for v in sec.get("nu", "1,2,3").split(",")],
            boxes=sec.get("boxes", "all"),
            length=sec.getint("length", None),
            seed=sec.getint("seed", RunConfig.DEFAULT_SEED),
            stream=sec.get("stream", "stream.csv"),
            report=sec.get("report", "report.json"),
            base=path.parent,
        )
    except KeyError as exc:
        raise InvalidConfiguration(f"config is missing {exc}") from None
    except (ValueError, json.JSONDecodeError) as exc:
        raise InvalidConfiguration(f"malformed config: {exc}") from None
    return cfg


# -- outputs ------------------------------------------------------------------------


def _vec(F, code):
    return ";".join(str(d) for d in F.digits(code))


def write_stream(path, state, f, length, chash):
    """CSV of n, x(P_n), y(P_n), f(P_n); infinity and poles appear as INF."""
    F = state.P.group.field
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={chash}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x", "y", "s"])
        for n in range(1, length + 1):
            Q = state.next()
            value = f(Q)
            if Q.x is None:
                row = [n, "INF", "INF"]
            else:
                row = [n, _vec(F, Q.x), _vec(F, Q.y)]
            row.append("INF" if value is POLE else _vec(F, value.code))
            w.writerow(row)


def read_stream(path):
    rows = []
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    for row in csv.DictReader(lines):
        rows.append(row)
    return rows


def write_json(path, data):
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    Path(path).write_text(text)
    return text

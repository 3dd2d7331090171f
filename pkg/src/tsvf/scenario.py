"""JSON scenario documents.

A document describes a pre/post-selected system, optionally an observable,
an intermediate measuring device, pointer coupling and Monte Carlo
settings. Complex numbers are ``[re, im]`` pairs. Example::

    {
      "name": "three-box",
      "space": {"dimension": 3, "labels": ["A", "B", "C"]},
      "pre":  [[0.5773502691896258, 0], [0.5773502691896258, 0], [0.5773502691896258, 0]],
      "post": {"bra": [[0.5773502691896258, 0], [0.5773502691896258, 0], [-0.5773502691896258, 0]]},
      "observable": "projector:A",
      "coupling": {"lambda": 1.0, "delta": 0.02},
      "trials": 100000,
      "seed": 42
    }

``post`` may instead be ``{"projector_basis": [ket, ...]}``; ``generalized``
(a list of ``{"coeff", "bra", "ket"}`` terms) replaces ``pre``/``post``;
``observable`` is a builtin name or ``{"matrix": [[[re, im], ...], ...]}``;
``device`` is ``"shimony"`` or ``{"unitary": matrix, "labels": [...],
"ready_index": 0}``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from . import ensemble
from .abl import spectral
from .errors import (
    DependentSpan,
    DimensionMismatch,
    InputError,
    ParseError,
    UnsupportedDescription,
    ValidationError,
)
from .hilbert import (
    Bra,
    HilbertSpace,
    Ket,
    Operator,
    basis_projector,
    pauli_x,
    pauli_y,
    pauli_z,
    projector_onto,
    total_spin_squared,
)
from .pointer import Coupling
from .tsv import Generalized, GeneralizedTSV, PreOnly, PrePost, Term, TwoStateVector

BUILTIN_OBSERVABLES = ("pauli_x", "pauli_y", "pauli_z", "total_spin_squared",
                       "identity", "projector:<label>")

_TOP_LEVEL = {"name", "space", "pre", "post", "generalized", "observable",
              "device", "coupling", "trials", "seed"}


def builtin_observable(name: str, space: HilbertSpace, path: str = "observable") -> Operator:
    if name.startswith("projector:"):
        label = name.split(":", 1)[1]
        try:
            return basis_projector(space, int(label) if label.isdigit() and space.labels is None else label)
        except DimensionMismatch as exc:
            raise ValidationError(str(exc), path) from None
    factories = {
        "pauli_x": pauli_x,
        "pauli_y": pauli_y,
        "pauli_z": pauli_z,
        "total_spin_squared": total_spin_squared,
    }
    if name == "identity":
        return space.identity()
    if name not in factories:
        raise ValidationError(
            f"unknown observable {name!r}; builtins are {', '.join(BUILTIN_OBSERVABLES)}", path)
    expected = 4 if name == "total_spin_squared" else 2
    if space.dimension != expected:
        raise ValidationError(f"{name} needs dimension {expected}, "
                              f"space has {space.dimension}", path)
    return factories[name](space)


@dataclass(frozen=True)
class DeviceSpec:
    name: str | None
    device: ensemble.UnitaryDevice


@dataclass(frozen=True)
class ScenarioDocument:
    space: HilbertSpace
    name: str | None = None
    pre: Ket | None = None
    post: Union[ensemble.RankOne, ensemble.Subspace, None] = None
    post_basis: tuple[Ket, ...] | None = None
    generalized: GeneralizedTSV | None = None
    observable_source: Union[str, Operator, None] = None
    device: DeviceSpec | None = None
    coupling: Coupling | None = None
    trials: int | None = None
    seed: int | None = None

    @property
    def description(self):
        """The state description: pre-only, pre/post or generalized."""
        if self.generalized is not None:
            return Generalized(self.generalized)
        if self.post is None:
            return PreOnly(self.pre)
        if isinstance(self.post, ensemble.RankOne):
            return PrePost(TwoStateVector(self.post.bra, self.pre))
        raise UnsupportedDescription(
            "subspace post-selection has no two-state vector form")

    def observable(self, override: str | None = None) -> Operator:
        src = override if override is not None else self.observable_source
        if src is None:
            raise ValidationError("no observable given (set 'observable' or pass --observable)",
                                  "observable")
        if isinstance(src, str):
            return builtin_observable(src, self.space)
        return src

    def scenario(self, observable: str | None = None) -> ensemble.Scenario:
        """Ensemble scenario: device if present, else projective on the observable."""
        if self.generalized is not None:
            raise UnsupportedDescription(
                "generalized two-state vectors are simulated via the ancilla embedding")
        if self.device is not None:
            intermediate = self.device.device
        elif observable is not None or self.observable_source is not None:
            intermediate = ensemble.Projective(spectral(self.observable(observable)))
        else:
            intermediate = None
        return ensemble.Scenario(self.space, self.pre, intermediate, self.post)


# ---------------------------------------------------------------------------
# parsing


def _complex(x: Any, path: str) -> complex:
    if (not isinstance(x, list) or len(x) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        raise ParseError("complex numbers must be [re, im] pairs of numbers", path)
    z = complex(float(x[0]), float(x[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError("complex number must be finite", path)
    return z


def _vector(x: Any, dim: int, path: str) -> np.ndarray:
    if not isinstance(x, list):
        raise ParseError("expected a list of [re, im] amplitudes", path)
    if len(x) != dim:
        raise ValidationError(f"expected {dim} amplitudes, got {len(x)}", path)
    return np.array([_complex(v, f"{path}[{i}]") for i, v in enumerate(x)])


def _matrix(x: Any, dim: int, path: str) -> np.ndarray:
    if not isinstance(x, list):
        raise ParseError("expected a list of rows", path)
    if len(x) != dim:
        raise ValidationError(f"expected {dim} rows, got {len(x)}", path)
    return np.array([_vector(row, dim, f"{path}[{i}]") for i, row in enumerate(x)])


def _state(cls, x, space: HilbertSpace, path: str):
    amps = _vector(x, space.dimension, path)
    try:
        return cls(space, amps)
    except InputError as exc:
        raise ValidationError(str(exc), path) from None


def _int(x: Any, path: str, minimum: int = 0) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ParseError("expected an integer", path)
    if x < minimum:
        raise ValidationError(f"must be >= {minimum}", path)
    return x


def _space(x: Any) -> HilbertSpace:
    if not isinstance(x, dict):
        raise ParseError("expected an object with 'dimension'", "space")
    if "dimension" not in x:
        raise ParseError("missing field", "space.dimension")
    dim = _int(x["dimension"], "space.dimension", 1)
    labels = x.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise ParseError("labels must be a list of strings", "space.labels")
    try:
        return HilbertSpace(dim, tuple(labels) if labels is not None else None)
    except InputError as exc:
        raise ValidationError(str(exc), "space") from None


def _post(x: Any, space: HilbertSpace):
    if not isinstance(x, dict) or len(x) != 1 or not ({"bra", "projector_basis"} & x.keys()):
        raise ParseError("post must be {'bra': [...]} or {'projector_basis': [[...], ...]}", "post")
    if "bra" in x:
        return ensemble.RankOne(_state(Bra, x["bra"], space, "post.bra")), None
    basis = x["projector_basis"]
    if not isinstance(basis, list) or not basis:
        raise ParseError("expected a non-empty list of kets", "post.projector_basis")
    kets = tuple(_state(Ket, k, space, f"post.projector_basis[{i}]")
                 for i, k in enumerate(basis))
    try:
        proj = projector_onto(kets)
    except DependentSpan as exc:
        raise ValidationError(str(exc), "post.projector_basis") from None
    return ensemble.Subspace(proj), kets


def _generalized(x: Any, space: HilbertSpace) -> GeneralizedTSV:
    if not isinstance(x, list) or not x:
        raise ParseError("expected a non-empty list of terms", "generalized")
    terms = []
    for i, t in enumerate(x):
        path = f"generalized[{i}]"
        if not isinstance(t, dict):
            raise ParseError("expected an object", path)
        for key in ("coeff", "bra", "ket"):
            if key not in t:
                raise ParseError("missing field", f"{path}.{key}")
        terms.append(Term(_complex(t["coeff"], f"{path}.coeff"),
                          _state(Bra, t["bra"], space, f"{path}.bra"),
                          _state(Ket, t["ket"], space, f"{path}.ket")))
    try:
        return GeneralizedTSV(tuple(terms))
    except InputError as exc:
        raise ValidationError(str(exc), "generalized") from None


def _observable(x: Any, space: HilbertSpace):
    if isinstance(x, str):
        builtin_observable(x, space)  # validate now, keep the name
        return x
    if isinstance(x, dict) and set(x) == {"matrix"}:
        op = Operator(space, _matrix(x["matrix"], space.dimension, "observable.matrix"))
        if not op.is_hermitian():
            raise ValidationError("observable must be Hermitian", "observable.matrix")
        return op
    raise ParseError("observable must be a builtin name or {'matrix': ...}", "observable")


def _device(x: Any, space: HilbertSpace) -> DeviceSpec:
    if x == "shimony":
        if space.dimension != ensemble.SHIMONY_SYSTEM.dimension:
            raise ValidationError("the shimony device acts on a 4-level system", "device")
        return DeviceSpec("shimony", ensemble.shimony_unitary())
    if not isinstance(x, dict) or "unitary" not in x:
        raise ParseError("device must be 'shimony' or {'unitary': ..., 'labels': [...]}", "device")
    labels = x.get("labels")
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels) or not labels:
        raise ParseError("device.labels must be a non-empty list of strings", "device.labels")
    dd = len(labels)
    ready = _int(x.get("ready_index", 0), "device.ready_index")
    n = space.dimension * dd
    mat = _matrix(x["unitary"], n, "device.unitary")
    try:
        dev_space = HilbertSpace(dd, tuple(labels))
        dev = ensemble.UnitaryDevice(Operator(HilbertSpace(n), mat), dev_space, ready, labels)
    except InputError as exc:
        raise ValidationError(str(exc), "device") from None
    return DeviceSpec(None, dev)


def _coupling(x: Any) -> Coupling:
    if not isinstance(x, dict) or set(x) != {"lambda", "delta"}:
        raise ParseError("coupling must be {'lambda': x, 'delta': y}", "coupling")
    for key in ("lambda", "delta"):
        if not isinstance(x[key], (int, float)) or isinstance(x[key], bool):
            raise ParseError("expected a number", f"coupling.{key}")
    try:
        return Coupling(x["lambda"], x["delta"])
    except ValueError as exc:
        raise ValidationError(str(exc), "coupling") from None


def parse_document(text: str) -> ScenarioDocument:
    """Parse and validate a scenario document.

    Raises :class:`ParseError` for malformed JSON or wrongly typed fields and
    :class:`ValidationError` for well-formed but physically invalid content;
    both carry the offending field path.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object", "$")
    unknown = set(data) - _TOP_LEVEL
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", sorted(unknown)[0])
    if "space" not in data:
        raise ParseError("missing field", "space")
    space = _space(data["space"])

    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("expected a string", "name")

    pre = post = basis = gen = None
    if "generalized" in data:
        if "pre" in data or "post" in data:
            raise ValidationError("'generalized' excludes 'pre' and 'post'", "generalized")
        gen = _generalized(data["generalized"], space)
    else:
        if "pre" not in data:
            raise ParseError("missing field", "pre")
        pre = _state(Ket, data["pre"], space, "pre")
        if "post" in data:
            post, basis = _post(data["post"], space)

    obs = _observable(data["observable"], space) if "observable" in data else None
    device = _device(data["device"], space) if "device" in data else None
    coupling = _coupling(data["coupling"]) if "coupling" in data else None
    trials = _int(data["trials"], "trials", 1) if "trials" in data else None
    seed = _int(data["seed"], "seed") if "seed" in data else None
    if device is not None and gen is not None:
        raise ValidationError("a device needs a plain pre-selected state", "device")

    return ScenarioDocument(space, name, pre, post, basis, gen, obs, device,
                            coupling, trials, seed)


def parse_scenario(text: str):
    """Parse a document to the domain object it describes.

    Returns an ensemble :class:`~tsvf.ensemble.Scenario` when the document
    specifies an intermediate measurement (device or observable) on a plain
    pre-selected state, otherwise its state description.
    """
    doc = parse_document(text)
    if doc.generalized is None and (doc.device is not None or doc.observable_source is not None):
        return doc.scenario()
    return doc.description


def load(path) -> ScenarioDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


# ---------------------------------------------------------------------------
# serialization


def _enc_c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _enc_v(v) -> list:
    return [_enc_c(z) for z in v]


def _enc_m(m) -> list:
    return [_enc_v(row) for row in m]


def to_dict(doc: ScenarioDocument) -> dict:
    out: dict[str, Any] = {}
    if doc.name is not None:
        out["name"] = doc.name
    space = {"dimension": doc.space.dimension}
    if doc.space.labels is not None:
        space["labels"] = list(doc.space.labels)
    out["space"] = space
    if doc.generalized is not None:
        out["generalized"] = [
            {"coeff": _enc_c(t.coeff), "bra": _enc_v(t.bra.amplitudes),
             "ket": _enc_v(t.ket.amplitudes)} for t in doc.generalized.terms]
    else:
        out["pre"] = _enc_v(doc.pre.amplitudes)
        if isinstance(doc.post, ensemble.RankOne):
            out["post"] = {"bra": _enc_v(doc.post.bra.amplitudes)}
        elif isinstance(doc.post, ensemble.Subspace):
            out["post"] = {"projector_basis": [_enc_v(k.amplitudes) for k in doc.post_basis]}
    if isinstance(doc.observable_source, str):
        out["observable"] = doc.observable_source
    elif doc.observable_source is not None:
        out["observable"] = {"matrix": _enc_m(doc.observable_source.matrix)}
    if doc.device is not None:
        if doc.device.name is not None:
            out["device"] = doc.device.name
        else:
            d = doc.device.device
            out["device"] = {"unitary": _enc_m(d.unitary.matrix),
                             "labels": list(d.outcome_labels),
                             "ready_index": d.ready_index}
    if doc.coupling is not None:
        out["coupling"] = {"lambda": doc.coupling.strength, "delta": doc.coupling.pointer_width}
    if doc.trials is not None:
        out["trials"] = doc.trials
    if doc.seed is not None:
        out["seed"] = doc.seed
    return out


_PAIR = re.compile(r"\[\s*(-?[\d.eE+-]+),\s*(-?[\d.eE+-]+)\s*\]")


def dump_document(doc: ScenarioDocument) -> str:
    text = json.dumps(to_dict(doc), indent=2)
    # keep [re, im] pairs on one line
    return _PAIR.sub(r"[\1, \2]", text) + "\n"

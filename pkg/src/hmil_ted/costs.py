"""Cost model: relabel, delete and insert prices for RLT nodes.

Relabeling is only defined between Value nodes of the same data type and is
priced by a per-data-type function. Deleting and inserting a node are priced
per node kind (``Object``, ``Bag``) or per Value data type; the two prices are
always equal so that the induced distance is symmetric.

Costs are kept exact: integers where possible, :class:`fractions.Fraction`
otherwise. Floats only appear when a caller plugs in a custom relabel
function that returns them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from numbers import Number
from typing import Any, Callable, Iterable, Mapping, Optional, Union

from .errors import ContractViolation, CostConfigError
from .rlt import DataType, NodeType, RltNode

Cost = Union[int, Fraction, float]

FLOAT_TOLERANCE = 1e-9

# node_cost keys: inner node kinds plus one key per Value data type
NODE_COST_KEYS = ("Object", "Bag") + tuple(dt.value for dt in DataType)


def exact(x: Any) -> Cost:
    """Normalize a numeric cost: ``int`` if integral, else ``Fraction``."""
    if isinstance(x, bool):
        raise TypeError("booleans are not costs")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    fx = Fraction(x)
    return fx.numerator if fx.denominator == 1 else fx


def is_integral(x: Cost) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


# ---------------------------------------------------------------------------
# relabel functions


def levenshtein(a: str, b: str, limit: Optional[int] = None) -> int:
    """Unit-cost edit distance between two strings (by codepoint).

    With ``limit`` the computation stops early once the distance is known to
    reach it, returning ``limit``.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if limit is not None and len(a) - len(b) >= limit:
        return limit
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if limit is not None and min(cur) >= limit:
            return limit
        prev = cur
    return prev[-1] if limit is None else min(prev[-1], limit)


@dataclass(frozen=True)
class Relabel:
    """A named relabel function for one data type.

    ``kernel_code`` identifies built-ins the compiled kernel evaluates
    natively (0 indicator, 1 numeric_absolute, 2 capped_levenshtein); custom
    functions leave it ``None`` and force the pure-Python path.
    """

    name: str
    fn: Callable[[Any, Any], Cost] = field(compare=False)
    params: tuple = ()
    kernel_code: Optional[int] = None
    cap: Optional[Cost] = None

    def __call__(self, x: Any, y: Any) -> Cost:
        return self.fn(x, y)


def _indicator(x, y) -> int:
    return 0 if x == y else 1


def _numeric_absolute(x, y) -> Cost:
    return exact(abs(Fraction(x) - Fraction(y)))


def indicator() -> Relabel:
    return Relabel("indicator", _indicator, kernel_code=0)


def numeric_absolute() -> Relabel:
    return Relabel("numeric_absolute", _numeric_absolute, kernel_code=1)


def capped_levenshtein(cap: Cost = 2) -> Relabel:
    cap = exact(cap)
    if cap < 0:
        raise CostConfigError("capped_levenshtein cap must be non-negative")
    if is_integral(cap):
        icap = int(cap)
        fn = lambda x, y: levenshtein(x, y, icap)  # noqa: E731
    else:
        fn = lambda x, y: min(exact(levenshtein(x, y)), cap)  # noqa: E731
    return Relabel("capped_levenshtein", fn, (("cap", cap),), kernel_code=2, cap=cap)


def custom(name: str, fn: Callable[[Any, Any], Cost]) -> Relabel:
    """Wrap an arbitrary callable; it must still satisfy the metric axioms."""
    return Relabel(name, fn)


_BUILTINS: dict[str, tuple[Callable[..., Relabel], frozenset]] = {
    "indicator": (indicator, frozenset(DataType)),
    "numeric_absolute": (numeric_absolute, frozenset({DataType.NUMBER})),
    "capped_levenshtein": (capped_levenshtein, frozenset({DataType.STRING})),
}


# ---------------------------------------------------------------------------
# the model


@dataclass(frozen=True)
class CostModel:
    relabel: Mapping[DataType, Relabel]
    node_cost: Mapping[str, Cost]

    @classmethod
    def unit(cls) -> "CostModel":
        """Every delete/insert costs 1, relabel is 0/1 on label equality."""
        return cls({dt: indicator() for dt in DataType}, {k: 1 for k in NODE_COST_KEYS})

    @classmethod
    def build(
        cls,
        relabel: Optional[Mapping[Union[DataType, str], Union[str, Relabel, Mapping]]] = None,
        node_cost: Optional[Mapping[str, Any]] = None,
    ) -> "CostModel":
        """Construct a model; entries not given fall back to the unit model.

        ``node_cost`` values may be plain numbers (delete = insert) or
        ``{"delete": x, "insert": x}``; the keys ``"delete"``/``"insert"``
        at top level set the default for every node kind, and ``"Value"``
        sets all four Value data types at once.
        """
        costs: dict[str, Cost] = {k: 1 for k in NODE_COST_KEYS}
        node_cost = dict(node_cost or {})
        default = _pop_symmetric(node_cost, "default")
        if default is not None:
            costs = {k: default for k in NODE_COST_KEYS}
        if "Value" in node_cost:
            c = _symmetric(node_cost.pop("Value"), "Value")
            for dt in DataType:
                costs[dt.value] = c
        for key, spec in node_cost.items():
            if key not in NODE_COST_KEYS:
                raise CostConfigError(f"unknown node_cost key {key!r}")
            costs[key] = _symmetric(spec, key)

        fns = {dt: indicator() for dt in DataType}
        for key, spec in (relabel or {}).items():
            dt = _data_type(key)
            fns[dt] = _relabel_from_spec(spec, dt, costs)
        return cls(fns, costs)

    # -- pricing -----------------------------------------------------------

    def node_key(self, node: RltNode) -> str:
        if node.node_type is NodeType.VALUE:
            return node.data_type.value
        return node.node_type.value

    def delete_cost(self, node: RltNode) -> Cost:
        return self.node_cost[self.node_key(node)]

    def insert_cost(self, node: RltNode) -> Cost:
        return self.node_cost[self.node_key(node)]

    def relabel_cost(self, data_type: DataType, x: Any, y: Any) -> Cost:
        return self.relabel[data_type](x, y)

    @property
    def is_integral(self) -> bool:
        """True when all node costs and relabel caps are integers.

        Integral models (with integer-valued Number labels) are evaluated
        exactly by the compiled kernel in double precision.
        """
        if not all(is_integral(c) for c in self.node_cost.values()):
            return False
        for fn in self.relabel.values():
            if fn.kernel_code is None:
                return False
            if fn.cap is not None and not is_integral(fn.cap):
                return False
        return True

    def to_config(self) -> dict:
        """Inverse of :func:`model_from_config` for built-in models."""
        relabel = {}
        for dt, fn in self.relabel.items():
            if fn.params:
                relabel[dt.value] = {"name": fn.name, "params": {k: _json_num(v) for k, v in fn.params}}
            else:
                relabel[dt.value] = fn.name
        return {
            "relabel": relabel,
            "node_cost": {k: _json_num(v) for k, v in self.node_cost.items()},
        }


def _json_num(x: Cost):
    # terminating fractions become exact Decimals, anything else a float
    if isinstance(x, Fraction):
        d = x.denominator
        while d % 2 == 0:
            d //= 2
        while d % 5 == 0:
            d //= 5
        if d == 1:
            with localcontext() as ctx:
                ctx.prec = 1000
                return (Decimal(x.numerator) / Decimal(x.denominator)).normalize()
        return float(x)
    return x


def _data_type(key: Union[DataType, str]) -> DataType:
    if isinstance(key, DataType):
        return key
    try:
        return DataType(key)
    except ValueError:
        raise CostConfigError(f"unknown data type {key!r} in relabel section") from None


def _cost_value(x: Any, where: str) -> Cost:
    if isinstance(x, bool) or not isinstance(x, (Number, Decimal)):
        raise CostConfigError(f"{where}: cost must be a number, got {x!r}")
    if isinstance(x, float):
        x = Decimal(repr(x))
    c = exact(x)
    if c < 0:
        raise CostConfigError(f"{where}: cost must be non-negative, got {x}")
    return c


def _symmetric(spec: Any, where: str) -> Cost:
    if isinstance(spec, Mapping):
        unknown = set(spec) - {"delete", "insert"}
        if unknown:
            raise CostConfigError(f"{where}: unknown fields {sorted(unknown)}")
        if not spec:
            raise CostConfigError(f"{where}: expected delete and/or insert")
        d = _cost_value(spec["delete"], f"{where}.delete") if "delete" in spec else None
        i = _cost_value(spec["insert"], f"{where}.insert") if "insert" in spec else None
        if d is not None and i is not None and d != i:
            raise CostConfigError(f"{where}: delete and insert costs must be equal")
        return d if d is not None else i
    return _cost_value(spec, where)


def _pop_symmetric(node_cost: dict, where: str) -> Optional[Cost]:
    flat = {k: node_cost.pop(k) for k in ("delete", "insert") if k in node_cost}
    if not flat:
        return None
    return _symmetric(flat, where)


def _relabel_from_spec(spec: Any, dt: DataType, costs: Mapping[str, Cost]) -> Relabel:
    if isinstance(spec, Relabel):
        return spec
    params: dict = {}
    if isinstance(spec, Mapping):
        if "name" not in spec:
            raise CostConfigError(f"relabel.{dt.value}: missing 'name'")
        name = spec["name"]
        params = dict(spec.get("params") or {})
    elif isinstance(spec, str):
        name = spec
    else:
        raise CostConfigError(f"relabel.{dt.value}: expected a function name")
    if name not in _BUILTINS:
        raise CostConfigError(f"relabel.{dt.value}: unknown function {name!r}")
    factory, allowed = _BUILTINS[name]
    if dt not in allowed:
        raise CostConfigError(f"relabel.{dt.value}: {name} does not apply to {dt.value}")
    if name == "capped_levenshtein":
        unknown = set(params) - {"cap"}
        if unknown:
            raise CostConfigError(f"relabel.{dt.value}: unknown params {sorted(unknown)}")
        if "cap" in params:
            cap = _cost_value(params["cap"], f"relabel.{dt.value}.cap")
        else:
            cap = 2 * costs[DataType.STRING.value]
        return capped_levenshtein(cap)
    if params:
        raise CostConfigError(f"relabel.{dt.value}: {name} takes no params")
    return factory()


def model_from_config(config: Mapping) -> CostModel:
    if not isinstance(config, Mapping):
        raise CostConfigError("cost configuration must be a JSON object")
    unknown = set(config) - {"relabel", "node_cost"}
    if unknown:
        raise CostConfigError(f"unknown top-level keys {sorted(unknown)}")
    relabel = config.get("relabel") or {}
    node_cost = config.get("node_cost") or {}
    if not isinstance(relabel, Mapping) or not isinstance(node_cost, Mapping):
        raise CostConfigError("'relabel' and 'node_cost' must be JSON objects")
    return CostModel.build(relabel, node_cost)


def load_cost_config(path) -> CostModel:
    """Read a JSON cost configuration; missing entries take unit defaults."""
    try:
        with open(path, "rb") as fh:
            config = json.loads(fh.read().decode("utf-8"), parse_float=Decimal)
    except OSError as exc:
        raise CostConfigError(f"cannot read cost config: {exc}") from None
    except ValueError as exc:
        raise CostConfigError(f"cost config is not valid JSON: {exc}") from None
    return model_from_config(config)


# ---------------------------------------------------------------------------
# gamma


def gamma(v: Optional[RltNode], w: Optional[RltNode], model: CostModel) -> Cost:
    """Cost of the elementary operation ``v -> w``; ``None`` stands for λ."""
    if v is None and w is None:
        raise ContractViolation("gamma(λ, λ) is undefined")
    if w is None:
        return model.delete_cost(v)
    if v is None:
        return model.insert_cost(w)
    if v.node_type is not w.node_type or v.data_type is not w.data_type:
        raise ContractViolation(
            f"cannot relabel {v!r} into {w!r}: node and data types must match"
        )
    if v.node_type is not NodeType.VALUE:
        return 0
    return model.relabel_cost(v.data_type, v.label, w.label)


# ---------------------------------------------------------------------------
# axiom verification


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    nodes: tuple
    detail: str


def _leq(x: Cost, y: Cost) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return x <= y + FLOAT_TOLERANCE
    return x <= y


def _eq(x: Cost, y: Cost) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return abs(x - y) <= FLOAT_TOLERANCE
    return x == y


def verify_metric_axioms(model: CostModel, samples: Iterable[RltNode]) -> list[AxiomViolation]:
    """Exhaustively check the cost axioms on every same-typed pair and triple.

    Checked: identity of indiscernibles (both directions), symmetry,
    non-negativity, the triangle inequality, and delete == insert per node.
    """
    report: list[AxiomViolation] = []
    groups: dict[tuple, list[RltNode]] = {}
    for node in samples:
        groups.setdefault((node.node_type, node.data_type), []).append(node)

    for nodes in groups.values():
        for v in nodes:
            d, i = gamma(v, None, model), gamma(None, v, model)
            if d < 0 or i < 0:
                report.append(AxiomViolation("non-negativity", (v,), f"delete={d} insert={i}"))
            if not _eq(d, i):
                report.append(AxiomViolation("symmetry", (v,), f"delete={d} != insert={i}"))

        n = len(nodes)
        table = [[gamma(nodes[i], nodes[j], model) for j in range(n)] for i in range(n)]
        for i, j in itertools.product(range(n), repeat=2):
            c = table[i][j]
            same = nodes[i].label == nodes[j].label
            if c < 0:
                report.append(AxiomViolation("non-negativity", (nodes[i], nodes[j]), f"cost={c}"))
            if same and not _eq(c, 0):
                report.append(AxiomViolation("identity", (nodes[i], nodes[j]), f"cost={c} for equal labels"))
            if not same and _eq(c, 0):
                report.append(AxiomViolation("identity", (nodes[i], nodes[j]), "zero cost for distinct labels"))
            if i < j and not _eq(c, table[j][i]):
                report.append(AxiomViolation("symmetry", (nodes[i], nodes[j]), f"{c} != {table[j][i]}"))
        for i, j, k in itertools.product(range(n), repeat=3):
            if not _leq(table[i][j], table[i][k] + table[k][j]):
                report.append(
                    AxiomViolation(
                        "triangle",
                        (nodes[i], nodes[j], nodes[k]),
                        f"{table[i][j]} > {table[i][k]} + {table[k][j]}",
                    )
                )
    return report


def format_cost(cost: Cost) -> str:
    """Decimal text with at most 9 fractional digits, trailing zeros trimmed."""
    if isinstance(cost, int):
        return str(cost)
    if isinstance(cost, Fraction):
        if cost.denominator == 1:
            return str(cost.numerator)
        with localcontext() as ctx:
            ctx.prec = max(28, len(str(cost.numerator)) + 12)
            value = Decimal(cost.numerator) / Decimal(cost.denominator)
    else:
        value = Decimal(repr(float(cost)))
    text = format(value.quantize(Decimal("1e-9"), rounding=ROUND_HALF_EVEN), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text

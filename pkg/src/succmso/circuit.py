"""Gate-level Boolean circuits: representation, evaluation, synthesis, file format.

A circuit has ``2 * label_bits`` input wires: wires ``0 .. n-1`` carry the
first argument x least-significant-bit first, wires ``n .. 2n-1`` carry y.
Gates are fan-in <= 2; wider conjunctions/disjunctions are ladders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import BadParam, InputOutOfRange, ParseError, TopologyError

_GATE_KINDS = {"input", "const", "not", "and", "or"}


@dataclass(frozen=True)
class BoolCircuit:
    """Immutable adjacency circuit on 2*label_bits inputs, one output."""

    label_bits: int
    gates: tuple
    output: int

    def __post_init__(self):
        if self.label_bits < 1:
            raise BadParam("label_bits must be >= 1")
        object.__setattr__(self, "gates", tuple(tuple(g) for g in self.gates))
        for i, gate in enumerate(self.gates):
            kind = gate[0]
            if kind == "input":
                w = gate[1]
                if not 0 <= w < 2 * self.label_bits:
                    raise BadParam(f"gate {i}: input wire {w} out of range")
            elif kind == "const":
                if gate[1] not in (0, 1):
                    raise BadParam(f"gate {i}: const must be 0 or 1")
            elif kind == "not":
                self._check_ref(i, gate[1])
            elif kind in ("and", "or"):
                self._check_ref(i, gate[1])
                self._check_ref(i, gate[2])
            else:
                raise BadParam(f"gate {i}: unknown kind {kind!r}")
        if not 0 <= self.output < len(self.gates):
            raise TopologyError(f"output index {self.output} out of range")

    def _check_ref(self, i, j):
        if not isinstance(j, int) or not 0 <= j < i:
            raise TopologyError(f"gate {i} references gate {j}")

    def eval(self, x: int, y: int) -> bool:
        """Evaluate the circuit on vertex labels x, y."""
        n = self.label_bits
        if not 0 <= x < (1 << n) or not 0 <= y < (1 << n):
            raise InputOutOfRange(f"labels ({x}, {y}) need more than {n} bits")
        values = [False] * len(self.gates)
        for i, gate in enumerate(self.gates):
            kind = gate[0]
            if kind == "input":
                w = gate[1]
                values[i] = bool((x >> w) & 1) if w < n else bool((y >> (w - n)) & 1)
            elif kind == "const":
                values[i] = bool(gate[1])
            elif kind == "not":
                values[i] = not values[gate[1]]
            elif kind == "and":
                values[i] = values[gate[1]] and values[gate[2]]
            else:
                values[i] = values[gate[1]] or values[gate[2]]
        return values[self.output]

    def gate_count(self) -> int:
        return len(self.gates)

    def to_json_obj(self):
        return {
            "version": 1,
            "label_bits": self.label_bits,
            "gates": [list(g) for g in self.gates],
            "output": self.output,
        }


def serialize(circuit: BoolCircuit) -> str:
    return json.dumps(circuit.to_json_obj())


def parse(text: str) -> BoolCircuit:
    """Parse the JSON circuit format; inverse of serialize."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return from_json_obj(obj)


def from_json_obj(obj) -> BoolCircuit:
    if not isinstance(obj, dict):
        raise ParseError("circuit object must be a JSON object")
    try:
        label_bits = obj["label_bits"]
        gates = obj["gates"]
        output = obj["output"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing circuit field: {exc}") from exc
    if not isinstance(gates, list):
        raise ParseError("gates must be a list")
    for i, g in enumerate(gates):
        if not isinstance(g, list) or not g or g[0] not in _GATE_KINDS:
            raise ParseError(f"gate {i} is malformed")
    try:
        return BoolCircuit(label_bits, tuple(tuple(g) for g in gates), output)
    except BadParam as exc:
        raise ParseError(str(exc)) from exc


class WireBundle(tuple):
    """Ordered gate indices read as an unsigned integer, LSB first."""

    @property
    def width(self):
        return len(self)


class CircuitBuilder:
    """Appends gates to a circuit under construction.

    Synthesis primitives return either a single gate index (a bit) or a
    WireBundle (a multi-bit unsigned value).
    """

    def __init__(self, label_bits: int):
        if label_bits < 1:
            raise BadParam("label_bits must be >= 1")
        self.label_bits = label_bits
        self._gates = []
        self._cache = {}

    def _emit(self, gate):
        # structural hashing keeps repeated subcircuits cheap
        key = tuple(gate)
        idx = self._cache.get(key)
        if idx is None:
            idx = len(self._gates)
            self._gates.append(key)
            self._cache[key] = idx
        return idx

    # -- elementary gates ------------------------------------------------

    def input(self, w: int) -> int:
        if not 0 <= w < 2 * self.label_bits:
            raise BadParam(f"input wire {w} out of range")
        return self._emit(("input", w))

    def const(self, b) -> int:
        return self._emit(("const", 1 if b else 0))

    def not_(self, g: int) -> int:
        return self._emit(("not", g))

    def and_(self, g: int, h: int) -> int:
        return self._emit(("and", g, h))

    def or_(self, g: int, h: int) -> int:
        return self._emit(("or", g, h))

    def xor_(self, g, h):
        return self.or_(self.and_(g, self.not_(h)), self.and_(self.not_(g), h))

    def xnor_(self, g, h):
        return self.or_(self.and_(g, h), self.and_(self.not_(g), self.not_(h)))

    def and_many(self, bits) -> int:
        bits = list(bits)
        if not bits:
            return self.const(1)
        acc = bits[0]
        for b in bits[1:]:
            acc = self.and_(acc, b)
        return acc

    def or_many(self, bits) -> int:
        bits = list(bits)
        if not bits:
            return self.const(0)
        acc = bits[0]
        for b in bits[1:]:
            acc = self.or_(acc, b)
        return acc

    # -- bundles ---------------------------------------------------------

    def x_bundle(self) -> WireBundle:
        return WireBundle(self.input(w) for w in range(self.label_bits))

    def y_bundle(self) -> WireBundle:
        n = self.label_bits
        return WireBundle(self.input(n + w) for w in range(n))

    def const_bundle(self, value: int, width: int) -> WireBundle:
        if value < 0 or width < 1 or value >= (1 << width):
            raise BadParam(f"constant {value} does not fit {width} bits")
        return WireBundle(self.const((value >> i) & 1) for i in range(width))

    def pad(self, bundle: WireBundle, width: int) -> WireBundle:
        if len(bundle) >= width:
            return WireBundle(bundle[:width])
        zero = self.const(0)
        return WireBundle(tuple(bundle) + (zero,) * (width - len(bundle)))

    # -- comparison ------------------------------------------------------

    def eq_const(self, bundle: WireBundle, c: int) -> int:
        """Bit that is 1 iff the bundle value equals constant c."""
        if c < 0:
            raise BadParam("negative constant")
        if c >= (1 << len(bundle)):
            return self.const(0)
        return self.and_many(
            bit if (c >> i) & 1 else self.not_(bit) for i, bit in enumerate(bundle)
        )

    def eq(self, a: WireBundle, b: WireBundle) -> int:
        w = max(len(a), len(b))
        a, b = self.pad(a, w), self.pad(b, w)
        return self.and_many(self.xnor_(x, y) for x, y in zip(a, b))

    def less_const(self, bundle: WireBundle, c: int) -> int:
        """Bit that is 1 iff bundle value < constant c (unsigned)."""
        if c < 0:
            raise BadParam("negative constant")
        if c >= (1 << len(bundle)):
            return self.const(1)
        if c == 0:
            return self.const(0)
        lt = self.const(0)
        eq_prefix = self.const(1)
        for i in reversed(range(len(bundle))):
            bit = bundle[i]
            if (c >> i) & 1:
                lt = self.or_(lt, self.and_(eq_prefix, self.not_(bit)))
                eq_prefix = self.and_(eq_prefix, bit)
            else:
                eq_prefix = self.and_(eq_prefix, self.not_(bit))
        return lt

    # -- arithmetic ------------------------------------------------------

    def add_const(self, bundle: WireBundle, c: int) -> WireBundle:
        """Add a constant, result truncated to the bundle width (mod 2^w)."""
        if not 0 <= c < (1 << len(bundle)):
            raise BadParam(f"constant {c} does not fit the bundle width")
        out = []
        carry = self.const(0)
        for i, bit in enumerate(bundle):
            if (c >> i) & 1:
                out.append(self.xnor_(bit, carry))
                carry = self.or_(bit, carry)
            else:
                out.append(self.xor_(bit, carry))
                carry = self.and_(bit, carry)
        return WireBundle(out)

    def sub_const(self, bundle: WireBundle, c: int) -> WireBundle:
        """Subtract a constant mod 2^w (wrapping two's complement)."""
        w = len(bundle)
        if not 0 <= c < (1 << w):
            raise BadParam(f"constant {c} does not fit the bundle width")
        return self.add_const(bundle, ((1 << w) - c) % (1 << w))

    def _add_bundles(self, a: WireBundle, b: WireBundle, width: int) -> WireBundle:
        a, b = self.pad(a, width), self.pad(b, width)
        out = []
        carry = self.const(0)
        for x, y in zip(a, b):
            s = self.xor_(self.xor_(x, y), carry)
            carry = self.or_(self.and_(x, y), self.and_(carry, self.xor_(x, y)))
            out.append(s)
        return WireBundle(out)

    def mul_const(self, bundle: WireBundle, c: int) -> WireBundle:
        """Shift-and-add multiplier by a nonnegative constant."""
        if c < 0:
            raise BadParam("negative constant")
        w = len(bundle)
        if c == 0:
            return self.const_bundle(0, w)
        out_w = w + c.bit_length()
        zero = self.const(0)
        acc = None
        for p in range(c.bit_length()):
            if (c >> p) & 1:
                shifted = WireBundle((zero,) * p + tuple(bundle))
                acc = shifted if acc is None else self._add_bundles(acc, shifted, out_w)
        return self.pad(acc, out_w)

    def divmod_const(self, bundle: WireBundle, d: int):
        """Restoring long division by a positive constant.

        Returns (quotient, remainder): quotient has the input width,
        remainder has bit_length(d) bits.
        """
        if d <= 0:
            raise BadParam("divisor must be positive")
        w = len(bundle)
        rb = max(d.bit_length(), 1)
        rem = self.const_bundle(0, rb)
        q_bits = [None] * w
        for i in reversed(range(w)):
            shifted = WireBundle((bundle[i],) + tuple(rem))  # rem*2 + bit, width rb+1
            ge = self.not_(self.less_const(shifted, d))
            reduced = self.add_const(shifted, ((1 << (rb + 1)) - d))
            rem = WireBundle(
                self.or_(self.and_(ge, r), self.and_(self.not_(ge), s))
                for s, r in zip(shifted[:rb], reduced[:rb])
            )
            q_bits[i] = ge
        return WireBundle(q_bits), rem

    # -- selection -------------------------------------------------------

    def mux(self, select_bits, table) -> WireBundle:
        """Select table[i] where i is the integer formed by select_bits (LSB first)."""
        select_bits = list(select_bits)
        table = [WireBundle(t) for t in table]
        if len(table) != (1 << len(select_bits)):
            raise BadParam("mux table size must be 2^(number of select bits)")
        width = max(len(t) for t in table)
        table = [self.pad(t, width) for t in table]
        while select_bits:
            s = select_bits.pop()  # split on most significant select bit
            half = len(table) // 2
            lo, hi = table[:half], table[half:]
            table = [
                WireBundle(
                    self.or_(self.and_(s, h), self.and_(self.not_(s), l))
                    for l, h in zip(lo_b, hi_b)
                )
                for lo_b, hi_b in zip(lo, hi)
            ]
        return table[0]

    def mux_bit(self, s: int, if0: int, if1: int) -> int:
        return self.or_(self.and_(s, if1), self.and_(self.not_(s), if0))

    # -- CNF embedding ---------------------------------------------------

    def cnf_eval(self, clauses, var_bundle: WireBundle) -> int:
        """Bit that is 1 iff the clause list is satisfied.

        Variable j (1-based) reads bit j-1 of the bundle. An empty clause
        list is the empty conjunction, i.e. constant true.
        """
        clause_bits = []
        for clause in clauses:
            lits = []
            for lit in clause:
                if lit == 0 or abs(lit) > len(var_bundle):
                    raise BadParam(f"literal {lit} out of range")
                bit = var_bundle[abs(lit) - 1]
                lits.append(bit if lit > 0 else self.not_(bit))
            clause_bits.append(self.or_many(lits))
        return self.and_many(clause_bits)

    # -- finish ----------------------------------------------------------

    def gate_count(self) -> int:
        return len(self._gates)

    def build(self, output: int) -> BoolCircuit:
        return BoolCircuit(self.label_bits, tuple(self._gates), output)

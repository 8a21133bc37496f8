#!/usr/bin/env python3
"""Writes corpus/*/expected.dump from plain reimplementations of each design.

The oracles know nothing about the simulator: they restate what each design
computes (arithmetic, or a cycle-level model of the FSM) and print the lines
a correct final state dump must contain. Run from anywhere:

    python3 corpus/oracles.py
"""

import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def bits_str(v, width):
    return '"' + format(v & ((1 << width) - 1), "0%db" % width) + '"'


def runspec(name):
    """CLI arguments of a runspec, without comments and expectations."""
    out = []
    with open(os.path.join(HERE, name, "runspec")) as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#") and not line.startswith("expect-"):
                out.append(line)
    return out


def stimuli(name):
    """{cycle: {signal: literal}} and the cycle count from a runspec."""
    args = runspec(name)
    sets, cycles = {}, 0
    for k, a in enumerate(args):
        if a == "--set":
            cyc, rest = args[k + 1].split(":", 1)
            sig, val = rest.split("=", 1)
            sets.setdefault(int(cyc), {})[sig] = val
        if a == "--cycles":
            cycles = int(args[k + 1])
    return sets, cycles


def lit_int(v):
    if v.startswith('x"'):
        return int(v[2:-1], 16)
    return int(v)


def rising_cycles(cycles):
    # The clock starts at 'U', goes to '0' after cycle 1 and to '1' after
    # cycle 2; a clocked process sees clk = '1' in cycles 3, 5, 7, ...
    return [c for c in range(3, cycles + 1, 2)]


def mnxy():
    return "second run of p sees m=3, n=2, so x = y = 3 + 2", ["m = 3", "n = 2", "x = 5", "y = 5"]


def factorial():
    sets, _ = stimuli("factorial")
    n = lit_int(sets[1]["n"])
    return "%d! by math.factorial" % n, ["done = '1'", "result = %d" % math.factorial(n)]


def power():
    sets, _ = stimuli("power")
    x, n = lit_int(sets[1]["x"]), lit_int(sets[1]["n"])
    return "%d ** %d by integer exponentiation" % (x, n), ["done = '1'", "result = %d" % (x ** n)]


def power_comp():
    sets, _ = stimuli("power_comp")
    x, n = lit_int(sets[1]["x"]), lit_int(sets[1]["n"])
    r = x ** n
    return "%d ** %d by integer exponentiation" % (x, n), ["done = '1'", "result = %d" % r, "u_mult.p = %d" % r]


def div32():
    sets, _ = stimuli("div32")
    s = sets[1]
    dividend = (lit_int(s["y"]) << 32) | lit_int(s["op1"])
    if dividend >> 63:
        dividend -= 1 << 64
    divisor = lit_int(s["op2"])
    if divisor >> 31:
        divisor -= 1 << 32
    q = abs(dividend) // abs(divisor)
    if (dividend < 0) != (divisor < 0):
        q = -q
    assert -(1 << 31) <= q < (1 << 31)
    return ("%d / %d truncated toward zero = %d" % (dividend, divisor, q),
            ["ovf = '0'", "ready = '1'", "result = " + bits_str(q, 32)])


DIV32_SEED = 20261018


def div32_quotient(y, op1, op2):
    """Truncating quotient of the signed 64-bit y:op1 by signed op2 as a
    32-bit pattern, or None when it does not fit (or op2 is zero)."""
    a = (y << 32) | op1
    if a >> 63:
        a -= 1 << 64
    b = op2 - (1 << 32) if op2 >> 31 else op2
    if b == 0:
        return None
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    if not -(1 << 31) <= q < (1 << 31):
        return None
    return q & 0xFFFFFFFF


def div32_cases():
    """200 seeded random non-overflow operand triples plus 20 boundary ones."""
    rng = random.Random(DIV32_SEED)
    cases = []
    while len(cases) < 200:
        b = rng.getrandbits(rng.randint(1, 31)) or 1
        if rng.getrandbits(1):
            b = -b
        q = rng.randint(-(1 << 31), (1 << 31) - 1) >> rng.randint(0, 31)
        r = rng.randint(0, abs(b) - 1)
        a = q * b + (r if q * b >= 0 else -r)
        if not -(1 << 63) <= a < (1 << 63):
            continue
        a &= (1 << 64) - 1
        y, op1, op2 = a >> 32, a & 0xFFFFFFFF, b & 0xFFFFFFFF
        if div32_quotient(y, op1, op2) is not None:
            cases.append((y, op1, op2))
    m = 0xFFFFFFFF
    boundary = [
        (0, 0, 1), (0, 0, m), (0, 1, 1), (m, m, 1), (m, m, m), (0, 1, m),
        (0, 0x7FFFFFFF, 1), (m, 0x80000000, 1), (0, 0x7FFFFFFF, m), (m, 0x80000001, m),
        (0x3FFFFFFF, m, 0x7FFFFFFF), (0xC0000000, 1, 0x7FFFFFFF), (0, m, m - 1),
        (0, 5, 0), (0, 0x80000000, 1), (m, 0x80000000, m), (0x100, 0, 3),
        (0x7FFFFFFF, m, 0x80000000), (0x80000000, 0, 0x80000000), (0x40000000, 0, 0x7FFFFFFF),
    ]
    return cases + boundary


def write_div32_cases():
    with open(os.path.join(HERE, "div32", "cases.txt"), "w") as f:
        f.write("# oracle: truncating signed division of y:op1 by op2, seed %d\n" % DIV32_SEED)
        f.write("# y op1 op2 quotient (ovf: no 32-bit quotient or zero divisor)\n")
        for y, op1, op2 in div32_cases():
            q = div32_quotient(y, op1, op2)
            f.write("%08x %08x %08x %s\n" % (y, op1, op2, "ovf" if q is None else "%08x" % q))


def nested_loops():
    sets, _ = stimuli("nested_loops")
    n = lit_int(sets[1]["n"])
    pairs = [(i, j) for i in range(n + 1) for j in range(i + 1) if (i + j) % 3]
    k, steps = n + 7, 0
    while k != 1:
        k = k // 2 if k % 2 == 0 else 3 * k + 1
        steps += 1
    return ("direct sums over 0 <= j <= i <= n with (i + j) mod 3 /= 0; collatz steps from n + 7",
            ["pairs = %d" % len(pairs), "steps = %d" % steps, "total = %d" % sum(i * j for i, j in pairs)])


def multi_driver():
    return "std_logic resolution table, resolved('1', '0') = 'X'", ["line = 'X'", "o = 'X'"]


def tristate_bus():
    sets, cycles = stimuli("tristate_bus")
    sel, data = 0, 0
    for c in range(1, cycles + 1):
        for sig, val in sets.get(c, {}).items():
            if sig == "sel":
                sel = lit_int(val)
            else:
                data = lit_int(val)
    lane = (data >> (8 * sel)) & 0xFF
    return "byte %d of 0x%08x" % (sel, data), ["line = " + bits_str(lane, 8), "q = " + bits_str(lane, 8)]


def case_fsm():
    sets, cycles = stimuli("case_fsm")
    x, state, cnt = 0, 0, 0
    edges = set(rising_cycles(cycles))
    for c in range(1, cycles + 1):
        x = lit_int(sets.get(c, {}).get("x", str(x)))
        if c in edges:
            if state == 0:
                state = 1 if x > 3 else 0
            elif state == 1:
                state = 2
            elif state == 2:
                cnt += x
                state = 3
            else:
                state = 0
    cls = 0 if x == 0 else 1 if x <= 4 else 2 if x in (5, 7, 9) else 3
    code = {0: '"00"', 1: '"01"'}.get(state, '"10"')
    return ("cycle model of the state machine: clocked steps on odd cycles from 3",
            ["big = '%d'" % (cnt > 20), "cls = %d" % cls, "cnt = %d" % cnt, "code = " + code,
             "state = %d" % state])


def loop_sum():
    sets, cycles = stimuli("loop_sum")
    v, last = 0, None
    for c in range(1, cycles + 1):
        if "v" in sets.get(c, {}):
            v = lit_int(sets[c]["v"])
        if c in rising_cycles(cycles):
            last = v
    ones = bin(last).count("1")
    rev = int(format(last, "08b")[::-1], 2)
    mx = last.bit_length() - 1
    return ("bit counts of the value sampled at the last rising edge",
            ["mx = %d" % mx, "ones = %d" % ones, "rev = " + bits_str(rev, 8), "tri = %d" % (ones * (ones + 1) // 2)])


def grammar_tour():
    sets, cycles = stimuli("grammar_tour")
    a, b = lit_int(sets[1]["a"]), lit_int(sets[1]["b"])
    w = 8
    mask = (1 << w) - 1
    uv = min(max(abs(a), 0), 255)
    rot = ((uv << 1) | (uv >> (w - 1))) & mask
    vhdl_rem = int(math.fmod(a, b))
    arith = (a % b) * 1000 + vhdl_rem * 100 + 2 ** 3 + (uv & 15)
    low4 = a & 15
    low4 = low4 - 16 if low4 & 8 else low4
    sw_in = uv ^ 0x0F
    swapped = ((sw_in & 15) << 4) | (sw_in >> 4)
    shifted = (uv >> 2) | ((uv << 6) & mask)
    bits = ~(((0b1011 << 1) & 15) ^ 0b0110) & 15
    hi = min(max(int(a / 7) + 8, 0), 15)
    word = "pos" if a > 0 else "neg" if a < 0 else "nil"
    # falling_edge(clk) is clk = '0', which holds in the even cycles
    falls = cycles // 2
    return ("numeric_std and integer arithmetic restated directly",
            ["arith = %d" % arith, "bits = " + bits_str(bits, 4), "falls = %d" % falls, 'flags = "1010"',
             "half = 0.75", "p.hi = %d" % hi, "p.lo = %d" % b, "s = " + bits_str(low4 - b, w),
             "shifted = " + bits_str(shifted, 8), "swapped = " + bits_str(swapped, 8), "u = " + bits_str(rot + 1, w),
             'word = "%s"' % word])


ORACLES = {
    "mnxy": mnxy,
    "factorial": factorial,
    "power": power,
    "power_comp": power_comp,
    "div32": div32,
    "nested_loops": nested_loops,
    "multi_driver": multi_driver,
    "tristate_bus": tristate_bus,
    "case_fsm": case_fsm,
    "loop_sum": loop_sum,
    "grammar_tour": grammar_tour,
}

ERRORS = {
    "oscillator": "no final state: the run stops with a delta limit error",
    "infinite_while": "no final state: the run stops with a loop budget error",
}


def main():
    for name, fn in sorted(ORACLES.items()):
        what, lines = fn()
        with open(os.path.join(HERE, name, "expected.dump"), "w") as f:
            f.write("# oracle: %s\n" % what)
            for line in sorted(lines):
                f.write(line + "\n")
    write_div32_cases()
    for name, why in ERRORS.items():
        with open(os.path.join(HERE, name, "expected.dump"), "w") as f:
            f.write("# %s\n" % why)


if __name__ == "__main__":
    main()

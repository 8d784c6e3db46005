# evmhorn: sound reentrancy analysis for EVM bytecode
# Copyright 2026 The evmhorn Authors.
# SPDX-License-Identifier: Apache-2.0

# Regenerate with: python3 tests/minitests/generate.py tests/minitests
# Needs pyevmasm (assembly) and pycryptodome (keccak).
# Writes minitest cases; expectations are computed here with plain Python ints.
import json, os, sys
import pyevmasm
from Crypto.Hash import keccak

M = 2**256
def s(x): return x - M if x >= 2**255 else x
def u(x): return x % M
def asm(src):
    lines = ['GETPC' if l == 'PC' else l for l in src.strip().splitlines()]
    return pyevmasm.assemble_hex('\n'.join(lines), fork='istanbul')[2:]
def push(v):
    n = max(1, (v.bit_length() + 7) // 8)
    return f"PUSH{n} {hex(v)}"
def hx(v): return hex(v)

def sdiv(a, b):
    if b == 0: return 0
    q = abs(s(a)) // abs(s(b))
    return u(q if (s(a) < 0) == (s(b) < 0) else -q)
def smod(a, b):
    if b == 0: return 0
    r = abs(s(a)) % abs(s(b))
    return u(-r if s(a) < 0 else r)
def signextend(b, x):
    if b >= 31: return x
    bit = 8 * b + 7
    mask = (1 << (bit + 1)) - 1
    return u(x | (M - 1 - mask)) if (x >> bit) & 1 else x & mask
def byte(i, x): return 0 if i >= 32 else (x >> (8 * (31 - i))) & 0xff
def sar(sh, x):
    if sh >= 256: return M - 1 if s(x) < 0 else 0
    return u(s(x) >> sh)

BIN = {
    'ADD': lambda a, b: u(a + b), 'MUL': lambda a, b: u(a * b), 'SUB': lambda a, b: u(a - b),
    'DIV': lambda a, b: 0 if b == 0 else a // b, 'SDIV': sdiv, 'MOD': lambda a, b: 0 if b == 0 else a % b,
    'SMOD': smod, 'EXP': lambda a, b: pow(a, b, M), 'SIGNEXTEND': signextend,
    'LT': lambda a, b: int(a < b), 'GT': lambda a, b: int(a > b), 'SLT': lambda a, b: int(s(a) < s(b)),
    'SGT': lambda a, b: int(s(a) > s(b)), 'EQ': lambda a, b: int(a == b), 'AND': lambda a, b: a & b,
    'OR': lambda a, b: a | b, 'XOR': lambda a, b: a ^ b, 'BYTE': byte,
    'SHL': lambda a, b: 0 if a >= 256 else u(b << a), 'SHR': lambda a, b: 0 if a >= 256 else b >> a, 'SAR': sar,
}
NEG1 = M - 1
MIN = 2**255
vectors = [
    ('ADD', 5, 7), ('ADD', NEG1, 2), ('MUL', 2**200, 2**100), ('MUL', 12345, 678), ('SUB', 3, 10),
    ('SUB', 10, 3), ('DIV', 100, 7), ('DIV', 5, 0), ('SDIV', u(-100), 7), ('SDIV', MIN, NEG1), ('SDIV', 1, 0),
    ('MOD', 100, 7), ('MOD', 9, 0), ('SMOD', u(-100), 7), ('SMOD', 100, u(-7)), ('EXP', 3, 300), ('EXP', 0, 0),
    ('EXP', 2, 255), ('SIGNEXTEND', 0, 0x80), ('SIGNEXTEND', 0, 0x7f), ('SIGNEXTEND', 1, 0xff8000),
    ('SIGNEXTEND', 40, 0x80), ('LT', 1, 2), ('LT', NEG1, 0), ('GT', NEG1, 0), ('SLT', NEG1, 0), ('SGT', 0, NEG1),
    ('EQ', 42, 42), ('EQ', 42, 43), ('AND', 0xff00, 0x0ff0), ('OR', 0xff00, 0x0ff0), ('XOR', 0xff00, 0x0ff0),
    ('BYTE', 31, 0xabcd), ('BYTE', 0, 2**255 + 5), ('BYTE', 32, NEG1), ('SHL', 4, 1), ('SHL', 256, 1),
    ('SHL', 255, 3), ('SHR', 4, 0x100), ('SHR', 300, NEG1), ('SAR', 4, u(-256)), ('SAR', 4, 0x100),
    ('SAR', 400, u(-1)), ('SAR', 1, MIN),
]
cases = []
def case(name, code, expected, env=None):
    c = {'name': name, 'code': code, 'expected': expected}
    if env: c['env'] = env
    cases.append(c)

counts = {}
for op, a, b in vectors:
    counts[op] = counts.get(op, 0) + 1
    r = BIN[op](a, b)
    case(f"arith-{op.lower()}-{counts[op]}", asm(f"PUSH32 {hx(b)}\nPUSH32 {hx(a)}\n{op}\nSTOP"),
         {'halt': 'stop', 'stack': [hx(r)]})
for name, a, b, n, f in [('addmod', NEG1, 2, 10, lambda a, b, n: (a + b) % n), ('addmod-zero', 1, 2, 0, lambda *x: 0),
                         ('mulmod', NEG1, NEG1, 7, lambda a, b, n: (a * b) % n), ('mulmod-zero', 3, 4, 0, lambda *x: 0)]:
    op = name.split('-')[0].upper()
    case(f"arith-{name}", asm(f"PUSH32 {hx(n)}\nPUSH32 {hx(b)}\nPUSH32 {hx(a)}\n{op}\nSTOP"),
         {'halt': 'stop', 'stack': [hx(f(a, b, n) if n else 0)]})
case("arith-iszero", asm("PUSH1 0\nISZERO\nPUSH1 9\nISZERO\nSTOP"), {'stack': ['0x0', '0x1']})
case("arith-not", asm("PUSH1 0\nNOT\nSTOP"), {'stack': [hx(NEG1)]})

# Stack manipulation.
pushes = "\n".join(push(i) for i in range(1, 17))
case("stack-dup1", asm("PUSH1 7\nDUP1\nSTOP"), {'stack': ['0x7', '0x7']})
case("stack-dup16", asm(pushes + "\nDUP16\nSTOP"), {'stack': [hx(1)] + [hx(i) for i in range(16, 0, -1)]})
swapped = [hx(17)] + [hx(i) for i in range(15, 0, -1)] + [hx(16)]
case("stack-swap16", asm("PUSH1 17\n" + "\n".join(push(i) for i in range(1, 17)) + "\nSWAP16\nSTOP"), {'stack': swapped})
case("stack-swap1", asm("PUSH1 1\nPUSH1 2\nSWAP1\nSTOP"), {'stack': ['0x1', '0x2']})
case("stack-pop", asm("PUSH1 1\nPUSH1 2\nPOP\nSTOP"), {'stack': ['0x1']})
case("stack-underflow", asm("PUSH1 1\nADD\nSTOP"), {'halt': 'stack-underflow', 'stack': ['0x1']})
case("stack-underflow-dup", asm("PUSH1 1\nDUP2"), {'halt': 'stack-underflow'})
case("stack-overflow", asm("JUMPDEST\nPUSH1 1\nPUSH1 0\nJUMP"), {'halt': 'stack-overflow'})
case("stack-truncated-push", "6101", {'halt': 'stop', 'stack': ['0x100']})
case("stack-implicit-stop", asm("PUSH1 3"), {'halt': 'stop', 'stack': ['0x3']})

# Control flow. Offsets: PUSH1 = 2 bytes.
case("jump-to-jumpdest", asm("PUSH1 4\nJUMP\nINVALID\nJUMPDEST\nPUSH1 1\nSTOP"), {'halt': 'stop', 'stack': ['0x1']})
case("jump-not-jumpdest", asm("PUSH1 3\nJUMP\nSTOP"), {'halt': 'bad-jump'})
case("jump-into-push-data", asm("PUSH1 4\nJUMP\nPUSH1 0x5b\nSTOP"), {'halt': 'bad-jump'})
case("jump-out-of-range", asm("PUSH2 0x1000\nJUMP"), {'halt': 'bad-jump'})
case("jumpi-not-taken", asm("PUSH1 0\nPUSH1 8\nJUMPI\nPUSH1 1\nSTOP\nJUMPDEST\nPUSH1 2\nSTOP"), {'stack': ['0x1']})
case("jumpi-taken", asm("PUSH1 5\nPUSH1 8\nJUMPI\nPUSH1 1\nSTOP\nJUMPDEST\nPUSH1 2\nSTOP"), {'stack': ['0x2']})
case("jumpi-bad-target-not-taken", asm("PUSH1 0\nPUSH1 3\nJUMPI\nSTOP"), {'halt': 'stop', 'stack': []})
# Count down from 5, adding to slot 0 each round.
loop = """PUSH1 5
JUMPDEST
DUP1
ISZERO
PUSH1 24
JUMPI
PUSH1 0
SLOAD
PUSH1 1
ADD
PUSH1 0
SSTORE
PUSH1 1
SWAP1
SUB
PUSH1 2
JUMP
JUMPDEST
STOP"""
case("jump-loop-counter", asm(loop), {'halt': 'stop', 'storage': {'0x0': '0x5'}, 'stack': ['0x0']})
case("jump-step-limit", asm("JUMPDEST\nPUSH1 0\nJUMP"), {'halt': 'step-limit'}, {'step_limit': 100})
case("pc-value", asm("PUSH1 0\nPOP\nPC\nSTOP"), {'stack': ['0x3']})

# Memory.
case("memory-zero-init", asm("PUSH1 0x40\nMLOAD\nMSIZE\nSTOP"), {'stack': ['0x60', '0x0'], 'memory': '00' * 0x60})
case("memory-empty", asm("MSIZE\nSTOP"), {'stack': ['0x0'], 'memory': ''})
case("memory-mstore-mload", asm("PUSH2 0xbeef\nPUSH1 0\nMSTORE\nPUSH1 0\nMLOAD\nSTOP"),
     {'stack': ['0xbeef'], 'memory': '00' * 30 + 'beef'})
case("memory-unaligned", asm("PUSH1 0xff\nPUSH1 1\nMSTORE\nPUSH1 2\nMLOAD\nSTOP"),
     {'stack': [hx(0xff << 8)], 'memory': '00' * 32 + 'ff' + '00' * 31})
case("memory-mstore8", asm("PUSH2 0x1234\nPUSH1 3\nMSTORE8\nMSIZE\nSTOP"),
     {'stack': ['0x20'], 'memory': '000000' + '34' + '00' * 28})
case("memory-limit", asm("PUSH1 1\nPUSH4 0x10000000\nMSTORE\nSTOP"), {'halt': 'memory-limit'})
case("memory-sha3-empty", asm("PUSH1 0\nPUSH1 0\nSHA3\nSTOP"),
     {'stack': ['0x' + keccak.new(digest_bits=256, data=b'').hexdigest()]})
case("memory-sha3-word", asm("PUSH1 0x2a\nPUSH1 0\nMSTORE\nPUSH1 0x20\nPUSH1 0\nSHA3\nSTOP"),
     {'stack': [hx(int(keccak.new(digest_bits=256, data=(42).to_bytes(32, 'big')).hexdigest(), 16))]})

# Storage and halting.
case("storage-sstore-sload", asm("PUSH1 9\nPUSH1 1\nSSTORE\nPUSH1 1\nSLOAD\nSTOP"),
     {'halt': 'stop', 'stack': ['0x9'], 'storage': {'0x1': '0x9'}})
case("storage-initial", asm("PUSH1 7\nSLOAD\nSTOP"), {'stack': ['0x63'], 'storage': {'0x7': '0x63'}},
     {'storage': {'0x7': '0x63'}})
case("storage-clear", asm("PUSH1 0\nPUSH1 7\nSSTORE\nSTOP"), {'storage': {}}, {'storage': {'0x7': '0x63'}})
case("revert-unchanged-storage", asm("PUSH1 1\nPUSH1 0\nSSTORE\nPUSH1 0\nPUSH1 0\nREVERT"),
     {'halt': 'revert', 'storage': {'0x0': '0x5'}, 'return': ''}, {'storage': {'0x0': '0x5'}})
case("revert-return-data", asm("PUSH1 0xaa\nPUSH1 0\nMSTORE8\nPUSH1 1\nPUSH1 0\nREVERT"), {'halt': 'revert', 'return': 'aa'})
case("invalid-unchanged-storage", asm("PUSH1 1\nPUSH1 0\nSSTORE\nINVALID"), {'halt': 'invalid', 'storage': {}})
case("undefined-opcode", "0c", {'halt': 'invalid'})
case("return-word", asm("PUSH1 0x2a\nPUSH1 0\nMSTORE\nPUSH1 0x20\nPUSH1 0\nRETURN"),
     {'halt': 'return', 'return': '00' * 31 + '2a', 'stack': ['0x0', '0x20']})
case("selfdestruct-keeps-storage", asm("PUSH1 1\nPUSH1 0\nSSTORE\nCALLER\nSELFDESTRUCT"),
     {'halt': 'selfdestruct', 'storage': {'0x0': '0x1'}})

# Calls: the callee never runs, results come from the script.
call = "PUSH1 0\nPUSH1 0\nPUSH1 0\nPUSH1 0\nPUSH1 0\nCALLER\nGAS\nCALL"
case("call-failure-storage-unchanged", asm(f"PUSH1 1\nPUSH1 0\nSSTORE\n{call}\nPUSH1 1\nSSTORE\nSTOP"),
     {'halt': 'stop', 'storage': {'0x0': '0x1'}}, {'calls': [{'success': False}]})
case("call-success-flag", asm(f"{call}\nPUSH1 1\nSSTORE\nSTOP"), {'storage': {'0x1': '0x1'}},
     {'calls': [{'success': True}]})
case("call-unscripted-fails", asm(f"{call}\nSTOP"), {'stack': ['0x0']})
ocall = "PUSH1 4\nPUSH1 0\nPUSH1 0\nPUSH1 0\nPUSH1 0\nCALLER\nGAS\nCALL"
case("call-return-data", asm(f"{ocall}\nRETURNDATASIZE\nPUSH1 0\nMLOAD\nSTOP"),
     {'stack': [hx(0xdeadbeef << 224), '0x4', '0x1']}, {'calls': [{'success': True, 'returndata': 'deadbeef'}]})
case("call-returndatacopy", asm(f"{call}\nPOP\nPUSH1 2\nPUSH1 1\nPUSH1 0\nRETURNDATACOPY\nPUSH1 0\nMLOAD\nSTOP"),
     {'stack': [hx(0xbbcc << 240)]}, {'calls': [{'success': True, 'returndata': 'aabbccdd'}]})
case("call-returndatacopy-out-of-bounds", asm(f"{call}\nPOP\nPUSH1 5\nPUSH1 0\nPUSH1 0\nRETURNDATACOPY\nSTOP"),
     {'halt': 'invalid'}, {'calls': [{'success': True, 'returndata': 'aabbccdd'}]})
scall = "PUSH1 0\nPUSH1 0\nPUSH1 0\nPUSH1 0\nCALLER\nGAS\nSTATICCALL"
case("staticcall-failure", asm(f"{scall}\nSTOP"), {'stack': ['0x0']}, {'calls': [{'success': False}]})

# Environment.
case("env-caller-callvalue", asm("CALLER\nCALLVALUE\nADDRESS\nSTOP"), {'stack': ['0x1000', '0x3e8', '0x2000']},
     {'callvalue': 1000})
case("env-calldataload-padded", asm("PUSH1 1\nCALLDATALOAD\nCALLDATASIZE\nSTOP"),
     {'stack': ['0x3', hx(0xbbcc << 240)]}, {'calldata': 'aabbcc'})
case("env-calldatacopy", asm("PUSH1 4\nPUSH1 2\nPUSH1 0\nCALLDATACOPY\nSTOP"),
     {'memory': 'cc000000' + '00' * 28}, {'calldata': 'aabbcc'})
case("env-block", asm("TIMESTAMP\nNUMBER\nSTOP"), {'stack': ['0x64', '0x5f5e100']},
     {'timestamp': '100000000', 'number': 100})
case("env-chainid-undefined-before-istanbul", asm("CHAINID\nSTOP"), {'halt': 'invalid'})
case("env-codesize-codecopy", asm("CODESIZE\nPUSH1 1\nPUSH1 0\nPUSH1 0\nCODECOPY\nPUSH1 0\nMLOAD\nSTOP"),
     {'stack': [hx(0x38 << 248), '0xc']})

out = sys.argv[1]
os.makedirs(out, exist_ok=True)
for c in cases:
    with open(os.path.join(out, c['name'] + '.json'), 'w') as f:
        json.dump(c, f, indent=2)
        f.write('\n')
print(len(cases), 'cases')

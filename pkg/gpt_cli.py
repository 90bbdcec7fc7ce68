#!/usr/bin/env python3
"""
GPT Command Line Interface
Key generation, file encryption and decryption, key auditing and the worked
examples, all reproducible from a 64-bit seed.

Exit codes: 0 ok, 2 usage or malformed file, 3 failed invariant,
4 decoding failure, 5 distinguisher succeeded.
"""

import argparse
import json
import os
import secrets
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, Field

from gabidulin_code import DecodingFailure
from gpt_cryptosystem import KeyGenerationError, decrypt, encrypt, keygen
from gpt_params import GptParams, XMode
from key_store import (
    KeyFileError,
    KeyStore,
    ciphertext_from_dict,
    ciphertext_to_dict,
    pack_message,
    private_key_from_dict,
    unpack_message,
)
from log_config import get_logger
from overbeck_analyzer import distinguisher_attack, security_report
from worked_examples import run_worked_examples

# Get logger
logger = get_logger(__name__)

# Load environment variables
load_dotenv()

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ASSERTION = 3
EXIT_DECODE = 4
EXIT_INSECURE = 5

RESEARCH_WARNING = (
    "WARNING: research implementation of the GPT rank-code cryptosystem. "
    "Not a secure encryption product; do not protect real data with it."
)


class CliConfig(BaseModel):
    """Validated command line"""

    command: str
    N: int
    n: int
    k: int
    t1: int
    a: int
    t2: Optional[int] = None
    x_mode: XMode = XMode.SMART_SIMPLE
    seed: int = Field(ge=0, lt=2 ** 64)
    pub: Optional[Path] = None
    priv: Optional[Path] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    json_output: bool = False

    def params(self) -> GptParams:
        return GptParams(
            N=self.N, n=self.n, k=self.k, t1=self.t1, a=self.a,
            t2_max=self.t2, x_mode=self.x_mode,
        )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser; parameter defaults come from the environment"""
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument('--N', type=int, default=int(os.getenv('GPT_FIELD_DEGREE', '8')),
                        help='Extension degree of GF(2^N)')
    common.add_argument('--n', type=int, default=int(os.getenv('GPT_CODE_LENGTH', '8')),
                        help='Gabidulin code length')
    common.add_argument('--k', type=int, default=int(os.getenv('GPT_CODE_DIMENSION', '4')),
                        help='Gabidulin code dimension')
    common.add_argument('--t1', type=int, default=int(os.getenv('GPT_DISTORTION_WIDTH', '4')),
                        help='Columns of the distortion matrix X')
    common.add_argument('--a', type=int, default=int(os.getenv('GPT_RANK_DEFICIENCY', '2')),
                        help='Designed rank deficiency t1 - rank(Y_ext)')
    common.add_argument('--t2', type=int, default=None,
                        help='Error rank per block (default floor((n-k)/2))')
    common.add_argument('--x-mode', dest='x_mode', choices=[m.value for m in XMode],
                        default=os.getenv('GPT_X_MODE', XMode.SMART_SIMPLE.value),
                        help='Distortion matrix construction')
    common.add_argument('--seed', type=int, default=None,
                        help='64-bit seed (default: fresh entropy, always echoed)')
    common.add_argument('--pub', type=Path, default=None, help='Public key file')
    common.add_argument('--priv', type=Path, default=None, help='Private key file')
    common.add_argument('--in', dest='input', type=Path, default=None, help='Input file')
    common.add_argument('--out', dest='output', type=Path, default=None, help='Output file')
    common.add_argument('--json', dest='json_output', action='store_true',
                        help='Machine-readable output only')

    parser = argparse.ArgumentParser(
        prog='gpt_cli',
        description='GPT rank-code cryptosystem with Smart distortion matrices',
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(title='commands', dest='command', required=True)
    sub.add_parser('keygen', parents=[common], allow_abbrev=False,
                   help='Generate a key pair')
    sub.add_parser('encrypt', parents=[common], allow_abbrev=False,
                   help='Encrypt a file with a public key')
    sub.add_parser('decrypt', parents=[common], allow_abbrev=False,
                   help='Decrypt a ciphertext file with a private key')
    sub.add_parser('analyze', parents=[common], allow_abbrev=False,
                   help='Audit a private key or run the distinguisher on a public key')
    examples = sub.add_parser('paper-examples', allow_abbrev=False,
                              help='Rebuild the worked examples and compare with golden values')
    examples.add_argument('--json', dest='json_output', action='store_true',
                          help='Machine-readable output only')
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    values = vars(args).copy()
    if values.get('seed') is None:
        values['seed'] = secrets.randbits(64)
    if args.command == 'paper-examples':
        values.update(N=8, n=8, k=4, t1=4, a=2)
    return CliConfig(**values)


def _emit(config: CliConfig, document: Dict[str, Any], lines: List[str]):
    if config.json_output:
        print(json.dumps(document, indent=2))
        return
    for line in lines:
        print(line)


def _require(path: Optional[Path], flag: str, command: str) -> Path:
    if path is None:
        raise ValueError(f"{command} needs {flag}")
    return path


def cmd_keygen(config: CliConfig, store: KeyStore) -> int:
    """Generate and save a key pair"""
    params = config.params()
    pub, priv = keygen(params, np.random.default_rng(config.seed))
    pub_file, priv_file = store.save_keys(pub, priv, config.seed, config.pub, config.priv)

    document = {
        "seed": config.seed,
        "params": params.model_dump(mode="json"),
        "public_key_bits": params.public_key_bits,
        "rate": params.rate,
        "rank_x": priv.rank_x,
        "public_key": str(pub_file),
        "private_key": str(priv_file),
    }
    _emit(config, document, [
        f"seed: {config.seed}",
        f"public key: {params.public_key_bits} bits",
        f"rate: {params.rate:.3f}",
        f"rank of X: {priv.rank_x}",
        f"public key file: {pub_file}",
        f"private key file: {priv_file}",
    ])
    return EXIT_OK


def cmd_encrypt(config: CliConfig, store: KeyStore) -> int:
    """Encrypt a file block by block with per-block generators"""
    pub = store.load_public(config.pub)
    data = _require(config.input, '--in', 'encrypt').read_bytes()
    t2 = pub.t2_max if config.t2 is None else config.t2

    blocks = pack_message(data, pub.ctx, pub.params.k)
    cipher = [
        encrypt(pub, m, np.random.default_rng([config.seed, index]), t2)
        for index, m in enumerate(blocks)
    ]
    document = ciphertext_to_dict(pub.params, cipher, config.seed, t2)
    logger.info(f"✓ Encrypted {len(data)} bytes into {len(cipher)} blocks (t2={t2})")

    if config.output is None:
        print(json.dumps(document, indent=2))
        return EXIT_OK
    store.write_json(config.output, document)
    _emit(config, {"seed": config.seed, "blocks": len(cipher), "t2": t2, "output": str(config.output)}, [
        f"seed: {config.seed}",
        f"blocks: {len(cipher)} (t2={t2})",
        f"ciphertext file: {config.output}",
    ])
    return EXIT_OK


def cmd_decrypt(config: CliConfig, store: KeyStore) -> int:
    """Decrypt a ciphertext file and restore the exact byte stream"""
    priv = store.load_private(config.priv)
    document = store.read_json(_require(config.input, '--in', 'decrypt'))
    params, blocks = ciphertext_from_dict(document, priv.ctx)
    if params != priv.params:
        raise KeyFileError("Ciphertext parameters do not match the private key")

    plain = []
    for index, c in enumerate(blocks):
        try:
            plain.append(decrypt(priv, c))
        except DecodingFailure as e:
            raise DecodingFailure(f"Block {index}: {e}") from e
    data = unpack_message(plain, priv.ctx)
    logger.info(f"✓ Decrypted {len(blocks)} blocks into {len(data)} bytes")

    if config.output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        config.output.parent.mkdir(parents=True, exist_ok=True)
        config.output.write_bytes(data)
        _emit(config, {"bytes": len(data), "output": str(config.output)}, [
            f"plaintext file: {config.output} ({len(data)} bytes)",
        ])
    return EXIT_OK


def cmd_analyze(config: CliConfig, store: KeyStore) -> int:
    """
    Audit a key

    A private key (the default when --pub is not given) gets the full Y_ext
    report with the kernel dimension measured on its public key; a public key
    gets the kernel distinguisher only.
    """
    if config.priv is not None or config.pub is None:
        data = store.read_json(config.priv or store.private_path)
        priv = private_key_from_dict(data)
        report = security_report(priv, priv.params, seed=data.get("seed"))
        document = report.model_dump(mode="json")
        feasible = report.kernel_dim == 1
        lines = [
            f"rank(Y_ext): {report.rk_y_ext} of t1={priv.params.t1} (u={report.u})",
            f"effective a: {report.a_effective}",
            f"rank of X: {report.rank_x}",
            f"kernel dimension: {report.kernel_dim}",
            f"work factor: 2^{report.work_factor_log2:.2f}",
            f"secure (aN >= 60): {report.secure}",
            json.dumps(document, indent=2),
        ]
    else:
        data = store.read_json(config.pub)
        pub = store.load_public(config.pub)
        result = distinguisher_attack(pub)
        feasible = result.attack_feasible
        document = {
            "kernel_dim": result.kernel_dim,
            "attack_feasible": feasible,
            "search_space_log2": result.search_space_log2,
            "u": result.u,
            "params": pub.params.model_dump(mode="json"),
            "seed": data.get("seed"),
        }
        lines = [
            f"kernel dimension: {result.kernel_dim} (u={result.u})",
            f"search space: 2^{result.search_space_log2}",
            json.dumps(document, indent=2),
        ]

    _emit(config, document, lines)
    if feasible:
        logger.warning("✗ Kernel distinguisher recovers the code structure")
        return EXIT_INSECURE
    return EXIT_OK


def cmd_paper_examples(config: CliConfig, store: KeyStore) -> int:
    """Rebuild the worked examples and print a pass/fail table"""
    started = time.perf_counter()
    checks = run_worked_examples()
    elapsed = time.perf_counter() - started
    passed = all(c.passed for c in checks)

    lines = [f"{'example':<8} {'check':<30} result"]
    for c in checks:
        lines.append(f"{c.example:<8} {c.check:<30} {'✓ PASSED' if c.passed else '✗ FAILED'}")
        if not c.passed:
            lines.append(f"{'':<8} expected {c.expected}")
            lines.append(f"{'':<8} actual   {c.actual}")
    lines.append(f"{len(checks)} checks in {elapsed:.2f}s")

    _emit(config, {"passed": passed, "checks": [c.model_dump() for c in checks]}, lines)
    return EXIT_OK if passed else EXIT_ASSERTION


COMMANDS = {
    'keygen': cmd_keygen,
    'encrypt': cmd_encrypt,
    'decrypt': cmd_decrypt,
    'analyze': cmd_analyze,
    'paper-examples': cmd_paper_examples,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map failures to exit codes

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        int: Process exit code
    """
    args = build_parser().parse_args(argv)
    print(RESEARCH_WARNING, file=sys.stderr)

    logger.info("=" * 80)
    logger.info(f"GPT CLI - {args.command.upper()}")
    logger.info("=" * 80)

    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config, KeyStore())
    except DecodingFailure as e:
        logger.error(f"✗ Decoding failed: {e}")
        print(f"Error: decoding failed: {e}", file=sys.stderr)
        return EXIT_DECODE
    except (KeyGenerationError, AssertionError) as e:
        logger.error(f"✗ Invariant check failed: {e}", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ASSERTION
    except (ValueError, OSError) as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

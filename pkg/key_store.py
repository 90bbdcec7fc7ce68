#!/usr/bin/env python3
"""
Key Store Module
JSON files for GPT keys and ciphertexts, and packing of byte streams into
plaintext blocks of k field elements
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import galois
import numpy as np
from dotenv import load_dotenv

from finite_field import FieldContext
from gabidulin_code import make_code
from gpt_cryptosystem import GptPrivateKey, GptPublicKey, SmartXRecord
from gpt_params import GptParams
from log_config import get_logger

# Get logger
logger = get_logger(__name__)

# Load environment variables
load_dotenv()

# Bytes of the little-endian plaintext length header
LENGTH_HEADER_BYTES = 8

PUBLIC_KEY_FILE = "gpt_key.pub.json"
PRIVATE_KEY_FILE = "gpt_key.priv.json"


class KeyFileError(ValueError):
    """Raised when a key or ciphertext file is missing or malformed"""


def _ints(values) -> list:
    return np.array(values, dtype=np.int64).tolist()


def _matrix(ctx: FieldContext, rows, shape, what: str):
    M = ctx.array(rows)
    if M.shape != shape:
        raise KeyFileError(f"{what} has shape {M.shape}, expected {shape}")
    return M


def public_key_to_dict(pub: GptPublicKey, seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "kind": "gpt-public-key",
        "seed": seed,
        "params": pub.params.model_dump(mode="json"),
        "field": pub.ctx.to_dict(),
        "G_pub": _ints(pub.G_pub),
    }


def public_key_from_dict(data: Dict[str, Any]) -> GptPublicKey:
    """
    Rebuild a public key

    Raises:
        KeyFileError: On a wrong kind, missing fields or bad shapes
    """
    try:
        if data.get("kind") != "gpt-public-key":
            raise KeyFileError(f"Not a public key file (kind={data.get('kind')!r})")
        params = GptParams.model_validate(data["params"])
        ctx = FieldContext.from_dict(data["field"])
        G_pub = _matrix(ctx, data["G_pub"], (params.k, params.n + params.t1), "G_pub")
        return GptPublicKey(params=params, ctx=ctx, G_pub=G_pub)
    except KeyFileError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise KeyFileError(f"Malformed public key: {e}") from e


def private_key_to_dict(priv: GptPrivateKey, seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "kind": "gpt-private-key",
        "seed": seed,
        "params": priv.params.model_dump(mode="json"),
        "field": priv.ctx.to_dict(),
        "g": _ints(priv.code.g),
        "S": _ints(priv.S),
        "P": _ints(priv.P),
        "X": None if priv.X is None else _ints(priv.X),
        "x_record": None if priv.record is None else priv.record.model_dump(mode="json"),
    }


def private_key_from_dict(data: Dict[str, Any]) -> GptPrivateKey:
    """
    Rebuild a private key, recomputing G_k, h, S^-1 and P^-1

    Raises:
        KeyFileError: On a wrong kind, missing fields, bad shapes or singular scramblers
    """
    try:
        if data.get("kind") != "gpt-private-key":
            raise KeyFileError(f"Not a private key file (kind={data.get('kind')!r})")
        params = GptParams.model_validate(data["params"])
        ctx = FieldContext.from_dict(data["field"])
        n, k, t1 = params.n, params.k, params.t1

        code = make_code(ctx, n, k, g=ctx.array(data["g"]))
        S = _matrix(ctx, data["S"], (k, k), "S")
        P = galois.GF2(np.array(data["P"], dtype=np.int64))
        if P.shape != (n + t1, n + t1):
            raise KeyFileError(f"P has shape {P.shape}, expected {(n + t1, n + t1)}")
        X = None if data.get("X") is None else _matrix(ctx, data["X"], (k, t1), "X")
        record = None if data.get("x_record") is None else SmartXRecord.model_validate(data["x_record"])

        return GptPrivateKey(
            params=params, ctx=ctx, code=code,
            S=S, S_inv=np.linalg.inv(S), P=P, P_inv=np.linalg.inv(P),
            X=X, record=record,
        )
    except KeyFileError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, np.linalg.LinAlgError) as e:
        raise KeyFileError(f"Malformed private key: {e}") from e


def ciphertext_to_dict(params: GptParams, blocks: List[galois.FieldArray],
                       seed: Optional[int] = None, t2: Optional[int] = None) -> Dict[str, Any]:
    return {
        "kind": "gpt-ciphertext",
        "seed": seed,
        "t2": t2,
        "params": params.model_dump(mode="json"),
        "blocks": [_ints(b) for b in blocks],
    }


def ciphertext_from_dict(data: Dict[str, Any], ctx: FieldContext) -> Tuple[GptParams, List[galois.FieldArray]]:
    """
    Parse ciphertext blocks of length n + t1

    Raises:
        KeyFileError: On a wrong kind or a block of the wrong length
    """
    try:
        if data.get("kind") != "gpt-ciphertext":
            raise KeyFileError(f"Not a ciphertext file (kind={data.get('kind')!r})")
        params = GptParams.model_validate(data["params"])
        width = params.n + params.t1
        blocks = []
        for index, block in enumerate(data["blocks"]):
            c = ctx.array(block)
            if c.shape != (width,):
                raise KeyFileError(f"Block {index} has shape {c.shape}, expected ({width},)")
            blocks.append(c)
        return params, blocks
    except KeyFileError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise KeyFileError(f"Malformed ciphertext: {e}") from e


def pack_message(data: bytes, ctx: FieldContext, k: int) -> List[galois.FieldArray]:
    """
    Split a byte stream into plaintext blocks

    An 8-byte little-endian length header precedes the data; the bit stream is
    read least significant bit first, cut into kN-bit blocks and zero-padded.
    Element j of a block takes bits jN .. jN+N-1, bit i being the coefficient of x^i.

    Args:
        data: Plaintext bytes
        ctx: Field context
        k: Elements per block

    Returns:
        List of length-k vectors over GF(2^N)
    """
    payload = len(data).to_bytes(LENGTH_HEADER_BYTES, "little") + data
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    block_bits = k * ctx.N
    count = -(-bits.size // block_bits)
    padded = np.zeros(count * block_bits, dtype=np.uint8)
    padded[:bits.size] = bits
    elements = ctx.from_bits(padded.reshape(count * k, ctx.N))
    return [elements[i * k:(i + 1) * k] for i in range(count)]


def unpack_message(blocks: List[galois.FieldArray], ctx: FieldContext) -> bytes:
    """
    Inverse of pack_message

    Raises:
        KeyFileError: If the stream is shorter than its header or its declared length
    """
    if not blocks:
        raise KeyFileError("Ciphertext holds no blocks")
    bits = np.concatenate([np.array(ctx.to_bits(b), dtype=np.uint8).reshape(-1) for b in blocks])
    stream = np.packbits(bits, bitorder="little").tobytes()
    if len(stream) < LENGTH_HEADER_BYTES:
        raise KeyFileError("Decrypted stream is shorter than its length header")
    length = int.from_bytes(stream[:LENGTH_HEADER_BYTES], "little")
    end = LENGTH_HEADER_BYTES + length
    if end > len(stream):
        raise KeyFileError(f"Length header claims {length} bytes, stream holds {len(stream) - LENGTH_HEADER_BYTES}")
    return stream[LENGTH_HEADER_BYTES:end]


class KeyStore:
    """Reads and writes the JSON files under the key directory"""

    def __init__(self, key_dir: Optional[str] = None):
        """Initialize key store"""
        self.key_dir = Path(key_dir or os.getenv('GPT_KEY_DIR', 'keys'))

    @property
    def public_path(self) -> Path:
        return self.key_dir / PUBLIC_KEY_FILE

    @property
    def private_path(self) -> Path:
        return self.key_dir / PRIVATE_KEY_FILE

    def write_json(self, path: Path, document: Dict[str, Any]) -> Path:
        """
        Write a document as indented JSON

        Args:
            path: Target file; parent directories are created
            document: JSON-serializable dict

        Returns:
            Path: The written file
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2)
            f.write('\n')
        logger.debug(f"Wrote {document.get('kind', 'document')} to {path}")
        return path

    def read_json(self, path: Path) -> Dict[str, Any]:
        """
        Read a JSON document

        Raises:
            KeyFileError: If the file is missing or not a JSON object
        """
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
        except FileNotFoundError as e:
            raise KeyFileError(f"File not found: {path}") from e
        except json.JSONDecodeError as e:
            raise KeyFileError(f"Invalid JSON in {path}: {e}") from e
        if not isinstance(document, dict):
            raise KeyFileError(f"{path} does not hold a JSON object")
        return document

    def save_keys(self, pub: GptPublicKey, priv: GptPrivateKey, seed: Optional[int] = None,
                  public_path: Optional[Path] = None, private_path: Optional[Path] = None):
        """Write both key files, returning their paths"""
        pub_file = self.write_json(public_path or self.public_path, public_key_to_dict(pub, seed))
        priv_file = self.write_json(private_path or self.private_path, private_key_to_dict(priv, seed))
        logger.info(f"Keys saved: {pub_file}, {priv_file}")
        return pub_file, priv_file

    def load_public(self, path: Optional[Path] = None) -> GptPublicKey:
        return public_key_from_dict(self.read_json(path or self.public_path))

    def load_private(self, path: Optional[Path] = None) -> GptPrivateKey:
        return private_key_from_dict(self.read_json(path or self.private_path))

"""Command-line front end.

Subcommands: keygen, encrypt, decrypt, transform, invert, keyspace, verify,
knn, keysense, watermark. Images travel as binary PGM/PPM, keys as JSON with
a hex master field, reports as JSON with sorted keys. Exit codes: 0 success,
1 usage error, 2 I/O or file-format error, 3 domain error (bad dimensions,
wrong key material, non-invertible transform).

Datasets are directories containing a ``labels.csv`` (rows ``filename,label``,
optional header) next to the referenced PGM/PPM files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import etc, learnable, netpbm
from .errors import FormatError, ImageKeyError
from .etc import EtcConfig
from .keystream import SecretKey, load_key, save_key
from .learnable import TransformSpec
from .mlprops import knn_accuracy, knn_predict, verify_properties, vectorize
from .watermark import evaluate_key_sensitivity, watermark_detect


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise UsageError(message)


def _emit(obj, path=None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_labels_csv(path) -> list[tuple[str, str]]:
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except csv.Error as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if rows and [c.strip().lower() for c in rows[0]] == ["filename", "label"]:
        rows = rows[1:]
    if not rows:
        raise FormatError(f"{path}: no labeled rows")
    if any(len(row) < 2 for row in rows):
        raise FormatError(f"{path}: expected filename,label rows")
    return [(row[0].strip(), row[1].strip()) for row in rows]


def _load_dataset(dirpath):
    base = Path(dirpath)
    entries = _read_labels_csv(base / "labels.csv")
    images = [netpbm.read_image(base / name) for name, _ in entries]
    return images, [label for _, label in entries]


def _read_preds_csv(path) -> list[str]:
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except csv.Error as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if rows and rows[0][-1].strip().lower() == "label":
        rows = rows[1:]
    if not rows:
        raise FormatError(f"{path}: no prediction rows")
    return [row[-1].strip() for row in rows]


def _build_transform(args, key: SecretKey):
    if args.variant in etc.VARIANTS:
        return EtcConfig(variant=args.variant, bx=args.bx, by=args.by, key=key)
    block = 1 if args.variant == learnable.VARIANT_PIXELWISE else args.block
    return TransformSpec(variant=args.variant, key=key, block=block)


def _add_key_arg(parser) -> None:
    parser.add_argument("--key", required=True, help="key file (JSON)")


def _add_etc_args(parser) -> None:
    parser.add_argument(
        "--variant", choices=etc.VARIANTS, default=etc.VARIANT_COLOR
    )
    parser.add_argument("--bx", type=int, default=16, help="block width")
    parser.add_argument("--by", type=int, default=16, help="block height")


def _add_learnable_args(parser) -> None:
    parser.add_argument(
        "--variant", choices=learnable.VARIANTS, default=learnable.VARIANT_SHF
    )
    parser.add_argument("--block", type=int, default=8, help="block size M")


def _add_any_transform_args(parser) -> None:
    parser.add_argument(
        "--variant",
        choices=etc.VARIANTS + learnable.VARIANTS,
        default=etc.VARIANT_COLOR,
    )
    parser.add_argument("--bx", type=int, default=16)
    parser.add_argument("--by", type=int, default=16)
    parser.add_argument("--block", type=int, default=8)


def _cmd_keygen(args) -> int:
    if args.seed is not None:
        key = SecretKey.from_seed(args.seed)
    else:
        key = SecretKey.generate(args.bytes)
    save_key(key, args.output)
    return 0


def _cmd_encrypt(args) -> int:
    cfg = _build_transform(args, load_key(args.key))
    img = netpbm.read_image(args.input)
    netpbm.write_image(etc.encrypt(img, cfg), args.output)
    return 0


def _cmd_decrypt(args) -> int:
    cfg = _build_transform(args, load_key(args.key))
    img = netpbm.read_image(args.input)
    netpbm.write_image(etc.decrypt(img, cfg, unpack=not args.no_unpack), args.output)
    return 0


def _cmd_transform(args) -> int:
    spec = _build_transform(args, load_key(args.key))
    img = netpbm.read_image(args.input)
    if spec.variant == learnable.VARIANT_FFX:
        values = learnable.ffx_values(img, spec)
        peak = int(values.max())
        np.save(args.output, values / peak)
        sidecar = args.sidecar or f"{args.output}.json"
        _emit({"max": peak}, sidecar)
        return 0
    netpbm.write_image(learnable.block_transform(img, spec), args.output)
    return 0


def _cmd_invert(args) -> int:
    spec = _build_transform(args, load_key(args.key))
    img = netpbm.read_image(args.input)
    netpbm.write_image(learnable.block_transform_invert(img, spec), args.output)
    return 0


def _cmd_keyspace(args) -> int:
    report = etc.keyspace_color(args.x, args.y, args.bx, args.by)
    _emit({"blocks": report.n, "log2_keyspace": report.log2_keyspace}, args.output)
    return 0


def _cmd_verify(args) -> int:
    transform = _build_transform(args, load_key(args.key))
    images, _ = _load_dataset(args.dataset)
    report = verify_properties(images, transform)
    _emit(report.to_dict(), args.output)
    return 0


def _cmd_knn(args) -> int:
    train_images, train_labels = _load_dataset(args.train)
    test_images, test_labels = _load_dataset(args.test)
    train_X = np.stack([vectorize(i) for i in train_images]).astype(np.float64)
    test_X = np.stack([vectorize(i) for i in test_images]).astype(np.float64)
    preds = knn_predict(train_X, train_labels, test_X, args.k)
    result = {
        "k": args.k,
        "predictions": preds,
        "accuracy": float(np.mean([p == t for p, t in zip(preds, test_labels)])),
    }
    if args.key is not None:
        from .mlprops import apply_transform

        transform = _build_transform(args, load_key(args.key))
        etrain = np.stack(
            [vectorize(apply_transform(i, transform)) for i in train_images]
        ).astype(np.float64)
        etest = np.stack(
            [vectorize(apply_transform(i, transform)) for i in test_images]
        ).astype(np.float64)
        epreds = knn_predict(etrain, train_labels, etest, args.k)
        result["predictions_transformed"] = epreds
        result["accuracy_transformed"] = knn_accuracy(
            etrain, train_labels, etest, test_labels, args.k
        )
        result["agreement"] = watermark_detect(preds, epreds)
    _emit(result, args.output)
    return 0


def _cmd_keysense(args) -> int:
    transform = _build_transform(args, load_key(args.key))
    train_images, train_labels = _load_dataset(args.train)
    test_images, test_labels = _load_dataset(args.test)
    report = evaluate_key_sensitivity(
        train_images,
        train_labels,
        test_images,
        test_labels,
        transform,
        trials=args.trials,
        seed=args.seed,
        k=args.k,
    )
    _emit(report.to_dict(), args.output)
    return 0


def _cmd_watermark(args) -> int:
    tau = watermark_detect(_read_preds_csv(args.preds_a), _read_preds_csv(args.preds_b))
    _emit({"tau": tau}, args.output)
    return 0


def _output_flag(parser) -> None:
    parser.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="imagekey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("keygen", help="generate or derive a secret key file")
    p.add_argument("-o", "--output", required=True, help="key file to write")
    p.add_argument("--seed", default=None, help="derive the key from this seed instead of random bytes")
    p.add_argument("--bytes", type=int, default=32, help="random master length")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encrypt", help="block-scrambling encryption of a PPM/PGM image")
    _add_key_arg(p)
    _add_etc_args(p)
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="invert a block-scrambling encryption")
    _add_key_arg(p)
    _add_etc_args(p)
    p.add_argument(
        "--no-unpack",
        action="store_true",
        help="for grayscale variants, keep the packed single-channel result",
    )
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("transform", help="learnable transform of a PPM/PGM image")
    _add_key_arg(p)
    _add_learnable_args(p)
    p.add_argument("--sidecar", default=None, help="ffx metadata path (default OUTPUT.json)")
    p.add_argument("input")
    p.add_argument("output", help="image path; ffx writes a float .npy instead")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("invert", help="invert a learnable transform")
    _add_key_arg(p)
    _add_learnable_args(p)
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("keyspace", help="key-space size for the color cipher")
    p.add_argument("--x", type=int, required=True, help="image width")
    p.add_argument("--y", type=int, required=True, help="image height")
    p.add_argument("--bx", type=int, default=16)
    p.add_argument("--by", type=int, default=16)
    _output_flag(p)
    p.set_defaults(func=_cmd_keyspace)

    p = sub.add_parser("verify", help="distance/inner-product/order preservation report")
    _add_key_arg(p)
    _add_any_transform_args(p)
    p.add_argument("--dataset", required=True, help="directory with labels.csv")
    _output_flag(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("knn", help="nearest-neighbor predictions, plain vs transformed")
    p.add_argument("--key", default=None, help="key file; omit to classify plain images only")
    _add_any_transform_args(p)
    p.add_argument("--train", required=True, help="training directory with labels.csv")
    p.add_argument("--test", required=True, help="query directory with labels.csv")
    p.add_argument("--k", type=int, default=3)
    _output_flag(p)
    p.set_defaults(func=_cmd_knn)

    p = sub.add_parser("keysense", help="accuracy under correct, wrong, and no key")
    _add_key_arg(p)
    _add_any_transform_args(p)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--trials", type=int, default=100, help="number of random wrong keys")
    p.add_argument("--seed", type=int, default=0, help="seed for the wrong-key draw")
    p.add_argument("--k", type=int, default=3)
    _output_flag(p)
    p.set_defaults(func=_cmd_keysense)

    p = sub.add_parser("watermark", help="agreement fraction of two prediction files")
    p.add_argument("--preds-a", required=True)
    p.add_argument("--preds-b", required=True)
    _output_flag(p)
    p.set_defaults(func=_cmd_watermark)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ImageKeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Secret-key perceptual image transformations for encryption-then-compression
pipelines and privacy-preserving machine learning, with analytic verification
of the properties that keep classifiers working on the transformed data."""

from .errors import (
    DimensionError,
    FormatError,
    ImageKeyError,
    InvalidKeyError,
    NotInvertibleError,
)
from .etc import (
    EtcConfig,
    KeySpaceReport,
    VARIANT_COLOR,
    VARIANT_GRAY_RGB,
    VARIANT_GRAY_YCBCR,
    decrypt,
    encrypt,
    keyspace_color,
)
from .fpe import FpeCipher, fpe_decrypt, fpe_encrypt
from .keystream import SecretKey, load_key, save_key
from .learnable import (
    TransformSpec,
    VARIANT_FFX,
    VARIANT_NEG,
    VARIANT_PIXELWISE,
    VARIANT_SHF,
    block_transform,
    block_transform_invert,
    pixelwise_decrypt,
    pixelwise_encrypt,
)
from .mlprops import (
    PropertyReport,
    apply_transform,
    knn_accuracy,
    knn_classify,
    knn_predict,
    poly_gram,
    poly_kernel,
    rbf_gram,
    rbf_kernel,
    vectorize,
    verify_properties,
    with_key,
    zscore,
)
from .netpbm import read_image, write_image
from .watermark import (
    KeySensitivityReport,
    WatermarkReport,
    evaluate_key_sensitivity,
    evaluate_watermark,
    watermark_detect,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError",
    "EtcConfig",
    "FormatError",
    "FpeCipher",
    "ImageKeyError",
    "InvalidKeyError",
    "KeySensitivityReport",
    "KeySpaceReport",
    "NotInvertibleError",
    "PropertyReport",
    "SecretKey",
    "TransformSpec",
    "VARIANT_COLOR",
    "VARIANT_FFX",
    "VARIANT_GRAY_RGB",
    "VARIANT_GRAY_YCBCR",
    "VARIANT_NEG",
    "VARIANT_PIXELWISE",
    "VARIANT_SHF",
    "WatermarkReport",
    "apply_transform",
    "block_transform",
    "block_transform_invert",
    "decrypt",
    "encrypt",
    "evaluate_key_sensitivity",
    "evaluate_watermark",
    "fpe_decrypt",
    "fpe_encrypt",
    "keyspace_color",
    "knn_accuracy",
    "knn_classify",
    "knn_predict",
    "load_key",
    "pixelwise_decrypt",
    "pixelwise_encrypt",
    "poly_gram",
    "poly_kernel",
    "rbf_gram",
    "rbf_kernel",
    "read_image",
    "save_key",
    "vectorize",
    "verify_properties",
    "watermark_detect",
    "with_key",
    "write_image",
    "zscore",
]

"""Real numbers stored as (sign, log|value|).

Fields may be scalars or equally shaped numpy arrays; all operations
broadcast. Exact zero is ``(+1, -inf)``; a negative zero is normalised to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SignedLog:
    sign: np.ndarray | int
    log_mag: np.ndarray | float

    def __post_init__(self):
        sign = np.asarray(self.sign, dtype=np.int8)
        log_mag = np.asarray(self.log_mag, dtype=float)
        if np.any(np.isposinf(log_mag)) or np.any(np.isnan(log_mag)):
            raise ValueError("log_mag must be finite or -inf")
        if np.any((sign != 1) & (sign != -1)):
            raise ValueError("sign must be +1 or -1")
        sign = np.where(np.isneginf(log_mag), np.int8(1), sign).astype(np.int8)
        if sign.ndim == 0:
            object.__setattr__(self, "sign", int(sign))
            object.__setattr__(self, "log_mag", float(log_mag))
        else:
            object.__setattr__(self, "sign", sign)
            object.__setattr__(self, "log_mag", log_mag)

    @classmethod
    def from_real(cls, value) -> "SignedLog":
        v = np.asarray(value, dtype=float)
        with np.errstate(divide="ignore"):
            log_mag = np.log(np.abs(v))
        return cls(np.where(v < 0, -1, 1), log_mag)

    @classmethod
    def one(cls, shape=()) -> "SignedLog":
        return cls(np.ones(shape, dtype=np.int8), np.zeros(shape))

    def to_real(self):
        """Plain float(s); over/underflows to +-inf or 0 outside double range."""
        with np.errstate(over="ignore"):
            out = np.asarray(self.sign, dtype=float) * np.exp(self.log_mag)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def shape(self) -> tuple:
        return np.shape(self.log_mag)

    def __len__(self) -> int:
        return len(self.log_mag)

    def __getitem__(self, idx) -> "SignedLog":
        return SignedLog(np.asarray(self.sign)[idx], np.asarray(self.log_mag)[idx])

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            return NotImplemented
        sign = np.asarray(self.sign, dtype=np.int8) * np.asarray(other.sign, dtype=np.int8)
        return SignedLog(sign, np.add(self.log_mag, other.log_mag))

    def __pow__(self, k: int) -> "SignedLog":
        if int(k) != k or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k!r}")
        k = int(k)
        if k == 0:
            return SignedLog.one(self.shape)
        sign = np.asarray(self.sign) if k % 2 else np.ones(self.shape, dtype=np.int8)
        return SignedLog(sign, k * np.asarray(self.log_mag))

    def __neg__(self) -> "SignedLog":
        return SignedLog(-np.asarray(self.sign), self.log_mag)

    def is_zero(self):
        return np.isneginf(self.log_mag)

    @staticmethod
    def concat(parts: list["SignedLog"]) -> "SignedLog":
        return SignedLog(
            np.concatenate([np.atleast_1d(p.sign) for p in parts]),
            np.concatenate([np.atleast_1d(p.log_mag) for p in parts]),
        )

    def sorted(self) -> "SignedLog":
        """Ascending in real-value order."""
        sign = np.atleast_1d(self.sign)
        lm = np.atleast_1d(self.log_mag)
        order = np.lexsort((sign * lm, sign))
        return SignedLog(sign[order], lm[order])

//! 32-byte digests, identifier newtypes and the LEB128 helpers shared by
//! every canonical encoding in the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

pub fn sha256_concat(parts: &[&[u8]]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().into()
}

/// Appends `n` as unsigned LEB128.
pub fn write_leb(out: &mut Vec<u8>, mut n: u64) {
    loop {
        let byte = (n & 0x7f) as u8;
        n >>= 7;
        if n == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("unexpected end of input at byte {0}")]
    Eof(usize),
    #[error("LEB128 value overflows u64 at byte {0}")]
    Overflow(usize),
    #[error("unknown tag 0x{tag:02x} at byte {pos}")]
    BadTag { tag: u8, pos: usize },
    #[error("invalid utf-8 string at byte {0}")]
    Utf8(usize),
    #[error("trailing bytes after position {0}")]
    Trailing(usize),
    #[error("invalid hex: {0}")]
    Hex(String),
    #[error("{0}")]
    Invalid(String),
}

/// Cursor over a canonical byte string.
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn byte(&mut self) -> Result<u8, DecodeError> {
        let b = *self.buf.get(self.pos).ok_or(DecodeError::Eof(self.pos))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn bytes(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() - self.pos < n {
            return Err(DecodeError::Eof(self.buf.len()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn array32(&mut self) -> Result<[u8; 32], DecodeError> {
        let mut a = [0u8; 32];
        a.copy_from_slice(self.bytes(32)?);
        Ok(a)
    }

    pub fn leb(&mut self) -> Result<u64, DecodeError> {
        let start = self.pos;
        let mut n: u64 = 0;
        let mut shift = 0u32;
        loop {
            let b = self.byte()?;
            if shift >= 64 || (shift == 63 && (b & 0x7f) > 1) {
                return Err(DecodeError::Overflow(start));
            }
            n |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                return Ok(n);
            }
            shift += 7;
        }
    }

    pub fn leb_u32(&mut self) -> Result<u32, DecodeError> {
        let p = self.pos;
        u32::try_from(self.leb()?).map_err(|_| DecodeError::Overflow(p))
    }

    /// Length-prefixed byte string.
    pub fn blob(&mut self) -> Result<&'a [u8], DecodeError> {
        let n = self.leb()? as usize;
        self.bytes(n)
    }

    pub fn string(&mut self) -> Result<String, DecodeError> {
        let p = self.pos;
        let b = self.blob()?;
        String::from_utf8(b.to_vec()).map_err(|_| DecodeError::Utf8(p))
    }

    pub fn finish(&self) -> Result<(), DecodeError> {
        if self.pos != self.buf.len() {
            return Err(DecodeError::Trailing(self.pos));
        }
        Ok(())
    }
}

pub fn write_blob(out: &mut Vec<u8>, b: &[u8]) {
    write_leb(out, b.len() as u64);
    out.extend_from_slice(b);
}

macro_rules! hash_newtype {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub struct $name(pub [u8; 32]);

        impl $name {
            pub const ZERO: $name = $name([0u8; 32]);

            pub fn as_bytes(&self) -> &[u8; 32] {
                &self.0
            }

            pub fn to_hex(&self) -> String {
                hex::encode(self.0)
            }

            pub fn from_hex(s: &str) -> Result<Self, DecodeError> {
                let v = hex::decode(s).map_err(|e| DecodeError::Hex(e.to_string()))?;
                let a: [u8; 32] = v
                    .try_into()
                    .map_err(|_| DecodeError::Hex(format!("expected 32 bytes in {s:?}")))?;
                Ok($name(a))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.to_hex())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({}..)", stringify!($name), &self.to_hex()[..12])
            }
        }

        impl FromStr for $name {
            type Err = DecodeError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::from_hex(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_hex())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                Self::from_hex(&s).map_err(serde::de::Error::custom)
            }
        }
    };
}

hash_newtype!(
    /// Identifier of a defined object (hash of its normal form).
    ObjId
);
hash_newtype!(
    /// Identifier of a proposition.
    PropId
);
hash_newtype!(TheoryId);
hash_newtype!(DocId);
hash_newtype!(TxId);
hash_newtype!(BlockHash);
hash_newtype!(AssetId);
hash_newtype!(
    /// Untyped digest, used where the kind of id is carried alongside.
    Hash32
);

macro_rules! into_hash32 {
    ($($t:ident),*) => {$(
        impl From<$t> for Hash32 {
            fn from(v: $t) -> Hash32 {
                Hash32(v.0)
            }
        }
    )*};
}
into_hash32!(ObjId, PropId, TheoryId, DocId, TxId, BlockHash, AssetId);

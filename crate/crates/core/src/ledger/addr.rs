use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hash::{sha256, sha256_concat, DecodeError, DocId, ObjId, PropId, TheoryId};

use super::keys::PubKey;

pub const PROP_ADDR: u8 = 0x30;
pub const KEY_ADDR: u8 = 0x31;

/// Kind byte followed by 20 hash bytes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Addr(pub [u8; 21]);

impl Addr {
    fn tagged(tag: u8, digest: &[u8; 32]) -> Addr {
        let mut a = [0u8; 21];
        a[0] = tag;
        a[1..].copy_from_slice(&digest[..20]);
        Addr(a)
    }

    pub fn pay_to_key(pk: &PubKey) -> Addr {
        Addr::tagged(KEY_ADDR, &sha256(&pk.0))
    }

    fn derived(th: &TheoryId, item: &[u8; 32]) -> Addr {
        Addr::tagged(PROP_ADDR, &sha256_concat(&[th.as_bytes(), item]))
    }

    pub fn prop(th: &TheoryId, p: &PropId) -> Addr {
        Addr::derived(th, p.as_bytes())
    }

    pub fn obj(th: &TheoryId, o: &ObjId) -> Addr {
        Addr::derived(th, o.as_bytes())
    }

    /// Where a theory's publication asset lives.
    pub fn theory(th: &TheoryId) -> Addr {
        Addr::derived(th, th.as_bytes())
    }

    pub fn doc(th: &TheoryId, d: &DocId) -> Addr {
        Addr::derived(th, d.as_bytes())
    }

    pub fn kind(&self) -> u8 {
        self.0[0]
    }

    pub fn is_key(&self) -> bool {
        self.0[0] == KEY_ADDR
    }

    pub fn is_prop(&self) -> bool {
        self.0[0] == PROP_ADDR
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Addr, DecodeError> {
        let mut out = [0u8; 21];
        hex::decode_to_slice(s, &mut out).map_err(|e| DecodeError::Hex(e.to_string()))?;
        if out[0] != PROP_ADDR && out[0] != KEY_ADDR {
            return Err(DecodeError::Invalid("address kind".into()));
        }
        Ok(Addr(out))
    }
}

impl fmt::Display for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Addr({})", &self.to_hex()[..12])
    }
}

impl Serialize for Addr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Addr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Addr::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

use std::fmt;

use ed25519_dalek::{Signer, SigningKey, Verifier, VerifyingKey};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hash::{sha256_concat, DecodeError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PubKey(pub [u8; 32]);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sig(pub [u8; 64]);

impl Sig {
    pub const ZERO: Sig = Sig([0; 64]);
}

macro_rules! hex_bytes {
    ($name:ident, $n:expr) => {
        impl $name {
            pub fn to_hex(&self) -> String {
                hex::encode(self.0)
            }

            pub fn from_hex(s: &str) -> Result<Self, DecodeError> {
                let mut out = [0u8; $n];
                hex::decode_to_slice(s, &mut out).map_err(|e| DecodeError::Hex(e.to_string()))?;
                Ok($name(out))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.to_hex())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), &self.to_hex()[..16])
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
                $name::from_hex(&s).map_err(serde::de::Error::custom)
            }
        }
    };
}

hex_bytes!(PubKey, 32);
hex_bytes!(Sig, 64);

/// An Ed25519 key pair. Test keys are derived from a small integer seed.
#[derive(Clone)]
pub struct Keypair {
    sk: SigningKey,
}

impl Keypair {
    pub fn from_secret(secret: [u8; 32]) -> Keypair {
        Keypair { sk: SigningKey::from_bytes(&secret) }
    }

    /// secret = SHA-256("formalchain-test-key" || seed as 8 little-endian bytes)
    pub fn from_seed(seed: u64) -> Keypair {
        Keypair::from_secret(sha256_concat(&[b"formalchain-test-key", &seed.to_le_bytes()]))
    }

    pub fn secret(&self) -> [u8; 32] {
        self.sk.to_bytes()
    }

    pub fn public(&self) -> PubKey {
        PubKey(self.sk.verifying_key().to_bytes())
    }

    pub fn sign(&self, msg: &[u8]) -> Sig {
        Sig(self.sk.sign(msg).to_bytes())
    }
}

impl fmt::Debug for Keypair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Keypair({:?})", self.public())
    }
}

pub fn verify(pk: &PubKey, msg: &[u8], sig: &Sig) -> bool {
    let Ok(vk) = VerifyingKey::from_bytes(&pk.0) else { return false };
    let sig = ed25519_dalek::Signature::from_bytes(&sig.0);
    vk.verify(msg, &sig).is_ok()
}

use serde::{Deserialize, Serialize};

use crate::hash::{write_leb, AssetId, DecodeError, DocId, Hash32, Reader, TheoryId};

use super::addr::Addr;

/// Atomic units per bar.
pub const BAR: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Currency { amount: u64 },
    Bounty { amount: u64 },
    OwnsProp { holder: Addr },
    OwnsNegProp { holder: Addr },
    OwnsObj { holder: Addr },
    Marker { commitment: Hash32 },
    TheoryPub { theory: TheoryId },
    DocPub { doc: DocId },
}

impl Payload {
    pub fn tag(&self) -> u8 {
        match self {
            Payload::Currency { .. } => 0x40,
            Payload::Bounty { .. } => 0x41,
            Payload::OwnsProp { .. } => 0x42,
            Payload::OwnsNegProp { .. } => 0x43,
            Payload::OwnsObj { .. } => 0x44,
            Payload::Marker { .. } => 0x45,
            Payload::TheoryPub { .. } => 0x46,
            Payload::DocPub { .. } => 0x47,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Payload::Currency { .. } => "currency",
            Payload::Bounty { .. } => "bounty",
            Payload::OwnsProp { .. } => "owns_prop",
            Payload::OwnsNegProp { .. } => "owns_neg_prop",
            Payload::OwnsObj { .. } => "owns_obj",
            Payload::Marker { .. } => "marker",
            Payload::TheoryPub { .. } => "theory_pub",
            Payload::DocPub { .. } => "doc_pub",
        }
    }

    /// Currency and bounty amounts; everything else carries no value.
    pub fn value(&self) -> u64 {
        match self {
            Payload::Currency { amount } | Payload::Bounty { amount } => *amount,
            _ => 0,
        }
    }

    pub fn holder(&self) -> Option<&Addr> {
        match self {
            Payload::OwnsProp { holder } | Payload::OwnsNegProp { holder } | Payload::OwnsObj { holder } => {
                Some(holder)
            }
            _ => None,
        }
    }

    pub fn commitment(&self) -> Option<Hash32> {
        match self {
            Payload::Marker { commitment } => Some(*commitment),
            _ => None,
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(self.tag());
        match self {
            Payload::Currency { amount } | Payload::Bounty { amount } => write_leb(out, *amount),
            Payload::OwnsProp { holder } | Payload::OwnsNegProp { holder } | Payload::OwnsObj { holder } => {
                out.extend_from_slice(&holder.0)
            }
            Payload::Marker { commitment } => out.extend_from_slice(commitment.as_bytes()),
            Payload::TheoryPub { theory } => out.extend_from_slice(theory.as_bytes()),
            Payload::DocPub { doc } => out.extend_from_slice(doc.as_bytes()),
        }
    }

    pub fn decode(r: &mut Reader<'_>) -> Result<Payload, DecodeError> {
        let pos = r.pos();
        Ok(match r.byte()? {
            0x40 => Payload::Currency { amount: r.leb()? },
            0x41 => Payload::Bounty { amount: r.leb()? },
            0x42 => Payload::OwnsProp { holder: read_addr(r)? },
            0x43 => Payload::OwnsNegProp { holder: read_addr(r)? },
            0x44 => Payload::OwnsObj { holder: read_addr(r)? },
            0x45 => Payload::Marker { commitment: Hash32(r.array32()?) },
            0x46 => Payload::TheoryPub { theory: TheoryId(r.array32()?) },
            0x47 => Payload::DocPub { doc: DocId(r.array32()?) },
            tag => return Err(DecodeError::BadTag { tag, pos }),
        })
    }
}

pub fn read_addr(r: &mut Reader<'_>) -> Result<Addr, DecodeError> {
    let b = r.bytes(21)?;
    let mut a = [0u8; 21];
    a.copy_from_slice(b);
    Addr::from_hex(&hex::encode(a))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Output {
    pub addr: Addr,
    pub payload: Payload,
}

impl Output {
    pub fn new(addr: Addr, payload: Payload) -> Output {
        Output { addr, payload }
    }
}

/// A live ledger entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asset {
    pub id: AssetId,
    pub addr: Addr,
    pub payload: Payload,
    pub born: u64,
}

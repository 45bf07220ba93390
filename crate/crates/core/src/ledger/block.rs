use serde::{Deserialize, Serialize};

use crate::hash::{sha256, sha256_concat, write_leb, BlockHash, DecodeError, Hash32, Reader};

use super::keys::{verify, Keypair, PubKey, Sig};
use super::tx::Tx;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub parent: BlockHash,
    pub height: u64,
    pub timestamp: u64,
    pub producer: PubKey,
    pub body_hash: Hash32,
    pub sig: Sig,
}

impl Header {
    fn encode_with(&self, out: &mut Vec<u8>, sig: bool) {
        out.extend_from_slice(self.parent.as_bytes());
        write_leb(out, self.height);
        write_leb(out, self.timestamp);
        out.extend_from_slice(&self.producer.0);
        out.extend_from_slice(self.body_hash.as_bytes());
        if sig {
            out.extend_from_slice(&self.sig.0);
        }
    }

    pub fn unsigned_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_with(&mut out, false);
        out
    }

    pub fn signing_digest(&self) -> [u8; 32] {
        sha256(&self.unsigned_bytes())
    }

    pub fn hash(&self) -> BlockHash {
        let mut out = Vec::new();
        self.encode_with(&mut out, true);
        BlockHash(sha256(&out))
    }

    pub fn sign(&mut self, key: &Keypair) {
        self.sig = key.sign(&self.signing_digest());
    }

    pub fn sig_ok(&self) -> bool {
        verify(&self.producer, &self.signing_digest(), &self.sig)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub header: Header,
    pub txs: Vec<Tx>,
}

/// Binary Merkle root over full transaction hashes; an odd node is paired
/// with itself. The empty body hashes to zero.
pub fn merkle_root(txs: &[Tx]) -> Hash32 {
    let mut level: Vec<[u8; 32]> = txs.iter().map(Tx::full_hash).collect();
    if level.is_empty() {
        return Hash32::ZERO;
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|c| sha256_concat(&[&c[0], c.get(1).unwrap_or(&c[0])]))
            .collect();
    }
    Hash32(level[0])
}

impl Block {
    pub fn hash(&self) -> BlockHash {
        self.header.hash()
    }

    pub fn height(&self) -> u64 {
        self.header.height
    }

    pub fn parent(&self) -> BlockHash {
        self.header.parent
    }

    /// Assembles and signs a block.
    pub fn assemble(parent: BlockHash, height: u64, timestamp: u64, key: &Keypair, txs: Vec<Tx>) -> Block {
        let mut header = Header {
            parent,
            height,
            timestamp,
            producer: key.public(),
            body_hash: merkle_root(&txs),
            sig: Sig::ZERO,
        };
        header.sign(key);
        Block { header, txs }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.header.encode_with(&mut out, true);
        write_leb(&mut out, self.txs.len() as u64);
        for tx in &self.txs {
            let b = tx.to_bytes();
            write_leb(&mut out, b.len() as u64);
            out.extend_from_slice(&b);
        }
        out
    }

    pub fn decode(r: &mut Reader<'_>) -> Result<Block, DecodeError> {
        let parent = BlockHash(r.array32()?);
        let height = r.leb()?;
        let timestamp = r.leb()?;
        let producer = PubKey(r.array32()?);
        let body_hash = Hash32(r.array32()?);
        let mut sig = [0u8; 64];
        sig.copy_from_slice(r.bytes(64)?);
        let header = Header { parent, height, timestamp, producer, body_hash, sig: Sig(sig) };
        let n = r.leb()?;
        let mut txs = Vec::new();
        for _ in 0..n {
            let len = r.leb()? as usize;
            txs.push(Tx::from_bytes(r.bytes(len)?)?);
        }
        Ok(Block { header, txs })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Block, DecodeError> {
        let mut r = Reader::new(bytes);
        let b = Block::decode(&mut r)?;
        r.finish()?;
        Ok(b)
    }
}

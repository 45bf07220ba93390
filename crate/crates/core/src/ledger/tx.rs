use serde::{Deserialize, Serialize};

use crate::docform::{Document, TheorySpec};
use crate::hash::{sha256, sha256_concat, write_leb, AssetId, DecodeError, Reader, TxId};

use super::asset::{read_addr, Output, Payload};
use super::keys::{Keypair, PubKey, Sig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub asset: AssetId,
    pub pubkey: PubKey,
    pub sig: Sig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Attachment {
    Theory(TheorySpec),
    Doc(Document),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tx {
    /// Set (to the block height) only on the block's subsidy transaction.
    pub coinbase: Option<u64>,
    pub inputs: Vec<Input>,
    pub outputs: Vec<Output>,
    pub attachment: Option<Attachment>,
}

const TX_TAG: u8 = 0x50;

impl Tx {
    pub fn new(inputs: Vec<(AssetId, PubKey)>, outputs: Vec<Output>, attachment: Option<Attachment>) -> Tx {
        Tx {
            coinbase: None,
            inputs: inputs.into_iter().map(|(asset, pubkey)| Input { asset, pubkey, sig: Sig::ZERO }).collect(),
            outputs,
            attachment,
        }
    }

    fn encode_with(&self, out: &mut Vec<u8>, sigs: bool) {
        out.push(TX_TAG);
        match self.coinbase {
            None => out.push(0),
            Some(h) => {
                out.push(1);
                write_leb(out, h);
            }
        }
        write_leb(out, self.inputs.len() as u64);
        for i in &self.inputs {
            out.extend_from_slice(i.asset.as_bytes());
            out.extend_from_slice(&i.pubkey.0);
            if sigs {
                out.extend_from_slice(&i.sig.0);
            }
        }
        write_leb(out, self.outputs.len() as u64);
        for o in &self.outputs {
            out.extend_from_slice(&o.addr.0);
            o.payload.encode(out);
        }
        match &self.attachment {
            None => out.push(0),
            Some(Attachment::Theory(t)) => {
                out.push(1);
                t.encode(out);
            }
            Some(Attachment::Doc(d)) => {
                out.push(2);
                d.encode(out);
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_with(&mut out, true);
        out
    }

    pub fn unsigned_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_with(&mut out, false);
        out
    }

    /// Hash of the serialization without signatures; this is what inputs sign.
    pub fn txid(&self) -> TxId {
        TxId(sha256(&self.unsigned_bytes()))
    }

    /// Hash of the full serialization, signatures included.
    pub fn full_hash(&self) -> [u8; 32] {
        sha256(&self.to_bytes())
    }

    pub fn output_id(&self, index: usize) -> AssetId {
        let mut idx = Vec::new();
        write_leb(&mut idx, index as u64);
        AssetId(sha256_concat(&[self.txid().as_bytes(), &idx]))
    }

    /// Signs every input whose pubkey belongs to one of `keys`.
    pub fn sign(&mut self, keys: &[&Keypair]) {
        let msg = self.txid();
        for input in &mut self.inputs {
            if let Some(k) = keys.iter().find(|k| k.public() == input.pubkey) {
                input.sig = k.sign(msg.as_bytes());
            }
        }
    }

    pub fn decode(r: &mut Reader<'_>) -> Result<Tx, DecodeError> {
        let pos = r.pos();
        let tag = r.byte()?;
        if tag != TX_TAG {
            return Err(DecodeError::BadTag { tag, pos });
        }
        let pos = r.pos();
        let coinbase = match r.byte()? {
            0 => None,
            1 => Some(r.leb()?),
            tag => return Err(DecodeError::BadTag { tag, pos }),
        };
        let n = r.leb()?;
        let mut inputs = Vec::new();
        for _ in 0..n {
            let asset = AssetId(r.array32()?);
            let pubkey = PubKey(r.array32()?);
            let mut sig = [0u8; 64];
            sig.copy_from_slice(r.bytes(64)?);
            inputs.push(Input { asset, pubkey, sig: Sig(sig) });
        }
        let n = r.leb()?;
        let mut outputs = Vec::new();
        for _ in 0..n {
            let addr = read_addr(r)?;
            outputs.push(Output { addr, payload: Payload::decode(r)? });
        }
        let pos = r.pos();
        let attachment = match r.byte()? {
            0 => None,
            1 => Some(Attachment::Theory(TheorySpec::decode(r)?)),
            2 => Some(Attachment::Doc(Document::decode(r)?)),
            tag => return Err(DecodeError::BadTag { tag, pos }),
        };
        Ok(Tx { coinbase, inputs, outputs, attachment })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Tx, DecodeError> {
        let mut r = Reader::new(bytes);
        let tx = Tx::decode(&mut r)?;
        r.finish()?;
        Ok(tx)
    }

    pub fn from_hex(s: &str) -> Result<Tx, DecodeError> {
        let bytes = hex::decode(s.trim()).map_err(|e| DecodeError::Hex(e.to_string()))?;
        Tx::from_bytes(&bytes)
    }
}

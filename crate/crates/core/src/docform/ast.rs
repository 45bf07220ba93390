use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hash::{sha256, write_blob, write_leb, DecodeError, DocId, ObjId, PropId, Reader, TheoryId};
use crate::kernel::{
    decode_proof, decode_term, decode_ty, encode_proof, encode_term, encode_ty, theory_id,
    theory_signature, KernelError, Proof, Signature, Term, Ty,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimDecl {
    pub name: String,
    pub ty: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomDecl {
    pub name: String,
    pub stmt: Term,
}

/// A theory: base types, typed primitives and axioms. Names are hints and do
/// not contribute to the identifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub name: String,
    pub base_count: u32,
    pub prims: Vec<PrimDecl>,
    pub axioms: Vec<AxiomDecl>,
}

impl TheorySpec {
    fn parts(&self) -> (Vec<Ty>, Vec<Term>) {
        (
            self.prims.iter().map(|p| p.ty.clone()).collect(),
            self.axioms.iter().map(|a| a.stmt.clone()).collect(),
        )
    }

    pub fn id(&self) -> Result<TheoryId, KernelError> {
        let (prims, axioms) = self.parts();
        theory_id(self.base_count, &prims, &axioms)
    }

    pub fn signature(&self) -> Result<Signature, KernelError> {
        let (prims, axioms) = self.parts();
        theory_signature(self.base_count, &prims, &axioms)
    }

    pub fn prim_index(&self, name: &str) -> Option<u32> {
        self.prims.iter().position(|p| p.name == name).map(|i| i as u32)
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(0x27);
        write_blob(out, self.name.as_bytes());
        write_leb(out, u64::from(self.base_count));
        write_leb(out, self.prims.len() as u64);
        for p in &self.prims {
            write_blob(out, p.name.as_bytes());
            encode_ty(out, &p.ty);
        }
        write_leb(out, self.axioms.len() as u64);
        for a in &self.axioms {
            write_blob(out, a.name.as_bytes());
            encode_term(out, &a.stmt);
        }
    }

    pub fn decode(r: &mut Reader<'_>) -> Result<TheorySpec, DecodeError> {
        let pos = r.pos();
        let tag = r.byte()?;
        if tag != 0x27 {
            return Err(DecodeError::BadTag { tag, pos });
        }
        let name = r.string()?;
        let base_count = r.leb_u32()?;
        let n = r.leb()?;
        let mut prims = Vec::new();
        for _ in 0..n {
            let name = r.string()?;
            prims.push(PrimDecl { name, ty: decode_ty(r)? });
        }
        let n = r.leb()?;
        let mut axioms = Vec::new();
        for _ in 0..n {
            let name = r.string()?;
            axioms.push(AxiomDecl { name, stmt: decode_term(r)? });
        }
        Ok(TheorySpec { name, base_count, prims, axioms })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamTarget {
    Obj { id: ObjId, ty: Ty },
    Prop { id: PropId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Item {
    Param { name: String, target: ParamTarget },
    Def { name: String, ty: Ty, body: Term },
    Thm { name: String, stmt: Term, proof: Proof },
    Conj { name: String, stmt: Term, tag: String },
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Param { name, .. }
            | Item::Def { name, .. }
            | Item::Thm { name, .. }
            | Item::Conj { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Item::Param { .. } => "param",
            Item::Def { .. } => "def",
            Item::Thm { .. } => "thm",
            Item::Conj { .. } => "conj",
        }
    }
}

pub const DEFAULT_TAG: &str = "Other";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub theory: TheoryId,
    pub items: Vec<Item>,
}

impl Document {
    pub fn encode(&self, out: &mut Vec<u8>) {
        out.push(0x21);
        out.extend_from_slice(self.theory.as_bytes());
        write_leb(out, self.items.len() as u64);
        for item in &self.items {
            match item {
                Item::Param { name, target: ParamTarget::Obj { id, ty } } => {
                    out.push(0x22);
                    write_blob(out, name.as_bytes());
                    out.extend_from_slice(id.as_bytes());
                    encode_ty(out, ty);
                }
                Item::Param { name, target: ParamTarget::Prop { id } } => {
                    out.push(0x23);
                    write_blob(out, name.as_bytes());
                    out.extend_from_slice(id.as_bytes());
                }
                Item::Def { name, ty, body } => {
                    out.push(0x24);
                    write_blob(out, name.as_bytes());
                    encode_ty(out, ty);
                    encode_term(out, body);
                }
                Item::Thm { name, stmt, proof } => {
                    out.push(0x25);
                    write_blob(out, name.as_bytes());
                    encode_term(out, stmt);
                    encode_proof(out, proof);
                }
                Item::Conj { name, stmt, tag } => {
                    out.push(0x26);
                    write_blob(out, name.as_bytes());
                    encode_term(out, stmt);
                    write_blob(out, tag.as_bytes());
                }
            }
        }
    }

    pub fn decode(r: &mut Reader<'_>) -> Result<Document, DecodeError> {
        let pos = r.pos();
        let tag = r.byte()?;
        if tag != 0x21 {
            return Err(DecodeError::BadTag { tag, pos });
        }
        let theory = TheoryId(r.array32()?);
        let n = r.leb()?;
        let mut items = Vec::new();
        for _ in 0..n {
            let pos = r.pos();
            let item = match r.byte()? {
                0x22 => {
                    let name = r.string()?;
                    let id = ObjId(r.array32()?);
                    Item::Param { name, target: ParamTarget::Obj { id, ty: decode_ty(r)? } }
                }
                0x23 => {
                    let name = r.string()?;
                    Item::Param { name, target: ParamTarget::Prop { id: PropId(r.array32()?) } }
                }
                0x24 => {
                    let name = r.string()?;
                    let ty = decode_ty(r)?;
                    Item::Def { name, ty, body: decode_term(r)? }
                }
                0x25 => {
                    let name = r.string()?;
                    let stmt = decode_term(r)?;
                    Item::Thm { name, stmt, proof: decode_proof(r)? }
                }
                0x26 => {
                    let name = r.string()?;
                    let stmt = decode_term(r)?;
                    Item::Conj { name, stmt, tag: r.string()? }
                }
                tag => return Err(DecodeError::BadTag { tag, pos }),
            };
            items.push(item);
        }
        Ok(Document { theory, items })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode(&mut out);
        out
    }

    pub fn id(&self) -> DocId {
        DocId(sha256(&self.to_bytes()))
    }
}

/// Theories known by name, used to resolve primitive and axiom names when
/// parsing or printing documents.
#[derive(Clone, Debug, Default)]
pub struct Library {
    theories: BTreeMap<TheoryId, TheorySpec>,
}

impl Library {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, spec: TheorySpec) -> Result<TheoryId, KernelError> {
        let id = spec.id()?;
        self.theories.insert(id, spec);
        Ok(id)
    }

    pub fn get(&self, id: &TheoryId) -> Option<&TheorySpec> {
        self.theories.get(id)
    }

    /// Looks a theory up by hex id or by its name hint.
    pub fn lookup(&self, key: &str) -> Option<(TheoryId, &TheorySpec)> {
        if let Ok(id) = TheoryId::from_hex(key) {
            return self.theories.get(&id).map(|s| (id, s));
        }
        self.theories.iter().find(|(_, s)| s.name == key).map(|(id, s)| (*id, s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TheoryId, &TheorySpec)> {
        self.theories.iter()
    }
}

//! Canonical byte encoding of types, terms and proofs, and the content
//! identifiers derived from it.
//!
//! Naturals are unsigned LEB128. Types: `0x00` prop, `0x01 i` base, `0x02 a b`
//! arrow. Terms: `0x10 i` var, `0x11 i` prim, `0x12 id[32]` ref, `0x13 f a`
//! application, `0x14 ty body` lambda, `0x15 a b` implication, `0x16 ty body`
//! universal. Theories: `0x20`, base count, prim count + types, axiom count +
//! normalized axioms. Proof nodes use `0x17..=0x1d`.

use crate::hash::{sha256, write_leb, DecodeError, ObjId, PropId, Reader, TheoryId};

use super::check::{beta_eta, check_ty, prop_check, typecheck};
use super::syntax::{Proof, Signature, Term, Ty};
use super::KernelError;

pub fn encode_ty(out: &mut Vec<u8>, ty: &Ty) {
    match ty {
        Ty::Prop => out.push(0x00),
        Ty::Base(i) => {
            out.push(0x01);
            write_leb(out, u64::from(*i));
        }
        Ty::Func(a, b) => {
            out.push(0x02);
            encode_ty(out, a);
            encode_ty(out, b);
        }
    }
}

pub fn encode_term(out: &mut Vec<u8>, t: &Term) {
    match t {
        Term::Db(i) => {
            out.push(0x10);
            write_leb(out, u64::from(*i));
        }
        Term::Prim(i) => {
            out.push(0x11);
            write_leb(out, u64::from(*i));
        }
        Term::Ref(id) => {
            out.push(0x12);
            out.extend_from_slice(id.as_bytes());
        }
        Term::Ap(f, a) => {
            out.push(0x13);
            encode_term(out, f);
            encode_term(out, a);
        }
        Term::La(ty, b) => {
            out.push(0x14);
            encode_ty(out, ty);
            encode_term(out, b);
        }
        Term::Imp(a, b) => {
            out.push(0x15);
            encode_term(out, a);
            encode_term(out, b);
        }
        Term::All(ty, b) => {
            out.push(0x16);
            encode_ty(out, ty);
            encode_term(out, b);
        }
    }
}

pub fn encode_proof(out: &mut Vec<u8>, p: &Proof) {
    match p {
        Proof::Hyp(i) => {
            out.push(0x17);
            write_leb(out, u64::from(*i));
        }
        Proof::Known(id) => {
            out.push(0x18);
            out.extend_from_slice(id.as_bytes());
        }
        Proof::PrAp(p, q) => {
            out.push(0x19);
            encode_proof(out, p);
            encode_proof(out, q);
        }
        Proof::TmAp(p, t) => {
            out.push(0x1a);
            encode_proof(out, p);
            encode_term(out, t);
        }
        Proof::PrLa(t, p) => {
            out.push(0x1b);
            encode_term(out, t);
            encode_proof(out, p);
        }
        Proof::TmLa(ty, p) => {
            out.push(0x1c);
            encode_ty(out, ty);
            encode_proof(out, p);
        }
        Proof::Ext(a, b) => {
            out.push(0x1d);
            encode_ty(out, a);
            encode_ty(out, b);
        }
    }
}

pub fn decode_ty(r: &mut Reader<'_>) -> Result<Ty, DecodeError> {
    let pos = r.pos();
    Ok(match r.byte()? {
        0x00 => Ty::Prop,
        0x01 => Ty::Base(r.leb_u32()?),
        0x02 => {
            let a = decode_ty(r)?;
            Ty::func(a, decode_ty(r)?)
        }
        tag => return Err(DecodeError::BadTag { tag, pos }),
    })
}

pub fn decode_term(r: &mut Reader<'_>) -> Result<Term, DecodeError> {
    let pos = r.pos();
    Ok(match r.byte()? {
        0x10 => Term::Db(r.leb_u32()?),
        0x11 => Term::Prim(r.leb_u32()?),
        0x12 => Term::Ref(ObjId(r.array32()?)),
        0x13 => {
            let f = decode_term(r)?;
            Term::ap(f, decode_term(r)?)
        }
        0x14 => {
            let ty = decode_ty(r)?;
            Term::la(ty, decode_term(r)?)
        }
        0x15 => {
            let a = decode_term(r)?;
            Term::imp(a, decode_term(r)?)
        }
        0x16 => {
            let ty = decode_ty(r)?;
            Term::all(ty, decode_term(r)?)
        }
        tag => return Err(DecodeError::BadTag { tag, pos }),
    })
}

pub fn decode_proof(r: &mut Reader<'_>) -> Result<Proof, DecodeError> {
    let pos = r.pos();
    Ok(match r.byte()? {
        0x17 => Proof::Hyp(r.leb_u32()?),
        0x18 => Proof::Known(PropId(r.array32()?)),
        0x19 => {
            let p = decode_proof(r)?;
            Proof::pr_ap(p, decode_proof(r)?)
        }
        0x1a => {
            let p = decode_proof(r)?;
            Proof::tm_ap(p, decode_term(r)?)
        }
        0x1b => {
            let t = decode_term(r)?;
            Proof::pr_la(t, decode_proof(r)?)
        }
        0x1c => {
            let ty = decode_ty(r)?;
            Proof::tm_la(ty, decode_proof(r)?)
        }
        0x1d => {
            let a = decode_ty(r)?;
            Proof::Ext(a, decode_ty(r)?)
        }
        tag => return Err(DecodeError::BadTag { tag, pos }),
    })
}

pub fn term_bytes(t: &Term) -> Vec<u8> {
    let mut out = Vec::new();
    encode_term(&mut out, t);
    out
}

/// Hash of the normal form, with no closedness or typing check.
pub(crate) fn raw_term_hash(t: &Term) -> [u8; 32] {
    sha256(&term_bytes(&beta_eta(t)))
}

fn closed_and_typed(sig: &Signature, t: &Term) -> Result<Ty, KernelError> {
    if !t.is_closed() {
        return Err(KernelError::NotClosed);
    }
    typecheck(sig, &[], t).map_err(|e| KernelError::IllTyped(Box::new(e)))
}

/// Object identifier: SHA-256 of the canonical bytes of the beta-eta normal
/// form (definitions not unfolded).
pub fn term_id(sig: &Signature, t: &Term) -> Result<ObjId, KernelError> {
    closed_and_typed(sig, t)?;
    Ok(ObjId(raw_term_hash(t)))
}

pub fn prop_id(sig: &Signature, t: &Term) -> Result<PropId, KernelError> {
    if !t.is_closed() {
        return Err(KernelError::NotClosed);
    }
    prop_check(sig, t).map_err(|e| KernelError::IllTyped(Box::new(e)))?;
    Ok(PropId(raw_term_hash(t)))
}

/// Canonical bytes of a theory specification. Axioms are normalized.
pub fn theory_bytes(base_count: u32, prims: &[Ty], axioms: &[Term]) -> Vec<u8> {
    let mut out = vec![0x20];
    write_leb(&mut out, u64::from(base_count));
    write_leb(&mut out, prims.len() as u64);
    for p in prims {
        encode_ty(&mut out, p);
    }
    write_leb(&mut out, axioms.len() as u64);
    for a in axioms {
        encode_term(&mut out, &beta_eta(a));
    }
    out
}

/// Checks the theory's axioms and returns its identifier.
pub fn theory_id(base_count: u32, prims: &[Ty], axioms: &[Term]) -> Result<TheoryId, KernelError> {
    let sig = Signature { base_count, prims: prims.to_vec(), ..Default::default() };
    for a in axioms {
        prop_id(&sig, a)?;
    }
    Ok(TheoryId(sha256(&theory_bytes(base_count, prims, axioms))))
}

/// The signature a freshly published theory starts from.
pub fn theory_signature(
    base_count: u32,
    prims: &[Ty],
    axioms: &[Term],
) -> Result<Signature, KernelError> {
    let mut sig = Signature { base_count, prims: prims.to_vec(), ..Default::default() };
    for p in prims {
        check_ty(&sig, p)?;
    }
    for a in axioms {
        let id = prop_id(&sig, a)?;
        sig.axioms.insert(id, beta_eta(a));
    }
    Ok(sig)
}

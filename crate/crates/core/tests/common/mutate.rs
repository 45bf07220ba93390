//! Single-node mutations of theorem statements and proofs.

use formalchain::hash::{ObjId, PropId};
use formalchain::kernel::{Proof, Signature, Term, Ty};
use formalchain::docform::{Document, Item};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Pool {
    pub props: Vec<PropId>,
    pub objs: Vec<ObjId>,
    pub prims: u32,
    pub bases: u32,
}

impl Pool {
    pub fn new(sig: &Signature) -> Pool {
        Pool {
            props: sig.axioms.keys().chain(sig.thms.keys()).copied().collect(),
            objs: sig.defs.keys().copied().collect(),
            prims: sig.prims.len() as u32,
            bases: sig.base_count,
        }
    }
}

fn other_ty(rng: &mut ChaCha8Rng, pool: &Pool, ty: &Ty) -> Ty {
    let choices = [
        Ty::Prop,
        Ty::Base(rng.gen_range(0..pool.bases.max(1))),
        Ty::func(Ty::Base(0), Ty::Prop),
        Ty::func(ty.clone(), ty.clone()),
    ];
    loop {
        let c = choices.choose(rng).unwrap().clone();
        if &c != ty {
            return c;
        }
    }
}

fn term_nodes(t: &Term) -> usize {
    t.size()
}

fn proof_nodes(p: &Proof) -> usize {
    match p {
        Proof::Hyp(_) | Proof::Known(_) | Proof::Ext(..) => 1,
        Proof::PrAp(a, b) => 1 + proof_nodes(a) + proof_nodes(b),
        Proof::TmAp(a, t) => 1 + proof_nodes(a) + term_nodes(t),
        Proof::PrLa(h, b) => 1 + term_nodes(h) + proof_nodes(b),
        Proof::TmLa(_, b) => 1 + proof_nodes(b),
    }
}

fn mutate_here(rng: &mut ChaCha8Rng, pool: &Pool, t: &Term) -> Term {
    match t {
        Term::Db(i) => match rng.gen_range(0..3) {
            0 => Term::Db(i + 1),
            1 if *i > 0 => Term::Db(i - 1),
            _ => Term::Prim(rng.gen_range(0..pool.prims.max(1))),
        },
        Term::Prim(i) => {
            let j = rng.gen_range(0..pool.prims.max(1));
            if j == *i {
                Term::Prim((i + 1) % pool.prims.max(1))
            } else {
                Term::Prim(j)
            }
        }
        Term::Ref(id) => match pool.objs.iter().filter(|o| *o != id).collect::<Vec<_>>().choose(rng) {
            Some(o) => Term::Ref(**o),
            None => Term::Prim(0),
        },
        Term::Ap(f, a) => match rng.gen_range(0..3) {
            0 => Term::Ap(a.clone(), f.clone()),
            1 => (**f).clone(),
            _ => (**a).clone(),
        },
        Term::Imp(a, b) => match rng.gen_range(0..3) {
            0 => Term::Imp(b.clone(), a.clone()),
            1 => (**a).clone(),
            _ => (**b).clone(),
        },
        Term::La(ty, b) => match rng.gen_range(0..2) {
            0 => Term::La(other_ty(rng, pool, ty), b.clone()),
            _ => Term::All(ty.clone(), b.clone()),
        },
        Term::All(ty, b) => match rng.gen_range(0..2) {
            0 => Term::All(other_ty(rng, pool, ty), b.clone()),
            _ => Term::La(ty.clone(), b.clone()),
        },
    }
}

/// Mutates the `k`-th node (pre-order) of `t`.
fn mutate_term_at(rng: &mut ChaCha8Rng, pool: &Pool, t: &Term, k: &mut usize) -> Term {
    if *k == 0 {
        *k = usize::MAX;
        return mutate_here(rng, pool, t);
    }
    *k -= 1;
    match t {
        Term::Db(_) | Term::Prim(_) | Term::Ref(_) => t.clone(),
        Term::Ap(a, b) => {
            let a2 = mutate_term_at(rng, pool, a, k);
            Term::Ap(Box::new(a2), Box::new(mutate_term_at(rng, pool, b, k)))
        }
        Term::Imp(a, b) => {
            let a2 = mutate_term_at(rng, pool, a, k);
            Term::Imp(Box::new(a2), Box::new(mutate_term_at(rng, pool, b, k)))
        }
        Term::La(ty, b) => Term::La(ty.clone(), Box::new(mutate_term_at(rng, pool, b, k))),
        Term::All(ty, b) => Term::All(ty.clone(), Box::new(mutate_term_at(rng, pool, b, k))),
    }
}

fn mutate_proof_here(rng: &mut ChaCha8Rng, pool: &Pool, p: &Proof) -> Proof {
    match p {
        Proof::Hyp(i) => match rng.gen_range(0..3) {
            0 => Proof::Hyp(i + 1),
            1 if *i > 0 => Proof::Hyp(i - 1),
            _ => Proof::Known(*pool.props.choose(rng).unwrap()),
        },
        Proof::Known(id) => match pool.props.iter().filter(|q| *q != id).collect::<Vec<_>>().choose(rng) {
            Some(q) => Proof::Known(**q),
            None => Proof::Hyp(0),
        },
        Proof::PrAp(a, b) => match rng.gen_range(0..3) {
            0 => Proof::PrAp(b.clone(), a.clone()),
            1 => (**a).clone(),
            _ => (**b).clone(),
        },
        Proof::TmAp(a, _) => match rng.gen_range(0..2) {
            0 => (**a).clone(),
            _ => Proof::TmAp(a.clone(), Term::Prim(rng.gen_range(0..pool.prims.max(1)))),
        },
        Proof::PrLa(_, b) => (**b).clone(),
        Proof::TmLa(ty, b) => match rng.gen_range(0..2) {
            0 => Proof::TmLa(other_ty(rng, pool, ty), b.clone()),
            _ => (**b).clone(),
        },
        Proof::Ext(a, b) => match rng.gen_range(0..2) {
            0 => Proof::Ext(other_ty(rng, pool, a), b.clone()),
            _ => Proof::Ext(a.clone(), other_ty(rng, pool, b)),
        },
    }
}

fn mutate_proof_at(rng: &mut ChaCha8Rng, pool: &Pool, p: &Proof, k: &mut usize) -> Proof {
    if *k == 0 {
        *k = usize::MAX;
        return mutate_proof_here(rng, pool, p);
    }
    *k -= 1;
    match p {
        Proof::Hyp(_) | Proof::Known(_) | Proof::Ext(..) => p.clone(),
        Proof::PrAp(a, b) => {
            let a2 = mutate_proof_at(rng, pool, a, k);
            Proof::PrAp(Box::new(a2), Box::new(mutate_proof_at(rng, pool, b, k)))
        }
        Proof::TmAp(a, t) => {
            let a2 = mutate_proof_at(rng, pool, a, k);
            Proof::TmAp(Box::new(a2), mutate_term_at(rng, pool, t, k))
        }
        Proof::PrLa(h, b) => {
            let h2 = mutate_term_at(rng, pool, h, k);
            Proof::PrLa(h2, Box::new(mutate_proof_at(rng, pool, b, k)))
        }
        Proof::TmLa(ty, b) => Proof::TmLa(ty.clone(), Box::new(mutate_proof_at(rng, pool, b, k))),
    }
}

/// Mutates one node of the statement or proof of one theorem; returns the
/// index of the mutated item.
pub fn mutate_doc(rng: &mut ChaCha8Rng, pool: &Pool, doc: &Document) -> (Document, usize) {
    let thms: Vec<usize> =
        doc.items.iter().enumerate().filter(|(_, i)| matches!(i, Item::Thm { .. })).map(|(k, _)| k).collect();
    let at = *thms.choose(rng).expect("document has a theorem");
    let mut out = doc.clone();
    let Item::Thm { stmt, proof, .. } = &mut out.items[at] else { unreachable!() };
    if rng.gen_bool(0.3) {
        let mut k = rng.gen_range(0..stmt.size());
        *stmt = mutate_term_at(rng, pool, stmt, &mut k);
    } else {
        let mut k = rng.gen_range(0..proof_nodes(proof));
        *proof = mutate_proof_at(rng, pool, proof, &mut k);
    }
    (out, at)
}

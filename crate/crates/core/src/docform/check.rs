use serde::{Deserialize, Serialize};

use crate::hash::{ObjId, PropId};
use crate::kernel::{
    as_negation, beta_eta, check_theorem, prop_check, raw_term_hash, typecheck, Definition,
    KernelError, Signature, Term, Ty,
};

use super::ast::{Document, Item, ParamTarget};
use super::DocError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewDef {
    pub index: usize,
    pub name: String,
    pub id: ObjId,
    pub ty: Ty,
    /// False when an identical object already existed.
    pub fresh: bool,
    pub uses: Vec<ObjId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewThm {
    pub index: usize,
    pub name: String,
    pub id: PropId,
    pub stmt: Term,
    pub fresh: bool,
    /// Set when the statement has the form `Q -> false`: the id and normal form of `Q`.
    pub refutes: Option<PropId>,
    pub negated: Option<Term>,
    pub uses_objs: Vec<ObjId>,
    pub uses_props: Vec<PropId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewConj {
    pub index: usize,
    pub name: String,
    pub id: PropId,
    pub stmt: Term,
    pub tag: String,
}

/// What a checked document adds to its theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocEffect {
    pub defs: Vec<NewDef>,
    pub thms: Vec<NewThm>,
    pub conjs: Vec<NewConj>,
    /// The signature after the document.
    pub sig: Signature,
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}

fn check_item(sig: &mut Signature, index: usize, item: &Item, eff: &mut DocEffect) -> Result<(), KernelError> {
    match item {
        Item::Param { target: ParamTarget::Obj { id, ty }, .. } => {
            let d = sig.defs.get(id).ok_or(KernelError::UnknownRef(*id))?;
            if d.ty != *ty {
                return Err(KernelError::TypeMismatch { expected: ty.clone(), found: d.ty.clone() });
            }
        }
        Item::Param { target: ParamTarget::Prop { id }, .. } => {
            sig.known(id).ok_or(KernelError::UnknownKnown(*id))?;
        }
        Item::Def { name, ty, body } => {
            let found = typecheck(sig, &[], body)?;
            if found != *ty {
                return Err(KernelError::TypeMismatch { expected: ty.clone(), found });
            }
            let id = ObjId(raw_term_hash(body));
            let fresh = !sig.defs.contains_key(&id);
            let mut uses = Vec::new();
            body.refs(&mut uses);
            sig.defs.insert(id, Definition { ty: ty.clone(), body: beta_eta(body) });
            eff.defs.push(NewDef { index, name: name.clone(), id, ty: ty.clone(), fresh, uses: sorted(uses) });
        }
        Item::Thm { name, stmt, proof } => {
            let nf = check_theorem(sig, stmt, proof)?;
            let id = PropId(raw_term_hash(stmt));
            let fresh = sig.known(&id).is_none();
            let negated = as_negation(sig, stmt).map(|q| beta_eta(&q));
            let refutes = negated.as_ref().map(|q| PropId(raw_term_hash(q)));
            let (mut objs, mut props) = (Vec::new(), Vec::new());
            stmt.refs(&mut objs);
            proof.refs(&mut objs, &mut props);
            sig.thms.insert(id, nf.clone());
            eff.thms.push(NewThm {
                index,
                name: name.clone(),
                id,
                stmt: nf,
                fresh,
                refutes,
                negated,
                uses_objs: sorted(objs),
                uses_props: sorted(props),
            });
        }
        Item::Conj { name, stmt, tag } => {
            prop_check(sig, stmt)?;
            eff.conjs.push(NewConj {
                index,
                name: name.clone(),
                id: PropId(raw_term_hash(stmt)),
                stmt: beta_eta(stmt),
                tag: tag.clone(),
            });
        }
    }
    Ok(())
}

/// Checks the items in order against `sig`. Each item may use what earlier
/// items introduced.
pub fn check_doc(sig: &Signature, doc: &Document) -> Result<DocEffect, DocError> {
    let mut eff = DocEffect { defs: Vec::new(), thms: Vec::new(), conjs: Vec::new(), sig: Signature::default() };
    let mut sig = sig.clone();
    for (index, item) in doc.items.iter().enumerate() {
        check_item(&mut sig, index, item, &mut eff).map_err(|error| DocError {
            index,
            name: item.name().to_string(),
            error,
        })?;
    }
    eff.sig = sig;
    Ok(eff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ItemStatus {
    Ok { id: String, fresh: bool },
    Failed { code: String, message: String },
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemReport {
    pub index: usize,
    pub name: String,
    pub kind: String,
    #[serde(flatten)]
    pub status: ItemStatus,
}

/// Per-item results; items after the first failure are skipped.
pub fn check_doc_report(sig: &Signature, doc: &Document) -> Vec<ItemReport> {
    let mut eff = DocEffect { defs: Vec::new(), thms: Vec::new(), conjs: Vec::new(), sig: Signature::default() };
    let mut sig = sig.clone();
    let mut failed = false;
    let mut out = Vec::new();
    for (index, item) in doc.items.iter().enumerate() {
        let status = if failed {
            ItemStatus::Skipped
        } else {
            match check_item(&mut sig, index, item, &mut eff) {
                Ok(()) => {
                    let (id, fresh) = match item {
                        Item::Def { .. } => eff.defs.last().map(|d| (d.id.to_hex(), d.fresh)).unwrap(),
                        Item::Thm { .. } => eff.thms.last().map(|t| (t.id.to_hex(), t.fresh)).unwrap(),
                        Item::Conj { .. } => (eff.conjs.last().unwrap().id.to_hex(), true),
                        Item::Param { target: ParamTarget::Obj { id, .. }, .. } => (id.to_hex(), false),
                        Item::Param { target: ParamTarget::Prop { id }, .. } => (id.to_hex(), false),
                    };
                    ItemStatus::Ok { id, fresh }
                }
                Err(e) => {
                    failed = true;
                    ItemStatus::Failed { code: e.code().to_string(), message: e.to_string() }
                }
            }
        };
        out.push(ItemReport { index, name: item.name().to_string(), kind: item.kind().to_string(), status });
    }
    out
}

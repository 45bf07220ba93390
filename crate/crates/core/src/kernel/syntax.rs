use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hash::{ObjId, PropId};

/// Simple types. `Base(0)` is the type of sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ty {
    Prop,
    Base(u32),
    Func(Box<Ty>, Box<Ty>),
}

pub const SET: Ty = Ty::Base(0);

impl Ty {
    pub fn func(dom: Ty, cod: Ty) -> Ty {
        Ty::Func(Box::new(dom), Box::new(cod))
    }

    /// `a1 -> a2 -> ... -> cod`
    pub fn arrows(args: impl IntoIterator<Item = Ty>, cod: Ty) -> Ty {
        let args: Vec<Ty> = args.into_iter().collect();
        args.into_iter().rev().fold(cod, |acc, a| Ty::func(a, acc))
    }

    pub fn size(&self) -> usize {
        match self {
            Ty::Prop | Ty::Base(_) => 1,
            Ty::Func(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Prop => f.write_str("prop"),
            Ty::Base(0) => f.write_str("set"),
            Ty::Base(i) => write!(f, "base{i}"),
            Ty::Func(a, b) => {
                if matches!(**a, Ty::Func(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Terms in de Bruijn form. `Db(0)` is the innermost binder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Db(u32),
    Prim(u32),
    Ref(ObjId),
    Ap(Box<Term>, Box<Term>),
    La(Ty, Box<Term>),
    Imp(Box<Term>, Box<Term>),
    All(Ty, Box<Term>),
}

impl Term {
    pub fn ap(f: Term, a: Term) -> Term {
        Term::Ap(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::ap)
    }

    pub fn la(ty: Ty, body: Term) -> Term {
        Term::La(ty, Box::new(body))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    pub fn all(ty: Ty, body: Term) -> Term {
        Term::All(ty, Box::new(body))
    }

    /// `all (p : prop) => p`
    pub fn falsity() -> Term {
        Term::all(Ty::Prop, Term::Db(0))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Db(_) | Term::Prim(_) | Term::Ref(_) => 1,
            Term::Ap(a, b) | Term::Imp(a, b) => 1 + a.size() + b.size(),
            Term::La(_, b) | Term::All(_, b) => 1 + b.size(),
        }
    }

    /// Adds `d` to every variable index `>= cutoff`.
    pub fn shift(&self, d: i64, cutoff: u32) -> Term {
        match self {
            Term::Db(i) if *i >= cutoff => {
                let n = i64::from(*i) + d;
                assert!(n >= 0, "negative de Bruijn index after shift");
                Term::Db(n as u32)
            }
            Term::Db(_) | Term::Prim(_) | Term::Ref(_) => self.clone(),
            Term::Ap(a, b) => Term::ap(a.shift(d, cutoff), b.shift(d, cutoff)),
            Term::Imp(a, b) => Term::imp(a.shift(d, cutoff), b.shift(d, cutoff)),
            Term::La(ty, b) => Term::la(ty.clone(), b.shift(d, cutoff + 1)),
            Term::All(ty, b) => Term::all(ty.clone(), b.shift(d, cutoff + 1)),
        }
    }

    /// Replaces variable `j` by `s` (which lives at depth `j`'s context),
    /// lowering the variables above `j`.
    fn subst_at(&self, j: u32, s: &Term) -> Term {
        match self {
            Term::Db(i) if *i == j => s.shift(i64::from(j), 0),
            Term::Db(i) if *i > j => Term::Db(i - 1),
            Term::Db(_) | Term::Prim(_) | Term::Ref(_) => self.clone(),
            Term::Ap(a, b) => Term::ap(a.subst_at(j, s), b.subst_at(j, s)),
            Term::Imp(a, b) => Term::imp(a.subst_at(j, s), b.subst_at(j, s)),
            Term::La(ty, b) => Term::la(ty.clone(), b.subst_at(j + 1, s)),
            Term::All(ty, b) => Term::all(ty.clone(), b.subst_at(j + 1, s)),
        }
    }

    /// Beta-instantiation of a binder body with `arg`.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst_at(0, arg)
    }

    pub fn has_free(&self, j: u32) -> bool {
        match self {
            Term::Db(i) => *i == j,
            Term::Prim(_) | Term::Ref(_) => false,
            Term::Ap(a, b) | Term::Imp(a, b) => a.has_free(j) || b.has_free(j),
            Term::La(_, b) | Term::All(_, b) => b.has_free(j + 1),
        }
    }

    /// Number of enclosing binders the term needs to be closed.
    pub fn free_depth(&self) -> u32 {
        match self {
            Term::Db(i) => i + 1,
            Term::Prim(_) | Term::Ref(_) => 0,
            Term::Ap(a, b) | Term::Imp(a, b) => a.free_depth().max(b.free_depth()),
            Term::La(_, b) | Term::All(_, b) => b.free_depth().saturating_sub(1),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_depth() == 0
    }

    /// Head symbol and argument spine of an application.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::Ap(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn refs(&self, out: &mut Vec<ObjId>) {
        match self {
            Term::Ref(id) => out.push(*id),
            Term::Db(_) | Term::Prim(_) => {}
            Term::Ap(a, b) | Term::Imp(a, b) => {
                a.refs(out);
                b.refs(out);
            }
            Term::La(_, b) | Term::All(_, b) => b.refs(out),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Db(i) => write!(f, "#{i}"),
            Term::Prim(i) => write!(f, "p{i}"),
            Term::Ref(id) => write!(f, "&{}", &id.to_hex()[..8]),
            Term::Ap(a, b) => write!(f, "({a:?} {b:?})"),
            Term::La(ty, b) => write!(f, "(fun {ty:?} => {b:?})"),
            Term::Imp(a, b) => write!(f, "({a:?} -> {b:?})"),
            Term::All(ty, b) => write!(f, "(all {ty:?} => {b:?})"),
        }
    }
}

/// Proof terms.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Proof {
    /// Index into the hypothesis list, counted from the outermost assumption.
    Hyp(u32),
    Known(PropId),
    PrAp(Box<Proof>, Box<Proof>),
    TmAp(Box<Proof>, Term),
    PrLa(Term, Box<Proof>),
    TmLa(Ty, Box<Proof>),
    Ext(Ty, Ty),
}

impl Proof {
    pub fn pr_ap(p: Proof, q: Proof) -> Proof {
        Proof::PrAp(Box::new(p), Box::new(q))
    }

    pub fn tm_ap(p: Proof, t: Term) -> Proof {
        Proof::TmAp(Box::new(p), t)
    }

    pub fn pr_la(hyp: Term, body: Proof) -> Proof {
        Proof::PrLa(hyp, Box::new(body))
    }

    pub fn tm_la(ty: Ty, body: Proof) -> Proof {
        Proof::TmLa(ty, Box::new(body))
    }

    /// Number of proof nodes (terms inside count as one node each).
    pub fn size(&self) -> usize {
        match self {
            Proof::Hyp(_) | Proof::Known(_) | Proof::Ext(..) => 1,
            Proof::PrAp(p, q) => 1 + p.size() + q.size(),
            Proof::TmAp(p, _) | Proof::PrLa(_, p) | Proof::TmLa(_, p) => 1 + p.size(),
        }
    }

    pub fn refs(&self, objs: &mut Vec<ObjId>, props: &mut Vec<PropId>) {
        match self {
            Proof::Hyp(_) | Proof::Ext(..) => {}
            Proof::Known(id) => props.push(*id),
            Proof::PrAp(p, q) => {
                p.refs(objs, props);
                q.refs(objs, props);
            }
            Proof::TmAp(p, t) | Proof::PrLa(t, p) => {
                t.refs(objs);
                p.refs(objs, props);
            }
            Proof::TmLa(_, p) => p.refs(objs, props),
        }
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Hyp(i) => write!(f, "h{i}"),
            Proof::Known(id) => write!(f, "known({})", &id.to_hex()[..8]),
            Proof::PrAp(p, q) => write!(f, "apply({p:?}, {q:?})"),
            Proof::TmAp(p, t) => write!(f, "allelim({p:?}, {t:?})"),
            Proof::PrLa(t, p) => write!(f, "assume {t:?} => {p:?}"),
            Proof::TmLa(ty, p) => write!(f, "allintro {ty:?} => {p:?}"),
            Proof::Ext(a, b) => write!(f, "ext({a:?}, {b:?})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub ty: Ty,
    pub body: Term,
}

/// What the kernel knows inside one theory: primitives and axioms from the
/// theory itself, plus definitions and theorems published on top of it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub base_count: u32,
    pub prims: Vec<Ty>,
    pub axioms: BTreeMap<PropId, Term>,
    pub defs: BTreeMap<ObjId, Definition>,
    pub thms: BTreeMap<PropId, Term>,
}

impl Signature {
    pub fn known(&self, id: &PropId) -> Option<&Term> {
        self.axioms.get(id).or_else(|| self.thms.get(id))
    }
}

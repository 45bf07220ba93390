use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use crate::hash::{ObjId, PropId};
use crate::kernel::{raw_term_hash, Proof, Term, Ty};

use super::ast::{Document, Item, ParamTarget, TheorySpec};
use super::parser::is_keyword;

/// Names used when rendering terms and proofs. Anything without a name is
/// printed as a `#hex` reference.
#[derive(Clone, Debug, Default)]
pub struct Names {
    pub prims: Vec<String>,
    pub objs: HashMap<ObjId, String>,
    pub props: HashMap<PropId, String>,
    reserved: HashSet<String>,
}

impl Names {
    pub fn for_theory(spec: &TheorySpec) -> Names {
        let mut n = Names { prims: spec.prims.iter().map(|p| p.name.clone()).collect(), ..Default::default() };
        n.reserved.extend(n.prims.iter().cloned());
        for a in &spec.axioms {
            n.add_prop(PropId(raw_term_hash(&a.stmt)), &a.name);
        }
        n
    }

    pub fn for_doc(spec: &TheorySpec, doc: &Document) -> Names {
        let mut n = Names::for_theory(spec);
        for item in &doc.items {
            match item {
                Item::Param { name, target: ParamTarget::Obj { id, .. } } => n.add_obj(*id, name),
                Item::Param { name, target: ParamTarget::Prop { id } } => n.add_prop(*id, name),
                Item::Def { name, body, .. } => n.add_obj(ObjId(raw_term_hash(body)), name),
                Item::Thm { name, stmt, .. } => n.add_prop(PropId(raw_term_hash(stmt)), name),
                Item::Conj { name, .. } => {
                    n.reserved.insert(name.clone());
                }
            }
        }
        n
    }

    pub fn add_obj(&mut self, id: ObjId, name: &str) {
        self.objs.entry(id).or_insert_with(|| name.to_string());
        self.reserved.insert(name.to_string());
    }

    pub fn add_prop(&mut self, id: PropId, name: &str) {
        self.props.entry(id).or_insert_with(|| name.to_string());
        self.reserved.insert(name.to_string());
    }

    fn fresh(&self, prefix: &str, depth: usize) -> String {
        let mut s = format!("{prefix}{depth}");
        while self.reserved.contains(&s) || is_keyword(&s) {
            s.push('\'');
        }
        s
    }
}

fn prefix(ty: &Ty) -> &'static str {
    match ty {
        Ty::Prop => "P",
        Ty::Base(0) => "x",
        Ty::Base(_) => "y",
        Ty::Func(..) => "f",
    }
}

struct Printer<'a> {
    names: &'a Names,
    bound: Vec<String>,
    hyps: Vec<String>,
    out: String,
}

// precedence levels for terms
const TOP: u8 = 0;
const ARROW_LHS: u8 = 1;
const ARG: u8 = 2;

impl Printer<'_> {
    fn binder(&mut self, ty: &Ty) -> String {
        let n = self.names.fresh(prefix(ty), self.bound.len());
        self.bound.push(n.clone());
        n
    }

    fn term(&mut self, t: &Term, level: u8) {
        match t {
            Term::Db(i) => {
                let i = *i as usize;
                match self.bound.len().checked_sub(i + 1) {
                    Some(k) => {
                        let n = self.bound[k].clone();
                        self.out.push_str(&n);
                    }
                    // loose index: no surface syntax exists, print a marker
                    None => write!(self.out, "?{i}").unwrap(),
                }
            }
            Term::Prim(i) => match self.names.prims.get(*i as usize) {
                Some(n) => self.out.push_str(n),
                None => write!(self.out, "?prim{i}").unwrap(),
            },
            Term::Ref(id) => match self.names.objs.get(id) {
                Some(n) => self.out.push_str(n),
                None => write!(self.out, "#{}", id.to_hex()).unwrap(),
            },
            Term::Ap(..) => {
                if level >= ARG {
                    self.out.push('(');
                }
                let (head, args) = t.spine();
                self.term(head, ARG);
                for a in args {
                    self.out.push(' ');
                    self.term(a, ARG);
                }
                if level >= ARG {
                    self.out.push(')');
                }
            }
            Term::Imp(a, b) => {
                if level >= ARROW_LHS {
                    self.out.push('(');
                }
                self.term(a, ARROW_LHS);
                self.out.push_str(" -> ");
                self.term(b, TOP);
                if level >= ARROW_LHS {
                    self.out.push(')');
                }
            }
            Term::La(..) | Term::All(..) => {
                if level > TOP {
                    self.out.push('(');
                }
                let is_fun = matches!(t, Term::La(..));
                self.out.push_str(if is_fun { "fun" } else { "all" });
                let depth = self.bound.len();
                let mut cur = t;
                loop {
                    let (ty, body) = match (cur, is_fun) {
                        (Term::La(ty, b), true) | (Term::All(ty, b), false) => (ty, b),
                        _ => break,
                    };
                    let n = self.binder(ty);
                    write!(self.out, " ({n} : {ty})").unwrap();
                    cur = body;
                }
                self.out.push_str(" => ");
                self.term(cur, TOP);
                self.bound.truncate(depth);
                if level > TOP {
                    self.out.push(')');
                }
            }
        }
    }

    fn proof(&mut self, p: &Proof) {
        match p {
            Proof::Hyp(i) => match self.hyps.get(*i as usize) {
                Some(n) => {
                    let n = n.clone();
                    self.out.push_str(&n);
                }
                None => write!(self.out, "?h{i}").unwrap(),
            },
            Proof::Known(id) => match self.names.props.get(id) {
                Some(n) => write!(self.out, "known({n})").unwrap(),
                None => write!(self.out, "known(#{})", id.to_hex()).unwrap(),
            },
            Proof::PrAp(..) => {
                let mut args = Vec::new();
                let mut cur = p;
                while let Proof::PrAp(f, a) = cur {
                    args.push(&**a);
                    cur = f;
                }
                self.out.push_str("apply(");
                self.proof(cur);
                for a in args.into_iter().rev() {
                    self.out.push_str(", ");
                    self.proof(a);
                }
                self.out.push(')');
            }
            Proof::TmAp(..) => {
                let mut args = Vec::new();
                let mut cur = p;
                while let Proof::TmAp(f, a) = cur {
                    args.push(a);
                    cur = f;
                }
                self.out.push_str("allelim(");
                self.proof(cur);
                for a in args.into_iter().rev() {
                    self.out.push_str(", ");
                    self.term(a, TOP);
                }
                self.out.push(')');
            }
            Proof::PrLa(..) => {
                self.out.push_str("assume");
                let depth = self.hyps.len();
                let mut cur = p;
                while let Proof::PrLa(t, body) = cur {
                    let n = format!("h{}", self.hyps.len());
                    self.out.push_str(&format!(" ({n} : "));
                    self.term(t, TOP);
                    self.out.push(')');
                    self.hyps.push(n);
                    cur = body;
                }
                self.out.push_str(" => ");
                self.proof(cur);
                self.hyps.truncate(depth);
            }
            Proof::TmLa(..) => {
                self.out.push_str("allintro");
                let depth = self.bound.len();
                let mut cur = p;
                while let Proof::TmLa(ty, body) = cur {
                    let n = self.binder(ty);
                    write!(self.out, " ({n} : {ty})").unwrap();
                    cur = body;
                }
                self.out.push_str(" => ");
                self.proof(cur);
                self.bound.truncate(depth);
            }
            Proof::Ext(a, b) => write!(self.out, "ext({a}, {b})").unwrap(),
        }
    }
}

pub fn print_term(names: &Names, t: &Term) -> String {
    let mut p = Printer { names, bound: Vec::new(), hyps: Vec::new(), out: String::new() };
    p.term(t, TOP);
    p.out
}

pub fn print_proof(names: &Names, pf: &Proof) -> String {
    let mut p = Printer { names, bound: Vec::new(), hyps: Vec::new(), out: String::new() };
    p.proof(pf);
    p.out
}

pub fn print_theory(spec: &TheorySpec) -> String {
    let mut names = Names { prims: spec.prims.iter().map(|p| p.name.clone()).collect(), ..Default::default() };
    names.reserved.extend(names.prims.iter().cloned());
    names.reserved.extend(spec.axioms.iter().map(|a| a.name.clone()));
    let mut out = format!("theory {}\nbase {}\n", spec.name, spec.base_count);
    for p in &spec.prims {
        writeln!(out, "prim {} : {}", p.name, p.ty).unwrap();
    }
    for a in &spec.axioms {
        writeln!(out, "axiom {} : {}", a.name, print_term(&names, &a.stmt)).unwrap();
    }
    out
}

pub fn print_doc(spec: &TheorySpec, doc: &Document) -> String {
    let mut out = format!("document #{}\n", doc.theory.to_hex());
    // names are introduced in order so that printing matches what the parser
    // has in scope at each item
    let mut names = Names::for_theory(spec);
    for item in &doc.items {
        out.push('\n');
        match item {
            Item::Param { name, target: ParamTarget::Obj { id, ty } } => {
                writeln!(out, "param obj {name} : {ty} = #{}", id.to_hex()).unwrap();
                names.add_obj(*id, name);
            }
            Item::Param { name, target: ParamTarget::Prop { id } } => {
                writeln!(out, "param known {name} = #{}", id.to_hex()).unwrap();
                names.add_prop(*id, name);
            }
            Item::Def { name, ty, body } => {
                names.reserved.insert(name.clone());
                writeln!(out, "def {name} : {ty} :=\n  {}", print_term(&names, body)).unwrap();
                names.add_obj(ObjId(raw_term_hash(body)), name);
            }
            Item::Thm { name, stmt, proof } => {
                names.reserved.insert(name.clone());
                writeln!(
                    out,
                    "thm {name} : {}\nproof\n  {}",
                    print_term(&names, stmt),
                    print_proof(&names, proof)
                )
                .unwrap();
                names.add_prop(PropId(raw_term_hash(stmt)), name);
            }
            Item::Conj { name, stmt, tag } => {
                names.reserved.insert(name.clone());
                writeln!(out, "conj {name} \"{tag}\" : {}", print_term(&names, stmt)).unwrap();
            }
        }
    }
    out
}

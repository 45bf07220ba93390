//! Reference implementations kept separate from the kernel: a naive
//! any-order reducer over its own substitution, and a term enumerator.

use std::collections::{BTreeSet, VecDeque};

use formalchain::kernel::{Signature, Term, Ty};

fn lift(t: &Term, by: u32, above: u32) -> Term {
    match t {
        Term::Db(i) => Term::Db(if *i >= above { i + by } else { *i }),
        Term::Prim(_) | Term::Ref(_) => t.clone(),
        Term::Ap(a, b) => Term::Ap(Box::new(lift(a, by, above)), Box::new(lift(b, by, above))),
        Term::Imp(a, b) => Term::Imp(Box::new(lift(a, by, above)), Box::new(lift(b, by, above))),
        Term::La(ty, b) => Term::La(ty.clone(), Box::new(lift(b, by, above + 1))),
        Term::All(ty, b) => Term::All(ty.clone(), Box::new(lift(b, by, above + 1))),
    }
}

fn lower(t: &Term, above: u32) -> Term {
    match t {
        Term::Db(i) if *i > above => Term::Db(i - 1),
        Term::Db(i) => {
            assert_ne!(*i, above, "lowering a bound occurrence");
            t.clone()
        }
        Term::Prim(_) | Term::Ref(_) => t.clone(),
        Term::Ap(a, b) => Term::Ap(Box::new(lower(a, above)), Box::new(lower(b, above))),
        Term::Imp(a, b) => Term::Imp(Box::new(lower(a, above)), Box::new(lower(b, above))),
        Term::La(ty, b) => Term::La(ty.clone(), Box::new(lower(b, above + 1))),
        Term::All(ty, b) => Term::All(ty.clone(), Box::new(lower(b, above + 1))),
    }
}

fn occurs(t: &Term, k: u32) -> bool {
    match t {
        Term::Db(i) => *i == k,
        Term::Prim(_) | Term::Ref(_) => false,
        Term::Ap(a, b) | Term::Imp(a, b) => occurs(a, k) || occurs(b, k),
        Term::La(_, b) | Term::All(_, b) => occurs(b, k + 1),
    }
}

/// `body[0 := arg]` at binder depth `k`.
fn subst(body: &Term, k: u32, arg: &Term) -> Term {
    match body {
        Term::Db(i) if *i == k => lift(arg, k, 0),
        Term::Db(i) if *i > k => Term::Db(i - 1),
        Term::Db(_) | Term::Prim(_) | Term::Ref(_) => body.clone(),
        Term::Ap(a, b) => Term::Ap(Box::new(subst(a, k, arg)), Box::new(subst(b, k, arg))),
        Term::Imp(a, b) => Term::Imp(Box::new(subst(a, k, arg)), Box::new(subst(b, k, arg))),
        Term::La(ty, b) => Term::La(ty.clone(), Box::new(subst(b, k + 1, arg))),
        Term::All(ty, b) => Term::All(ty.clone(), Box::new(subst(b, k + 1, arg))),
    }
}

/// Every term reachable from `t` by contracting exactly one beta or eta redex.
pub fn one_step(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Term::Ap(f, a) = t {
        if let Term::La(_, body) = &**f {
            out.push(subst(body, 0, a));
        }
    }
    if let Term::La(_, body) = t {
        if let Term::Ap(g, x) = &**body {
            if **x == Term::Db(0) && !occurs(g, 0) {
                out.push(lower(g, 0));
            }
        }
    }
    match t {
        Term::Ap(a, b) | Term::Imp(a, b) => {
            let rebuild = |x: Term, y: Term| match t {
                Term::Ap(..) => Term::Ap(Box::new(x), Box::new(y)),
                _ => Term::Imp(Box::new(x), Box::new(y)),
            };
            for a2 in one_step(a) {
                out.push(rebuild(a2, (**b).clone()));
            }
            for b2 in one_step(b) {
                out.push(rebuild((**a).clone(), b2));
            }
        }
        Term::La(ty, b) => out.extend(one_step(b).into_iter().map(|b2| Term::La(ty.clone(), Box::new(b2)))),
        Term::All(ty, b) => out.extend(one_step(b).into_iter().map(|b2| Term::All(ty.clone(), Box::new(b2)))),
        _ => {}
    }
    out
}

/// Explores the whole reduction graph of `t` and returns its normal forms.
/// Panics if more than `limit` distinct terms are reachable.
pub fn all_normal_forms(t: &Term, limit: usize) -> BTreeSet<Term> {
    let mut seen: BTreeSet<Term> = BTreeSet::new();
    let mut nfs = BTreeSet::new();
    let mut todo = VecDeque::from([t.clone()]);
    while let Some(u) = todo.pop_front() {
        if !seen.insert(u.clone()) {
            continue;
        }
        assert!(seen.len() <= limit, "reduction graph too large");
        let next = one_step(&u);
        if next.is_empty() {
            nfs.insert(u);
        } else {
            todo.extend(next);
        }
    }
    nfs
}

/// One base type, a unary constant and a nullary one.
pub fn test_signature() -> Signature {
    Signature { base_count: 1, prims: vec![Ty::func(Ty::Base(0), Ty::Base(0)), Ty::Base(0)], ..Signature::default() }
}

pub fn binder_types() -> Vec<Ty> {
    let i = Ty::Base(0);
    vec![i.clone(), Ty::Prop, Ty::func(i.clone(), i)]
}

/// All raw terms of exactly `size` nodes under `depth` binders.
fn raw(size: usize, depth: u32, tys: &[Ty], out: &mut Vec<Term>) {
    if size == 1 {
        out.extend((0..depth).map(Term::Db));
        out.extend([Term::Prim(0), Term::Prim(1)]);
        return;
    }
    for ty in tys {
        let mut bodies = Vec::new();
        raw(size - 1, depth + 1, tys, &mut bodies);
        for b in bodies {
            out.push(Term::La(ty.clone(), Box::new(b.clone())));
            out.push(Term::All(ty.clone(), Box::new(b)));
        }
    }
    for left in 1..size - 1 {
        let mut ls = Vec::new();
        raw(left, depth, tys, &mut ls);
        let mut rs = Vec::new();
        raw(size - 1 - left, depth, tys, &mut rs);
        for l in &ls {
            for r in &rs {
                out.push(Term::Ap(Box::new(l.clone()), Box::new(r.clone())));
                out.push(Term::Imp(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
}

/// Closed terms of at most `max` nodes that typecheck in `sig`.
pub fn closed_well_typed(sig: &Signature, max: usize) -> Vec<Term> {
    let tys = binder_types();
    let mut out = Vec::new();
    for n in 1..=max {
        let mut all = Vec::new();
        raw(n, 0, &tys, &mut all);
        out.extend(all.into_iter().filter(|t| formalchain::kernel::typecheck(sig, &[], t).is_ok()));
    }
    out
}

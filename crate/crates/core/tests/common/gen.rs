//! Random well-typed terms over the mini-HF primitives.

use formalchain::kernel::{Term, Ty};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const IN: u32 = 0;
const EMPTY: u32 = 1;
const UNION: u32 = 2;
const POWER: u32 = 3;
const ADJOIN: u32 = 4;

fn set() -> Ty {
    Ty::Base(0)
}

fn pred() -> Ty {
    Ty::func(set(), Ty::Prop)
}

fn binder_ty(rng: &mut ChaCha8Rng) -> Ty {
    [set(), Ty::Prop, pred(), Ty::func(set(), set())].choose(rng).unwrap().clone()
}

/// Variables of `ctx` (innermost last) whose type ends in `ty` after `args`
/// arguments; returns (index, argument types).
fn heads(ctx: &[Ty], ty: &Ty) -> Vec<(u32, Vec<Ty>)> {
    let mut out = Vec::new();
    for (k, v) in ctx.iter().rev().enumerate() {
        let mut args = Vec::new();
        let mut cur = v.clone();
        loop {
            if &cur == ty {
                out.push((k as u32, args.clone()));
            }
            match cur {
                Ty::Func(a, b) => {
                    args.push(*a);
                    cur = *b;
                }
                _ => break,
            }
        }
    }
    out
}

pub fn term(rng: &mut ChaCha8Rng, ctx: &mut Vec<Ty>, ty: &Ty, fuel: u32) -> Term {
    let vars = heads(ctx, ty);
    if fuel == 0 || rng.gen_ratio(1, 5) {
        if let Some((k, args)) = vars.iter().filter(|(_, a)| a.is_empty()).collect::<Vec<_>>().choose(rng).map(|x| (*x).clone()) {
            debug_assert!(args.is_empty());
            return Term::Db(k);
        }
        return leaf(rng, ctx, ty);
    }
    let fuel = fuel - 1;
    match rng.gen_range(0..10) {
        // beta redex
        0 => {
            let s = binder_ty(rng);
            ctx.push(s.clone());
            let body = term(rng, ctx, ty, fuel / 2);
            ctx.pop();
            let arg = term(rng, ctx, &s, fuel / 2);
            return Term::ap(Term::la(s, body), arg);
        }
        // variable head applied to arguments
        1 | 2 if !vars.is_empty() => {
            let (k, args) = vars.choose(rng).unwrap().clone();
            let mut t = Term::Db(k);
            for a in args {
                t = Term::ap(t, term(rng, ctx, &a, fuel / 2));
            }
            return t;
        }
        _ => {}
    }
    match ty {
        Ty::Prop => match rng.gen_range(0..4) {
            0 => Term::imp(term(rng, ctx, &Ty::Prop, fuel / 2), term(rng, ctx, &Ty::Prop, fuel / 2)),
            1 => {
                let s = binder_ty(rng);
                ctx.push(s.clone());
                let b = term(rng, ctx, &Ty::Prop, fuel);
                ctx.pop();
                Term::all(s, b)
            }
            _ => Term::apps(Term::Prim(IN), [term(rng, ctx, &set(), fuel / 2), term(rng, ctx, &set(), fuel / 2)]),
        },
        Ty::Base(_) => match rng.gen_range(0..3) {
            0 => Term::ap(Term::Prim(UNION), term(rng, ctx, &set(), fuel)),
            1 => Term::ap(Term::Prim(POWER), term(rng, ctx, &set(), fuel)),
            _ => Term::apps(Term::Prim(ADJOIN), [term(rng, ctx, &set(), fuel / 2), term(rng, ctx, &set(), fuel / 2)]),
        },
        Ty::Func(a, b) => {
            ctx.push((**a).clone());
            let body = term(rng, ctx, b, fuel);
            ctx.pop();
            Term::la((**a).clone(), body)
        }
    }
}

fn leaf(rng: &mut ChaCha8Rng, ctx: &mut Vec<Ty>, ty: &Ty) -> Term {
    match ty {
        Ty::Prop => Term::all(Ty::Prop, Term::Db(0)),
        Ty::Base(_) => Term::Prim(EMPTY),
        Ty::Func(a, b) if **a == set() && **b == set() => {
            [Term::Prim(UNION), Term::Prim(POWER)].choose(rng).unwrap().clone()
        }
        Ty::Func(a, b) if **a == set() && **b == pred() => Term::Prim(IN),
        Ty::Func(a, b) => {
            ctx.push((**a).clone());
            let body = leaf(rng, ctx, b);
            ctx.pop();
            Term::la((**a).clone(), body)
        }
    }
}

pub fn closed_prop(rng: &mut ChaCha8Rng, fuel: u32) -> Term {
    term(rng, &mut Vec::new(), &Ty::Prop, fuel)
}

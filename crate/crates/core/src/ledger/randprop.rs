//! Pseudorandom propositions over the built-in set theory, for auto-bounties.

use crate::hash::sha256;
use crate::kernel::{Term, SET};

// primitive indices in the mini_hf theory
const IN: u32 = 0;
const EMPTY: u32 = 1;
const UNION: u32 = 2;
const POWER: u32 = 3;
const ADJOIN: u32 = 4;

pub const MAX_DEPTH: u32 = 5;

/// Bytes from the chain h1 = H(seed), h(i+1) = H(h(i)).
struct Stream {
    block: [u8; 32],
    pos: usize,
}

impl Stream {
    fn new(seed: &[u8; 32]) -> Stream {
        Stream { block: sha256(seed), pos: 0 }
    }

    fn next(&mut self) -> u8 {
        if self.pos == 32 {
            self.block = sha256(&self.block);
            self.pos = 0;
        }
        self.pos += 1;
        self.block[self.pos - 1]
    }
}

fn set_term(s: &mut Stream, depth: u32, vars: u32) -> Term {
    let pick = if depth == 0 { s.next() % 2 } else { s.next() % 8 };
    match pick {
        0 if vars > 0 => Term::Db(u32::from(s.next()) % vars),
        0 | 1 => Term::Prim(EMPTY),
        2 | 3 => Term::ap(Term::Prim(UNION), set_term(s, depth - 1, vars)),
        4 | 5 => Term::ap(Term::Prim(POWER), set_term(s, depth - 1, vars)),
        _ => {
            let a = set_term(s, depth - 1, vars);
            Term::apps(Term::Prim(ADJOIN), [a, set_term(s, depth - 1, vars)])
        }
    }
}

fn atom(s: &mut Stream, vars: u32) -> Term {
    let a = set_term(s, 2, vars);
    Term::apps(Term::Prim(IN), [a, set_term(s, 2, vars)])
}

fn prop(s: &mut Stream, depth: u32, vars: u32) -> Term {
    if depth == 0 {
        return atom(s, vars);
    }
    // atoms sit at least two connectives deep
    match s.next() % 4 {
        0 if depth + 2 <= MAX_DEPTH => atom(s, vars),
        0 => Term::all(SET, prop(s, depth - 1, vars + 1)),
        1 => {
            let a = prop(s, depth - 1, vars);
            if s.next().is_multiple_of(8) {
                return Term::imp(a, Term::falsity());
            }
            Term::imp(a, prop(s, depth - 1, vars))
        }
        _ => Term::all(SET, prop(s, depth - 1, vars + 1)),
    }
}

/// A closed proposition of connective depth at most 5, determined by `seed`.
pub fn gen_random_prop(seed: &[u8; 32]) -> Term {
    let mut s = Stream::new(seed);
    prop(&mut s, MAX_DEPTH, 0)
}


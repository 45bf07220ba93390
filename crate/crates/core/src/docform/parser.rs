use std::collections::{HashMap, HashSet};

use crate::hash::{ObjId, PropId};
use crate::kernel::{raw_term_hash, Proof, Term, Ty};

use super::ast::{AxiomDecl, Document, Item, Library, ParamTarget, PrimDecl, TheorySpec, DEFAULT_TAG};
use super::lexer::{lex, Spanned, Tok};
use super::ParseError;

/// Words that cannot be used as names.
pub const KEYWORDS: &[&str] = &[
    "fun", "all", "prop", "set", "theory", "document", "base", "prim", "axiom", "notation", "param",
    "obj", "known", "def", "thm", "conj", "proof", "assume", "allintro", "apply", "allelim", "ext",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s) || base_index(s).is_some()
}

fn base_index(s: &str) -> Option<u32> {
    let rest = s.strip_prefix("base")?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

#[derive(Clone, Debug)]
enum Global {
    Prim(u32),
    Ref(ObjId),
    Notation(usize),
}

#[derive(Clone, Debug)]
struct Notation {
    arity: usize,
    // closed: the parameters are the outermost lambdas
    lam: Term,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    globals: HashMap<String, Global>,
    knowns: HashMap<String, PropId>,
    notations: Vec<Notation>,
    bound: Vec<String>,
    hyps: Vec<String>,
    taken: HashSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            globals: HashMap::new(),
            knowns: HashMap::new(),
            notations: Vec::new(),
            bound: Vec::new(),
            hyps: Vec::new(),
            taken: HashSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (u32, u32) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{kw}`"))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.fail("a name"),
        }
    }

    fn fresh_global(&mut self) -> PResult<(String, (u32, u32))> {
        let at = self.here();
        let n = self.name()?;
        if !self.taken.insert(n.clone()) {
            return Err(ParseError::Duplicate { name: n, line: at.0, col: at.1 });
        }
        Ok((n, at))
    }

    fn hex(&mut self) -> PResult<[u8; 32]> {
        match self.peek() {
            Tok::Hex(h) => {
                let mut out = [0u8; 32];
                hex::decode_to_slice(h, &mut out).expect("lexer checked hex");
                self.bump();
                Ok(out)
            }
            _ => self.fail("`#` followed by a 64-digit hex id"),
        }
    }

    // ---- types

    fn ty(&mut self) -> PResult<Ty> {
        let a = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Ty::func(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn ty_atom(&mut self) -> PResult<Ty> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "prop" => {
                self.bump();
                Ok(Ty::Prop)
            }
            Tok::Ident(s) if s == "set" => {
                self.bump();
                Ok(Ty::Base(0))
            }
            Tok::Ident(s) if base_index(&s).is_some() => {
                self.bump();
                Ok(Ty::Base(base_index(&s).unwrap()))
            }
            _ => self.fail("a type"),
        }
    }

    // ---- binders

    /// `(x y : T) (z : U)` or `x y : T`, with `item` parsing what follows the colon.
    fn binders<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<(String, T)>>
    where
        T: Clone,
    {
        let mut out = Vec::new();
        if *self.peek() == Tok::LParen {
            while *self.peek() == Tok::LParen {
                self.bump();
                let names = self.names()?;
                self.expect(Tok::Colon)?;
                let t = item(self)?;
                self.expect(Tok::RParen)?;
                out.extend(names.into_iter().map(|n| (n, t.clone())));
            }
        } else {
            let names = self.names()?;
            self.expect(Tok::Colon)?;
            let t = item(self)?;
            out.extend(names.into_iter().map(|n| (n, t.clone())));
        }
        Ok(out)
    }

    fn names(&mut self) -> PResult<Vec<String>> {
        let mut names = vec![self.name()?];
        while matches!(self.peek(), Tok::Ident(s) if !is_keyword(s)) {
            names.push(self.name()?);
        }
        Ok(names)
    }

    fn ty_binders(&mut self) -> PResult<Vec<(String, Ty)>> {
        self.binders(|p| p.ty())
    }

    // ---- terms

    fn term(&mut self) -> PResult<Term> {
        if self.is_kw("fun") || self.is_kw("all") {
            let is_fun = self.is_kw("fun");
            self.bump();
            let bs = self.ty_binders()?;
            self.expect(Tok::FatArrow)?;
            for (n, _) in &bs {
                self.bound.push(n.clone());
            }
            let body = self.term();
            self.bound.truncate(self.bound.len() - bs.len());
            let mut t = body?;
            for (_, ty) in bs.into_iter().rev() {
                t = if is_fun { Term::la(ty, t) } else { Term::all(ty, t) };
            }
            return Ok(t);
        }
        let lhs = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Term::imp(lhs, self.term()?))
        } else {
            Ok(lhs)
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s),
            Tok::Hex(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn lookup_bound(&self, name: &str) -> Option<Term> {
        self.bound.iter().rev().position(|b| b == name).map(|i| Term::Db(i as u32))
    }

    fn app(&mut self) -> PResult<Term> {
        if !self.starts_atom() {
            return self.fail("a term");
        }
        if let Tok::Ident(s) = self.peek().clone() {
            if self.lookup_bound(&s).is_none() {
                if let Some(Global::Notation(k)) = self.globals.get(&s).cloned() {
                    let (line, col) = self.here();
                    self.bump();
                    let mut args = Vec::new();
                    while self.starts_atom() {
                        args.push(self.atom()?);
                    }
                    return self.expand(k, &s, args, line, col);
                }
            }
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::ap(t, a);
        }
        Ok(t)
    }

    fn expand(&self, k: usize, name: &str, args: Vec<Term>, line: u32, col: u32) -> PResult<Term> {
        let n = &self.notations[k];
        if args.len() != n.arity {
            return Err(ParseError::Arity {
                name: name.into(),
                expected: n.arity,
                found: args.len(),
                line,
                col,
            });
        }
        let mut t = n.lam.clone();
        for a in &args {
            match t {
                Term::La(_, body) => t = body.instantiate(a),
                _ => unreachable!("notation arity matches its binders"),
            }
        }
        Ok(t)
    }

    fn atom(&mut self) -> PResult<Term> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Hex(_) => Ok(Term::Ref(ObjId(self.hex()?))),
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                if let Some(t) = self.lookup_bound(&s) {
                    return Ok(t);
                }
                match self.globals.get(&s).cloned() {
                    Some(Global::Prim(i)) => Ok(Term::Prim(i)),
                    Some(Global::Ref(id)) => Ok(Term::Ref(id)),
                    Some(Global::Notation(k)) => self.expand(k, &s, Vec::new(), line, col),
                    None => Err(ParseError::UnknownName { name: s, line, col }),
                }
            }
            _ => self.fail("a term"),
        }
    }

    // ---- proofs

    fn proof(&mut self) -> PResult<Proof> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let p = self.proof()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(kw) if kw == "assume" => {
                self.bump();
                let bs = self.hyp_binders()?;
                self.expect(Tok::FatArrow)?;
                let n = bs.len();
                let body = self.proof();
                self.hyps.truncate(self.hyps.len() - n);
                let mut p = body?;
                for t in bs.into_iter().rev() {
                    p = Proof::pr_la(t, p);
                }
                Ok(p)
            }
            Tok::Ident(kw) if kw == "allintro" => {
                self.bump();
                let bs = self.ty_binders()?;
                self.expect(Tok::FatArrow)?;
                for (n, _) in &bs {
                    self.bound.push(n.clone());
                }
                let body = self.proof();
                self.bound.truncate(self.bound.len() - bs.len());
                let mut p = body?;
                for (_, ty) in bs.into_iter().rev() {
                    p = Proof::tm_la(ty, p);
                }
                Ok(p)
            }
            Tok::Ident(kw) if kw == "apply" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut p = self.proof()?;
                let mut n = 0;
                while *self.peek() == Tok::Comma {
                    self.bump();
                    p = Proof::pr_ap(p, self.proof()?);
                    n += 1;
                }
                self.expect(Tok::RParen)?;
                if n == 0 {
                    return Err(ParseError::Arity { name: kw, expected: 2, found: 1, line, col });
                }
                Ok(p)
            }
            Tok::Ident(kw) if kw == "allelim" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut p = self.proof()?;
                let mut n = 0;
                while *self.peek() == Tok::Comma {
                    self.bump();
                    p = Proof::tm_ap(p, self.term()?);
                    n += 1;
                }
                self.expect(Tok::RParen)?;
                if n == 0 {
                    return Err(ParseError::Arity { name: kw, expected: 2, found: 1, line, col });
                }
                Ok(p)
            }
            Tok::Ident(kw) if kw == "ext" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.ty()?;
                self.expect(Tok::Comma)?;
                let b = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(Proof::Ext(a, b))
            }
            Tok::Ident(kw) if kw == "known" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let id = if let Tok::Hex(_) = self.peek() {
                    PropId(self.hex()?)
                } else {
                    let (line, col) = self.here();
                    let n = self.name()?;
                    *self.knowns.get(&n).ok_or(ParseError::UnknownName { name: n, line, col })?
                };
                self.expect(Tok::RParen)?;
                Ok(Proof::Known(id))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                match self.hyps.iter().rposition(|h| *h == s) {
                    Some(i) => Ok(Proof::Hyp(i as u32)),
                    None => Err(ParseError::UnknownName { name: s, line, col }),
                }
            }
            _ => self.fail("a proof"),
        }
    }

    /// Hypothesis binders; the names stay pushed until the caller truncates.
    fn hyp_binders(&mut self) -> PResult<Vec<Term>> {
        let bs = self.binders(|p| p.term())?;
        let mut out = Vec::new();
        for (n, t) in bs {
            self.hyps.push(n);
            out.push(t);
        }
        Ok(out)
    }

    // ---- files

    fn theory(&mut self) -> PResult<(TheorySpec, HashMap<String, usize>)> {
        self.expect_kw("theory")?;
        let name = self.name()?;
        let mut spec = TheorySpec { name, base_count: 1, prims: Vec::new(), axioms: Vec::new() };
        if self.is_kw("base") {
            self.bump();
            match self.bump() {
                Tok::Num(n) if n <= u64::from(u32::MAX) => spec.base_count = n as u32,
                _ => {
                    self.pos -= 1;
                    return self.fail("a base type count");
                }
            }
        }
        let mut notation_names = HashMap::new();
        loop {
            if self.is_kw("prim") {
                self.bump();
                let (n, _) = self.fresh_global()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.globals.insert(n.clone(), Global::Prim(spec.prims.len() as u32));
                spec.prims.push(PrimDecl { name: n, ty });
            } else if self.is_kw("notation") {
                self.bump();
                let (n, _) = self.fresh_global()?;
                let bs = if *self.peek() == Tok::Define { Vec::new() } else { self.ty_binders()? };
                self.expect(Tok::Define)?;
                for (b, _) in &bs {
                    self.bound.push(b.clone());
                }
                let body = self.term();
                self.bound.clear();
                let mut lam = body?;
                for (_, ty) in bs.iter().rev() {
                    lam = Term::la(ty.clone(), lam);
                }
                notation_names.insert(n.clone(), self.notations.len());
                self.globals.insert(n, Global::Notation(self.notations.len()));
                self.notations.push(Notation { arity: bs.len(), lam });
            } else if self.is_kw("axiom") {
                self.bump();
                let (n, _) = self.fresh_global()?;
                self.expect(Tok::Colon)?;
                let stmt = self.term()?;
                self.knowns.insert(n.clone(), PropId(raw_term_hash(&stmt)));
                spec.axioms.push(AxiomDecl { name: n, stmt });
            } else if *self.peek() == Tok::Eof {
                return Ok((spec, notation_names));
            } else {
                return self.fail("`prim`, `notation`, `axiom` or end of input");
            }
        }
    }

    fn load_theory(&mut self, spec: &TheorySpec) {
        for (i, p) in spec.prims.iter().enumerate() {
            self.taken.insert(p.name.clone());
            self.globals.insert(p.name.clone(), Global::Prim(i as u32));
        }
        for a in &spec.axioms {
            self.taken.insert(a.name.clone());
            self.knowns.insert(a.name.clone(), PropId(raw_term_hash(&a.stmt)));
        }
    }

    fn document(&mut self, lib: &Library) -> PResult<Document> {
        self.expect_kw("document")?;
        let (line, col) = self.here();
        let key = match self.bump() {
            Tok::Ident(s) => s,
            Tok::Hex(h) => h,
            _ => {
                self.pos -= 1;
                return self.fail("a theory name or id");
            }
        };
        let (theory, spec) =
            lib.lookup(&key).ok_or(ParseError::UnknownTheory { key: key.clone(), line, col })?;
        self.load_theory(spec);
        let mut items = Vec::new();
        loop {
            let item = match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) if kw == "param" => {
                    self.bump();
                    if self.is_kw("obj") {
                        self.bump();
                        let (n, _) = self.fresh_global()?;
                        self.expect(Tok::Colon)?;
                        let ty = self.ty()?;
                        self.expect(Tok::Eq)?;
                        let id = ObjId(self.hex()?);
                        self.globals.insert(n.clone(), Global::Ref(id));
                        Item::Param { name: n, target: ParamTarget::Obj { id, ty } }
                    } else if self.is_kw("known") {
                        self.bump();
                        let (n, _) = self.fresh_global()?;
                        self.expect(Tok::Eq)?;
                        let id = PropId(self.hex()?);
                        self.knowns.insert(n.clone(), id);
                        Item::Param { name: n, target: ParamTarget::Prop { id } }
                    } else {
                        return self.fail("`obj` or `known`");
                    }
                }
                Tok::Ident(kw) if kw == "def" => {
                    self.bump();
                    let (n, _) = self.fresh_global()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.ty()?;
                    self.expect(Tok::Define)?;
                    let body = self.term()?;
                    self.globals.insert(n.clone(), Global::Ref(ObjId(raw_term_hash(&body))));
                    Item::Def { name: n, ty, body }
                }
                Tok::Ident(kw) if kw == "thm" => {
                    self.bump();
                    let (n, _) = self.fresh_global()?;
                    self.expect(Tok::Colon)?;
                    let stmt = self.term()?;
                    self.expect_kw("proof")?;
                    let proof = self.proof()?;
                    self.knowns.insert(n.clone(), PropId(raw_term_hash(&stmt)));
                    Item::Thm { name: n, stmt, proof }
                }
                Tok::Ident(kw) if kw == "conj" => {
                    self.bump();
                    let (n, _) = self.fresh_global()?;
                    let tag = match self.peek().clone() {
                        Tok::Str(s) => {
                            self.bump();
                            s
                        }
                        _ => DEFAULT_TAG.to_string(),
                    };
                    self.expect(Tok::Colon)?;
                    let stmt = self.term()?;
                    Item::Conj { name: n, stmt, tag }
                }
                _ => return self.fail("`param`, `def`, `thm`, `conj` or end of input"),
            };
            items.push(item);
        }
        Ok(Document { theory, items })
    }
}

/// Parses a theory file. Notations are expanded and not retained.
pub fn parse_theory(src: &str) -> Result<TheorySpec, ParseError> {
    let mut p = Parser::new(src)?;
    Ok(p.theory()?.0)
}

/// Parses a document against the theories in `lib`.
pub fn parse_doc(src: &str, lib: &Library) -> Result<Document, ParseError> {
    Parser::new(src)?.document(lib)
}

/// Parses a standalone term in the scope of a theory (and optionally the
/// names introduced by a document).
pub fn parse_term_in(src: &str, spec: &TheorySpec, doc: Option<&Document>) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    p.load_theory(spec);
    if let Some(d) = doc {
        p.load_items(d);
    }
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.fail("end of input");
    }
    Ok(t)
}

impl Parser {
    fn load_items(&mut self, d: &Document) {
        for item in &d.items {
            match item {
                Item::Param { name, target: ParamTarget::Obj { id, .. } } => {
                    self.globals.insert(name.clone(), Global::Ref(*id));
                }
                Item::Param { name, target: ParamTarget::Prop { id } } => {
                    self.knowns.insert(name.clone(), *id);
                }
                Item::Def { name, body, .. } => {
                    self.globals.insert(name.clone(), Global::Ref(ObjId(raw_term_hash(body))));
                }
                Item::Thm { name, stmt, .. } => {
                    self.knowns.insert(name.clone(), PropId(raw_term_hash(stmt)));
                }
                Item::Conj { .. } => {}
            }
        }
    }
}

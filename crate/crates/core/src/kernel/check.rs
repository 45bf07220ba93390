//! Type checking, beta-eta(-delta) normalization and proof checking.

use crate::hash::ObjId;

use super::syntax::{Proof, Signature, Term, Ty};
use super::KernelError;

pub(crate) fn check_ty(sig: &Signature, ty: &Ty) -> Result<(), KernelError> {
    match ty {
        Ty::Prop => Ok(()),
        Ty::Base(i) if *i < sig.base_count => Ok(()),
        Ty::Base(i) => Err(KernelError::BadBaseType(*i)),
        Ty::Func(a, b) => {
            check_ty(sig, a)?;
            check_ty(sig, b)
        }
    }
}

fn type_of(sig: &Signature, ctx: &mut Vec<Ty>, t: &Term) -> Result<Ty, KernelError> {
    match t {
        Term::Db(i) => {
            let i = *i as usize;
            if i < ctx.len() {
                Ok(ctx[ctx.len() - 1 - i].clone())
            } else {
                Err(KernelError::UnboundVariable(i as u32))
            }
        }
        Term::Prim(i) => sig.prims.get(*i as usize).cloned().ok_or(KernelError::UnknownPrim(*i)),
        Term::Ref(id) => sig.defs.get(id).map(|d| d.ty.clone()).ok_or(KernelError::UnknownRef(*id)),
        Term::Ap(f, a) => match type_of(sig, ctx, f)? {
            Ty::Func(dom, cod) => {
                let found = type_of(sig, ctx, a)?;
                if found == *dom {
                    Ok(*cod)
                } else {
                    Err(KernelError::TypeMismatch { expected: *dom, found })
                }
            }
            other => Err(KernelError::NotAFunction(other)),
        },
        Term::La(ty, body) => {
            check_ty(sig, ty)?;
            ctx.push(ty.clone());
            let r = type_of(sig, ctx, body);
            ctx.pop();
            Ok(Ty::func(ty.clone(), r?))
        }
        Term::Imp(a, b) => {
            expect_prop(sig, ctx, a)?;
            expect_prop(sig, ctx, b)?;
            Ok(Ty::Prop)
        }
        Term::All(ty, body) => {
            check_ty(sig, ty)?;
            ctx.push(ty.clone());
            let r = expect_prop(sig, ctx, body);
            ctx.pop();
            r.map(|_| Ty::Prop)
        }
    }
}

fn expect_prop(sig: &Signature, ctx: &mut Vec<Ty>, t: &Term) -> Result<(), KernelError> {
    match type_of(sig, ctx, t)? {
        Ty::Prop => Ok(()),
        found => Err(KernelError::TypeMismatch { expected: Ty::Prop, found }),
    }
}

/// The unique type of `t` in context `ctx` (last element is `Db(0)`).
pub fn typecheck(sig: &Signature, ctx: &[Ty], t: &Term) -> Result<Ty, KernelError> {
    let mut ctx = ctx.to_vec();
    for ty in &ctx {
        check_ty(sig, ty)?;
    }
    type_of(sig, &mut ctx, t)
}

/// Beta-eta normal form without unfolding definitions. Only meaningful on
/// well-typed terms; normalization of ill-typed terms need not terminate.
pub fn beta_eta(t: &Term) -> Term {
    nf(t, &mut |_| None).expect("no unfolding requested")
}

fn nf(
    t: &Term,
    unfold: &mut dyn FnMut(&ObjId) -> Option<Result<Term, KernelError>>,
) -> Result<Term, KernelError> {
    Ok(match t {
        Term::Db(_) | Term::Prim(_) => t.clone(),
        Term::Ref(id) => match unfold(id) {
            None => t.clone(),
            Some(body) => nf(&body?, unfold)?,
        },
        Term::Ap(f, a) => {
            let f = nf(f, unfold)?;
            let a = nf(a, unfold)?;
            match f {
                Term::La(_, body) => nf(&body.instantiate(&a), unfold)?,
                f => Term::ap(f, a),
            }
        }
        Term::La(ty, body) => {
            let body = nf(body, unfold)?;
            match &body {
                Term::Ap(g, x) if **x == Term::Db(0) && !g.has_free(0) => g.shift(-1, 0),
                _ => Term::la(ty.clone(), body),
            }
        }
        Term::Imp(a, b) => Term::imp(nf(a, unfold)?, nf(b, unfold)?),
        Term::All(ty, body) => Term::all(ty.clone(), nf(body, unfold)?),
    })
}

/// Beta-eta normal form; with `unfold`, definitions are replaced by their
/// bodies first (delta).
pub fn normalize(sig: &Signature, t: &Term, unfold: bool) -> Result<Term, KernelError> {
    if !unfold {
        return Ok(beta_eta(t));
    }
    nf(t, &mut |id| {
        Some(sig.defs.get(id).map(|d| d.body.clone()).ok_or(KernelError::UnknownRef(*id)))
    })
}

pub fn conv(sig: &Signature, a: &Term, b: &Term) -> Result<bool, KernelError> {
    if a == b {
        return Ok(true);
    }
    Ok(normalize(sig, a, true)? == normalize(sig, b, true)?)
}

/// Leibniz equality at type `ty`: `all (p : ty -> prop) => p a -> p b`.
pub fn leibniz_eq(ty: &Ty, a: &Term, b: &Term) -> Term {
    Term::all(
        Ty::func(ty.clone(), Ty::Prop),
        Term::imp(
            Term::ap(Term::Db(0), a.shift(1, 0)),
            Term::ap(Term::Db(0), b.shift(1, 0)),
        ),
    )
}

/// The functional extensionality instance at `dom -> cod`:
/// `all f g. (all x. f x = g x) -> f = g`.
pub fn ext_prop(dom: &Ty, cod: &Ty) -> Term {
    let fty = Ty::func(dom.clone(), cod.clone());
    // under f, g, x: f = Db 2, g = Db 1, x = Db 0
    let pointwise = Term::all(
        dom.clone(),
        leibniz_eq(
            cod,
            &Term::ap(Term::Db(2), Term::Db(0)),
            &Term::ap(Term::Db(1), Term::Db(0)),
        ),
    );
    Term::all(
        fty.clone(),
        Term::all(
            fty.clone(),
            Term::imp(pointwise, leibniz_eq(&fty, &Term::Db(1), &Term::Db(0))),
        ),
    )
}

struct ProofCtx<'a> {
    sig: &'a Signature,
    ctx: Vec<Ty>,
    hyps: Vec<Term>,
}

impl ProofCtx<'_> {
    fn as_imp(&self, prop: Term) -> Result<(Term, Term), KernelError> {
        if let Term::Imp(a, b) = prop {
            return Ok((*a, *b));
        }
        match normalize(self.sig, &prop, true)? {
            Term::Imp(a, b) => Ok((*a, *b)),
            _ => Err(KernelError::NotAnImplication(prop)),
        }
    }

    fn as_all(&self, prop: Term) -> Result<(Ty, Term), KernelError> {
        if let Term::All(ty, b) = prop {
            return Ok((ty, *b));
        }
        match normalize(self.sig, &prop, true)? {
            Term::All(ty, b) => Ok((ty, *b)),
            _ => Err(KernelError::NotAForall(prop)),
        }
    }

    fn infer(&mut self, p: &Proof) -> Result<Term, KernelError> {
        match p {
            Proof::Hyp(i) => self.hyps.get(*i as usize).cloned().ok_or(KernelError::BadHyp(*i)),
            Proof::Known(id) => {
                let t = self.sig.known(id).ok_or(KernelError::UnknownKnown(*id))?;
                // stored statements are closed, so no shifting is needed
                Ok(beta_eta(t))
            }
            Proof::PrAp(p, q) => {
                let proved = self.infer(p)?;
                let (ante, cons) = self.as_imp(proved)?;
                let arg = self.infer(q)?;
                if !conv(self.sig, &ante, &arg)? {
                    return Err(KernelError::ConvFailure { expected: ante, found: arg });
                }
                Ok(cons)
            }
            Proof::TmAp(p, t) => {
                let proved = self.infer(p)?;
                let (ty, body) = self.as_all(proved)?;
                let found = type_of(self.sig, &mut self.ctx, t)
                    .map_err(|e| KernelError::IllTypedWitness(Box::new(e)))?;
                if found != ty {
                    return Err(KernelError::IllTypedWitness(Box::new(KernelError::TypeMismatch {
                        expected: ty,
                        found,
                    })));
                }
                Ok(beta_eta(&body.instantiate(t)))
            }
            Proof::PrLa(hyp, body) => {
                expect_prop(self.sig, &mut self.ctx, hyp)?;
                let hyp = beta_eta(hyp);
                self.hyps.push(hyp.clone());
                let r = self.infer(body);
                self.hyps.pop();
                Ok(Term::imp(hyp, r?))
            }
            Proof::TmLa(ty, body) => {
                check_ty(self.sig, ty)?;
                let saved = self.hyps.clone();
                self.hyps = saved.iter().map(|h| h.shift(1, 0)).collect();
                self.ctx.push(ty.clone());
                let r = self.infer(body);
                self.ctx.pop();
                self.hyps = saved;
                Ok(Term::all(ty.clone(), r?))
            }
            Proof::Ext(dom, cod) => {
                check_ty(self.sig, dom)?;
                check_ty(self.sig, cod)?;
                Ok(ext_prop(dom, cod))
            }
        }
    }
}

/// Checks `p` under closed hypotheses `hyps` and returns the proved
/// proposition in beta-eta normal form.
pub fn check_proof(sig: &Signature, hyps: &[Term], p: &Proof) -> Result<Term, KernelError> {
    let mut hs = Vec::with_capacity(hyps.len());
    for (i, h) in hyps.iter().enumerate() {
        expect_prop(sig, &mut Vec::new(), h).map_err(|_| KernelError::BadHyp(i as u32))?;
        hs.push(beta_eta(h));
    }
    let mut pc = ProofCtx { sig, ctx: Vec::new(), hyps: hs };
    pc.infer(p)
}

/// Checks that `p` proves `stmt` (up to conversion); returns the statement's
/// normal form.
pub fn check_theorem(sig: &Signature, stmt: &Term, p: &Proof) -> Result<Term, KernelError> {
    expect_prop(sig, &mut Vec::new(), stmt)?;
    let proved = check_proof(sig, &[], p)?;
    let stmt_nf = beta_eta(stmt);
    if !conv(sig, &stmt_nf, &proved)? {
        return Err(KernelError::ConvFailure { expected: stmt_nf, found: proved });
    }
    Ok(stmt_nf)
}

/// If `t` is (up to unfolding of head definitions) `Q -> false`, returns `Q`
/// without unfolding anything inside it.
pub fn as_negation(sig: &Signature, t: &Term) -> Option<Term> {
    let mut cur = beta_eta(t);
    for _ in 0..16 {
        if let Term::Imp(q, b) = &cur {
            return match conv(sig, b, &Term::falsity()) {
                Ok(true) => Some((**q).clone()),
                _ => None,
            };
        }
        let (head, args) = cur.spine();
        let Term::Ref(id) = head else { return None };
        let body = sig.defs.get(id)?.body.clone();
        let unfolded = Term::apps(body, args.into_iter().cloned());
        cur = beta_eta(&unfolded);
    }
    None
}

pub fn prop_check(sig: &Signature, t: &Term) -> Result<(), KernelError> {
    expect_prop(sig, &mut Vec::new(), t)
}

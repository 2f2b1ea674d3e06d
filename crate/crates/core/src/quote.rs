//! Type-directed readback and conversion checking.
//!
//! Readback is η-long at Π, Σ and path types. A stuck composition is read
//! back once per permutation of its directions and the least result (after
//! erasing binder names) is kept, so permuted presentations of the same
//! problem share a normal form. Tube branches are split along the maximal
//! conjuncts of their guards and each body is read back under the
//! restriction its conjunct imposes.

use std::rc::Rc;

use thiserror::Error;

use crate::cof::{self, Conjunct};
use crate::domain::{Clo, CompData, DimSubst, Entry, Neutral, Value};
use crate::eval::{do_app, do_fst, do_papp, do_snd};
use crate::syntax::{Branch, Cof, Comp, Dim, Name, Term};

pub const DEFAULT_K_MAX: usize = 4;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("stuck composition with {arity} directions exceeds the permutation bound {k_max}")]
pub struct PermutationBoundExceeded {
    pub arity: usize,
    pub k_max: usize,
}

type Res<T> = Result<T, PermutationBoundExceeded>;

#[derive(Clone, Copy, Debug)]
pub struct Quoter {
    pub k_max: usize,
}

impl Default for Quoter {
    fn default() -> Self {
        Quoter { k_max: DEFAULT_K_MAX }
    }
}

fn dim_ix(n: usize, d: Dim) -> Dim {
    match d {
        Dim::Var(l) => match n.checked_sub(l + 1) {
            Some(ix) => Dim::Var(ix),
            None => panic!("readback met interval level {l} outside a context of length {n}"),
        },
        c => c,
    }
}

fn cof_ix(n: usize, c: &Cof) -> Cof {
    c.map_dims(&mut |d| dim_ix(n, d))
}

/// The restriction imposed by a consistent conjunct.
pub fn conjunct_subst(c: &Conjunct) -> DimSubst {
    DimSubst::new(c.closure().bindings())
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for m in 0..used.len() {
            if !used[m] {
                used[m] = true;
                cur.push(m);
                go(cur, used, out);
                cur.pop();
                used[m] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

impl Quoter {
    pub fn new(k_max: usize) -> Quoter {
        Quoter { k_max }
    }

    /// Read back `v : ty` in a context of `n` variables.
    pub fn quote(&self, n: usize, ty: &Value, v: &Value) -> Res<Term> {
        match ty {
            Value::Pi(a, b) => {
                let x = Value::var((**a).clone(), n);
                let hint = match v {
                    Value::Lam(c) => c.hint(),
                    _ => b.hint(),
                };
                let body = self.quote(n + 1, &b.apply(&[Entry::Val(x.clone())]), &do_app(v, &x))?;
                Ok(Term::Lam(hint, Rc::new(body)))
            }
            Value::Sigma(a, b) => {
                let fst = do_fst(v);
                let qa = self.quote(n, a, &fst)?;
                let qb = self.quote(n, &b.apply(&[Entry::Val(fst)]), &do_snd(v))?;
                Ok(Term::Pair(Rc::new(qa), Rc::new(qb)))
            }
            Value::Path(line, _, _) => {
                let i = Dim::Var(n);
                let hint = match v {
                    Value::PLam(c) => c.hint(),
                    _ => line.hint(),
                };
                let body = self.quote(n + 1, &line.apply(&[Entry::Dim(i)]), &do_papp(v, i))?;
                Ok(Term::PLam(hint, Rc::new(body)))
            }
            Value::Universe(_) => self.quote_type(n, v),
            Value::Neutral(..) => match v {
                Value::Neutral(_, ne) => self.quote_neutral(n, ne),
                other => panic!("value of neutral type is not neutral: {other:?}"),
            },
            other => panic!("readback at a non-type {other:?}"),
        }
    }

    pub fn quote_type(&self, n: usize, v: &Value) -> Res<Term> {
        match v {
            Value::Pi(a, b) => {
                let qa = self.quote_type(n, a)?;
                let x = Value::var((**a).clone(), n);
                let qb = self.quote_type(n + 1, &b.apply(&[Entry::Val(x)]))?;
                Ok(Term::Pi(b.hint(), Rc::new(qa), Rc::new(qb)))
            }
            Value::Sigma(a, b) => {
                let qa = self.quote_type(n, a)?;
                let x = Value::var((**a).clone(), n);
                let qb = self.quote_type(n + 1, &b.apply(&[Entry::Val(x)]))?;
                Ok(Term::Sigma(b.hint(), Rc::new(qa), Rc::new(qb)))
            }
            Value::Path(line, a, b) => {
                let ql = self.quote_type(n + 1, &line.apply(&[Entry::Dim(Dim::Var(n))]))?;
                let qa = self.quote(n, &line.apply(&[Entry::Dim(Dim::Zero)]), a)?;
                let qb = self.quote(n, &line.apply(&[Entry::Dim(Dim::One)]), b)?;
                Ok(Term::Path(line.hint(), Rc::new(ql), Rc::new(qa), Rc::new(qb)))
            }
            Value::Universe(l) => Ok(Term::Universe(*l)),
            Value::Neutral(_, ne) => self.quote_neutral(n, ne),
            other => panic!("readback of a non-type {other:?} as a type"),
        }
    }

    pub fn quote_neutral(&self, n: usize, ne: &Neutral) -> Res<Term> {
        Ok(match ne {
            Neutral::Var(l) => match n.checked_sub(l + 1) {
                Some(ix) => Term::Var(ix),
                None => panic!("readback met level {l} outside a context of length {n}"),
            },
            Neutral::Global(g) => Term::Global(g.clone()),
            Neutral::App(f, a) => {
                let dom = match f {
                    Value::Neutral(ty, _) => match &**ty {
                        Value::Pi(a, _) => (**a).clone(),
                        other => panic!("applied neutral has type {other:?}"),
                    },
                    other => panic!("application spine on {other:?}"),
                };
                Term::App(Rc::new(self.quote_spine(n, f)?), Rc::new(self.quote(n, &dom, a)?))
            }
            Neutral::Fst(p) => Term::Fst(Rc::new(self.quote_spine(n, p)?)),
            Neutral::Snd(p) => Term::Snd(Rc::new(self.quote_spine(n, p)?)),
            Neutral::PApp(p, r) => Term::PApp(Rc::new(self.quote_spine(n, p)?), dim_ix(n, *r)),
            Neutral::Comp(data) => self.quote_comp(n, data)?,
        })
    }

    fn quote_spine(&self, n: usize, v: &Value) -> Res<Term> {
        match v {
            Value::Neutral(_, ne) => self.quote_neutral(n, ne),
            other => panic!("eliminator spine on a non-neutral {other:?}"),
        }
    }

    fn quote_comp(&self, n: usize, data: &CompData) -> Res<Term> {
        let k = data.arity();
        if k > self.k_max {
            return Err(PermutationBoundExceeded { arity: k, k_max: self.k_max });
        }
        let cap = self.quote(n, &data.line.apply_dims(&data.src), &data.cap)?;
        let pieces = split_tube(&data.tube);
        let dirs: Vec<Name> = (1..=k).map(|m| Name::from(format!("i{m}"))).collect();
        let vars: Vec<Dim> = (0..k).map(|m| Dim::Var(n + m)).collect();
        let mut best: Option<(Term, Term)> = None;
        for sigma in permutations(k) {
            let args: Vec<Dim> = sigma.iter().map(|&m| vars[m]).collect();
            let mut src = vec![Dim::Zero; k];
            let mut tgt = vec![Dim::Zero; k];
            for m in 0..k {
                src[sigma[m]] = dim_ix(n, data.src[m]);
                tgt[sigma[m]] = dim_ix(n, data.tgt[m]);
            }
            let line_v = data.line.apply_dims(&args);
            let line = self.quote_type(n + k, &line_v)?;
            let mut tube = Vec::with_capacity(pieces.len());
            for (c, u) in &pieces {
                let rho = conjunct_subst(c);
                let body = self.quote(n + k, &line_v.act(&rho), &u.apply_dims(&args).act(&rho))?;
                tube.push(Branch { guard: cof_ix(n, &c.to_cof()), binders: dirs.clone(), body: Rc::new(body) });
            }
            tube.sort_by_cached_key(|b| (b.guard.clone(), b.body.erase_names()));
            tube.dedup_by(|a, b| a.guard == b.guard && crate::syntax::alpha_eq(&a.body, &b.body));
            let t = Term::Comp(Rc::new(Comp {
                dirs: dirs.clone(),
                line: Rc::new(line),
                src,
                tgt,
                tube,
                cap: Rc::new(cap.clone()),
            }));
            let key = t.erase_names();
            if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                best = Some((key, t));
            }
        }
        Ok(best.expect("at least one permutation").1)
    }

    /// Definitional equality of `a, b : ty` under interval hypotheses.
    pub fn convert(&self, n: usize, hyps: &[Cof], ty: &Value, a: &Value, b: &Value) -> Res<bool> {
        for c in cof::canonical_dnf(&Cof::all(hyps.iter().cloned())) {
            let rho = conjunct_subst(&c);
            let ty = ty.act(&rho);
            let qa = self.quote(n, &ty, &a.act(&rho))?;
            let qb = self.quote(n, &ty, &b.act(&rho))?;
            if !crate::syntax::alpha_eq(&qa, &qb) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn convert_type(&self, n: usize, hyps: &[Cof], a: &Value, b: &Value) -> Res<bool> {
        for c in cof::canonical_dnf(&Cof::all(hyps.iter().cloned())) {
            let rho = conjunct_subst(&c);
            let qa = self.quote_type(n, &a.act(&rho))?;
            let qb = self.quote_type(n, &b.act(&rho))?;
            if !crate::syntax::alpha_eq(&qa, &qb) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Split every guard into its maximal conjuncts and drop pieces strictly
/// covered by another piece.
fn split_tube(tube: &[(Cof, Clo)]) -> Vec<(Conjunct, Clo)> {
    let pieces: Vec<(Conjunct, Clo)> =
        tube.iter().flat_map(|(g, u)| cof::canonical_dnf(g).into_iter().map(move |c| (c, u.clone()))).collect();
    pieces.iter().filter(|(c, _)| !pieces.iter().any(|(d, _)| c.entails(d) && !d.entails(c))).cloned().collect()
}

// Random well-typed terms over a small signature, for property tests of
// evaluation, readback and conversion.
//
// Terms are generated as a small tree that knows how to rename interval
// names, printed to surface syntax and parsed, then checked against their
// intended type. Binder names are always fresh, so renaming never captures.

#![allow(dead_code)]

use eqctt::check::{check, check_source, Ctx};
use eqctt::domain::{DimSubst, Value};
use eqctt::parse::parse_term_in;
use eqctt::quote::Quoter;
use eqctt::syntax::{alpha_eq, Cof, Dim, Subst, SubstEntry, Term};
use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub const SIGNATURE: &str = "
postulate A : U0
postulate a : A
postulate b : A
postulate f : A -> A
postulate g : A -> A -> A
postulate p : Path A a b
postulate q : Path A b a
";

pub const GLOBALS: &[&str] = &["A", "a", "b", "f", "g", "p", "q"];

/// The generation context: interval variables `i`, `j` and `x : A`.
pub const SCOPE: &[(&str, bool)] = &[("i", true), ("j", true), ("x", false)];

#[derive(Clone, Debug)]
pub enum G {
    Var(String),
    /// `p @ r` or `q @ r`.
    Path(&'static str, String),
    F(Box<G>),
    G2(Box<G>, Box<G>),
    /// `let h : A -> A = \y. body in h arg`
    Beta(String, Box<G>, Box<G>),
    Fst(Box<G>, Box<G>),
    Snd(Box<G>, Box<G>),
    /// Composition in the constant line `A`.
    Comp {
        dirs: Vec<String>,
        guards: Vec<String>,
        body: Box<G>,
        src: Vec<String>,
        tgt: Vec<String>,
    },
    /// Composition in `A -> A`, applied to an argument.
    CompPi {
        dirs: Vec<String>,
        guards: Vec<String>,
        var: String,
        body: Box<G>,
        src: Vec<String>,
        tgt: Vec<String>,
        arg: Box<G>,
    },
    /// First projection of a composition in `A * A`.
    CompSigma {
        dirs: Vec<String>,
        guards: Vec<String>,
        body: (Box<G>, Box<G>),
        src: Vec<String>,
        tgt: Vec<String>,
    },
}

fn ren(s: &str, from: &str, to: &str) -> String {
    if s == from {
        to.to_string()
    } else {
        s.to_string()
    }
}

fn ren_guard(g: &str, from: &str, to: &str) -> String {
    g.split(' ').map(|w| ren(w, from, to)).collect::<Vec<_>>().join(" ")
}

impl G {
    pub fn rename(&self, from: &str, to: &str) -> G {
        let r = |g: &G| Box::new(g.rename(from, to));
        let rv = |v: &[String]| v.iter().map(|s| ren(s, from, to)).collect::<Vec<_>>();
        let rg = |v: &[String]| v.iter().map(|s| ren_guard(s, from, to)).collect::<Vec<_>>();
        match self {
            G::Var(v) => G::Var(v.clone()),
            G::Path(n, d) => G::Path(n, ren(d, from, to)),
            G::F(a) => G::F(r(a)),
            G::G2(a, b) => G::G2(r(a), r(b)),
            G::Beta(y, body, arg) => G::Beta(y.clone(), r(body), r(arg)),
            G::Fst(a, b) => G::Fst(r(a), r(b)),
            G::Snd(a, b) => G::Snd(r(a), r(b)),
            G::Comp { dirs, guards, body, src, tgt } => {
                G::Comp { dirs: dirs.clone(), guards: rg(guards), body: r(body), src: rv(src), tgt: rv(tgt) }
            }
            G::CompPi { dirs, guards, var, body, src, tgt, arg } => G::CompPi {
                dirs: dirs.clone(),
                guards: rg(guards),
                var: var.clone(),
                body: r(body),
                src: rv(src),
                tgt: rv(tgt),
                arg: r(arg),
            },
            G::CompSigma { dirs, guards, body, src, tgt } => G::CompSigma {
                dirs: dirs.clone(),
                guards: rg(guards),
                body: (r(&body.0), r(&body.1)),
                src: rv(src),
                tgt: rv(tgt),
            },
        }
    }

    fn at(&self, dirs: &[String], point: &[String]) -> G {
        dirs.iter().zip(point).fold(self.clone(), |g, (d, r)| g.rename(d, r))
    }

    pub fn print(&self) -> String {
        let tuple = |v: &[String]| format!("({})", v.join(", "));
        let tube = |guards: &[String], dirs: &[String], body: &str| {
            guards.iter().map(|g| format!("{g} -> {}. {body}", dirs.join(" "))).collect::<Vec<_>>().join(" | ")
        };
        match self {
            G::Var(v) => v.clone(),
            G::Path(n, d) => format!("({n} @ {d})"),
            G::F(a) => format!("(f {})", a.print()),
            G::G2(a, b) => format!("(g {} {})", a.print(), b.print()),
            G::Beta(y, body, arg) => format!("(let h : A -> A = \\{y}. {} in h {})", body.print(), arg.print()),
            G::Fst(a, b) => format!("((let pr : (z : A) * A = ({}, {}) in pr).1)", a.print(), b.print()),
            G::Snd(a, b) => format!("((let pr : (z : A) * A = ({}, {}) in pr).2)", a.print(), b.print()),
            G::Comp { dirs, guards, body, src, tgt } => format!(
                "(comp^{} ({}. A) [{}] {} : {} ~> {})",
                dirs.len(),
                dirs.join(" "),
                tube(guards, dirs, &body.print()),
                body.at(dirs, src).print(),
                tuple(src),
                tuple(tgt)
            ),
            G::CompPi { dirs, guards, var, body, src, tgt, arg } => format!(
                "((comp^{} ({}. A -> A) [{}] (\\{var}. {}) : {} ~> {}) {})",
                dirs.len(),
                dirs.join(" "),
                tube(guards, dirs, &format!("\\{var}. {}", body.print())),
                body.at(dirs, src).print(),
                tuple(src),
                tuple(tgt),
                arg.print()
            ),
            G::CompSigma { dirs, guards, body, src, tgt } => format!(
                "((comp^{} ({}. (z : A) * A) [{}] ({}, {}) : {} ~> {}).1)",
                dirs.len(),
                dirs.join(" "),
                tube(guards, dirs, &format!("({}, {})", body.0.print(), body.1.print())),
                body.0.at(dirs, src).print(),
                body.1.at(dirs, src).print(),
                tuple(src),
                tuple(tgt)
            ),
        }
    }
}

pub struct Gen {
    rng: TestRng,
    fresh: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        Gen { rng: TestRng::from_seed(RngAlgorithm::ChaCha, &bytes), fresh: 0 }
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.rng.next_u32() as usize) % n
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.below(xs.len())].clone()
    }

    fn fresh(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    /// A dimension: a constant or one of the interval names in scope.
    pub fn dim(&mut self, dims: &[String]) -> String {
        let mut opts = vec!["0".to_string(), "1".to_string()];
        opts.extend(dims.iter().cloned());
        self.pick(&opts)
    }

    /// A random cofibration over the given interval names.
    pub fn guard(&mut self, dims: &[String]) -> String {
        if dims.is_empty() {
            return "0 = 0".into();
        }
        let atom = |g: &mut Gen| {
            let r = g.pick(dims);
            let s = g.dim(dims);
            format!("{r} = {s}")
        };
        match self.below(4) {
            0 => format!("{} /\\ {}", atom(self), atom(self)),
            1 => format!("{} \\/ {}", atom(self), atom(self)),
            _ => atom(self),
        }
    }

    fn comp_shape(&mut self, dims: &[String]) -> (Vec<String>, Vec<String>, Vec<String>, Vec<String>) {
        let k = 1 + self.below(3);
        let dirs: Vec<String> = (0..k).map(|_| self.fresh("k")).collect();
        let n_guards = self.below(3);
        let guards = (0..n_guards).map(|_| self.guard(dims)).collect();
        let src = (0..k).map(|_| self.dim(dims)).collect();
        let tgt = (0..k).map(|_| self.dim(dims)).collect();
        (dirs, guards, src, tgt)
    }

    /// A term of type `A`.
    pub fn term(&mut self, depth: usize, vars: &[String], dims: &[String]) -> G {
        let leaf = self.below(if depth == 0 { 1 } else { 10 }) == 0;
        if leaf {
            return match self.below(3) {
                0 => G::Var(self.pick(vars)),
                1 => G::Var(self.pick(&["a".to_string(), "b".to_string()])),
                _ => {
                    let d = self.dim(dims);
                    G::Path(if self.below(2) == 0 { "p" } else { "q" }, d)
                }
            };
        }
        let d = depth - 1;
        match self.below(9) {
            0 | 1 => G::F(Box::new(self.term(d, vars, dims))),
            2 => G::G2(Box::new(self.term(d, vars, dims)), Box::new(self.term(d, vars, dims))),
            3 => {
                let y = self.fresh("y");
                let mut inner = vars.to_vec();
                inner.push(y.clone());
                G::Beta(y, Box::new(self.term(d, &inner, dims)), Box::new(self.term(d, vars, dims)))
            }
            4 => {
                let (a, b) = (self.term(d, vars, dims), self.term(d, vars, dims));
                if self.below(2) == 0 {
                    G::Fst(Box::new(a), Box::new(b))
                } else {
                    G::Snd(Box::new(a), Box::new(b))
                }
            }
            5 | 6 => {
                let (dirs, guards, src, tgt) = self.comp_shape(dims);
                let mut inner = dims.to_vec();
                inner.extend(dirs.iter().cloned());
                let body = self.term(d, vars, &inner);
                G::Comp { dirs, guards, body: Box::new(body), src, tgt }
            }
            7 => {
                let (dirs, guards, src, tgt) = self.comp_shape(dims);
                let mut inner = dims.to_vec();
                inner.extend(dirs.iter().cloned());
                let var = self.fresh("y");
                let mut ivars = vars.to_vec();
                ivars.push(var.clone());
                let body = self.term(d, &ivars, &inner);
                let arg = self.term(d, vars, dims);
                G::CompPi { dirs, guards, var, body: Box::new(body), src, tgt, arg: Box::new(arg) }
            }
            _ => {
                let (dirs, guards, src, tgt) = self.comp_shape(dims);
                let mut inner = dims.to_vec();
                inner.extend(dirs.iter().cloned());
                let b0 = self.term(d, vars, &inner);
                let b1 = self.term(d, vars, &inner);
                G::CompSigma { dirs, guards, body: (Box::new(b0), Box::new(b1)), src, tgt }
            }
        }
    }
}

/// The fixed context `i, j : 𝕀, x : A` over the signature.
pub struct World {
    /// `i, j` only, for extending with a definition of `x`.
    pub ctx_ij: Ctx,
    pub ctx: Ctx,
    pub ty_a: Value,
}

impl World {
    pub fn new() -> World {
        let checked = check_source("signature", SIGNATURE, Quoter::default());
        assert!(checked.report.all_ok());
        let base = Ctx::new(checked.globals.clone(), Quoter::default());
        let ty_a = base.eval(&Term::Global("A".into()));
        let ctx_ij = base.bind_dim("i").0.bind_dim("j").0;
        let ctx = ctx_ij.bind("x", ty_a.clone()).0;
        World { ctx_ij, ctx, ty_a }
    }

    /// Parse and check a generated term at type `A`.
    pub fn elaborate(&self, src: &str) -> Result<Term, String> {
        let t = parse_term_in(src, GLOBALS, SCOPE).map_err(|e| format!("parse: {e}"))?;
        check(&self.ctx, &t, &self.ty_a).map_err(|e| format!("check: {e:?}"))?;
        Ok(t)
    }

    pub fn nf(&self, t: &Term) -> Term {
        self.ctx.quoter.quote(self.ctx.len(), &self.ty_a, &self.ctx.eval(t)).expect("within K_max")
    }

    pub fn conv(&self, ctx: &Ctx, a: &Term, b: &Term) -> bool {
        ctx.conv(&self.ty_a, &ctx.eval(a), &ctx.eval(b)).expect("within K_max")
    }
}

impl Default for World {
    fn default() -> World {
        World::new()
    }
}

/// Levels of `i` and `j`, and the de Bruijn index of `j`.
pub const LVL_I: usize = 0;
pub const LVL_J: usize = 1;
pub const IX_J: usize = 1;

/// Substitute `r` for `i` in a term over the context (keeping `i` bound).
pub fn subst_i(t: &Term, r_ix: Dim) -> Term {
    let s = Subst::new(vec![SubstEntry::Var(0), SubstEntry::Var(1), SubstEntry::Dim(r_ix)], 3);
    t.subst(&s)
}

/// The same substitution on values, over levels.
pub fn act_i(v: &Value, r_lvl: Dim) -> Value {
    v.act(&DimSubst::new([(LVL_I, r_lvl)]))
}

/// Substitute `u` for `x`.
pub fn subst_x(t: &Term, u: &Term) -> Term {
    let s = Subst::new(vec![SubstEntry::Term(u.clone()), SubstEntry::Var(1), SubstEntry::Var(2)], 3);
    t.subst(&s)
}

#[derive(Default, Debug)]
pub struct NbeTally {
    pub terms: usize,
    pub rejected: usize,
    pub idempotence: usize,
    pub reflexivity: usize,
    pub symmetry: usize,
    pub transitivity: usize,
    pub dim_subst: usize,
    pub term_subst: usize,
    /// Normal forms that still contain a composition.
    pub stuck_comps: usize,
    /// Distinct pairs that convert.
    pub converting_pairs: usize,
    pub violations: Vec<String>,
}

/// Generate terms until `target` of them check, testing every property on
/// each.
pub fn run_nbe_properties(seed: u64, target: usize) -> NbeTally {
    let w = World::new();
    let mut gen = Gen::new(seed);
    let mut tally = NbeTally::default();
    let vars = vec!["x".to_string()];
    let dims = vec!["i".to_string(), "j".to_string()];
    let mut previous: Option<Term> = None;
    let mut attempts = 0;
    while tally.terms < target && attempts < target * 4 {
        attempts += 1;
        let depth = 1 + gen.below(4);
        let src = gen.term(depth, &vars, &dims).print();
        let t = match w.elaborate(&src) {
            Ok(t) => t,
            Err(e) => {
                tally.rejected += 1;
                if tally.violations.len() < 5 {
                    tally.violations.push(format!("generator produced an ill-typed term {src}: {e}"));
                }
                continue;
            }
        };
        tally.terms += 1;
        let mut bad = |what: &str| {
            if tally.violations.len() < 20 {
                tally.violations.push(format!("{what}: {src}"));
            }
        };

        // Idempotence of normalization.
        let n1 = w.nf(&t);
        let n2 = w.nf(&n1);
        if !alpha_eq(&n1, &n2) {
            bad("normalization is not idempotent");
        }
        tally.idempotence += 1;
        let mut has_comp = false;
        n1.for_each_comp(&mut |_| has_comp = true);
        tally.stuck_comps += has_comp as usize;

        // Reflexivity, also against the normal form and under a restriction.
        let guard_src = gen.guard(&dims);
        let phi = parse_term_in(&format!("comp^1 (k. A) [{guard_src} -> k. x] x : (0) ~> (0)"), GLOBALS, SCOPE)
            .ok()
            .and_then(|c| match c {
                Term::Comp(c) => c.tube.first().map(|b| b.guard.clone()),
                _ => None,
            })
            .unwrap_or(Cof::Top);
        let restricted = w.ctx.restrict(w.ctx.env.cof(&phi));
        if !w.conv(&w.ctx, &t, &t) || !w.conv(&w.ctx, &t, &n1) || !w.conv(&restricted, &t, &t) {
            bad("conversion is not reflexive");
        }
        let wrapped = Term::app(Term::Global("f".into()), t.clone());
        if w.conv(&w.ctx, &t, &wrapped) {
            bad("a term converts with its image under a postulated function");
        }
        tally.reflexivity += 1;

        // Symmetry against the previous term, with and without restriction.
        if let Some(u) = &previous {
            for ctx in [&w.ctx, &restricted] {
                let forward = w.conv(ctx, &t, u);
                if forward != w.conv(ctx, u, &t) {
                    bad("conversion is not symmetric");
                }
                tally.converting_pairs += forward as usize;
            }
            tally.symmetry += 1;
        }

        // Transitivity through a β-expanded copy.
        let expanded = format!("(let h : A -> A = \\unused. {src} in h a)");
        if let Ok(e) = w.elaborate(&expanded) {
            let (te, en) = (w.conv(&w.ctx, &t, &e), w.conv(&w.ctx, &e, &n1));
            if !(te && en && w.conv(&w.ctx, &t, &n1)) {
                bad("conversion is not transitive through a redex");
            }
            if let Some(u) = &previous {
                if w.conv(&w.ctx, u, &t) && te && !w.conv(&w.ctx, u, &e) {
                    bad("conversion is not transitive");
                }
            }
            tally.transitivity += 1;
        }

        // Interval substitution commutes with evaluation.
        for (r_ix, r_lvl) in [(Dim::Zero, Dim::Zero), (Dim::One, Dim::One), (Dim::Var(IX_J), Dim::Var(LVL_J))] {
            let lhs = w.ctx.eval(&subst_i(&t, r_ix));
            let rhs = act_i(&w.ctx.eval(&t), r_lvl);
            let q = |v: &Value| w.ctx.quoter.quote(w.ctx.len(), &w.ty_a, v).expect("within K_max");
            if !alpha_eq(&q(&lhs), &q(&rhs)) {
                bad("interval substitution does not commute with evaluation");
            }
            tally.dim_subst += 1;
        }

        // Term substitution commutes with evaluation.
        let u_src = gen.term(2, &vars, &dims).print();
        if let Ok(u) = w.elaborate(&u_src) {
            let lhs = w.ctx.eval(&subst_x(&t, &u));
            let defined = w.ctx_ij.define("x", w.ty_a.clone(), w.ctx.eval(&u));
            let rhs = defined.eval(&t);
            let q = |v: &Value| w.ctx.quoter.quote(w.ctx.len(), &w.ty_a, v).expect("within K_max");
            if !alpha_eq(&q(&lhs), &q(&rhs)) {
                bad("term substitution does not commute with evaluation");
            }
            tally.term_subst += 1;
        }
        previous = Some(t);
    }
    tally
}

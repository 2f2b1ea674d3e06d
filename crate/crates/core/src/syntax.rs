//! Core syntax.
//!
//! Variables are de Bruijn indices drawn from a single index space shared by
//! term binders and interval binders. Binder names are kept only as printing
//! hints, so alpha-equivalence is structural equality after erasing them.
//! Top-level definitions and postulates are referred to by name through
//! [`Term::Global`].

use std::fmt;
use std::rc::Rc;

pub type Name = Rc<str>;

/// A de Bruijn index (0 is the innermost binder).
pub type Ix = usize;

/// Interval expressions. No connections, reversals, meets or joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Zero,
    One,
    Var(usize),
}

impl Dim {
    pub fn is_const(self) -> bool {
        !matches!(self, Dim::Var(_))
    }
}

/// Cofibrations: a lattice of equations between interval expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cof {
    Top,
    Bot,
    Eq(Dim, Dim),
    And(Box<Cof>, Box<Cof>),
    Or(Box<Cof>, Box<Cof>),
}

impl Cof {
    pub fn eq(r: Dim, s: Dim) -> Cof {
        Cof::Eq(r, s)
    }

    pub fn and(a: Cof, b: Cof) -> Cof {
        Cof::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Cof, b: Cof) -> Cof {
        Cof::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of a list; `Top` when empty.
    pub fn all(cofs: impl IntoIterator<Item = Cof>) -> Cof {
        let mut it = cofs.into_iter();
        match it.next() {
            None => Cof::Top,
            Some(first) => it.fold(first, Cof::and),
        }
    }

    /// Disjunction of a list; `Bot` when empty.
    pub fn any(cofs: impl IntoIterator<Item = Cof>) -> Cof {
        let mut it = cofs.into_iter();
        match it.next() {
            None => Cof::Bot,
            Some(first) => it.fold(first, Cof::or),
        }
    }

    pub fn map_dims(&self, f: &mut impl FnMut(Dim) -> Dim) -> Cof {
        match self {
            Cof::Top => Cof::Top,
            Cof::Bot => Cof::Bot,
            Cof::Eq(r, s) => Cof::Eq(f(*r), f(*s)),
            Cof::And(a, b) => Cof::and(a.map_dims(f), b.map_dims(f)),
            Cof::Or(a, b) => Cof::or(a.map_dims(f), b.map_dims(f)),
        }
    }

    pub fn for_each_dim(&self, f: &mut impl FnMut(Dim)) {
        match self {
            Cof::Top | Cof::Bot => {}
            Cof::Eq(r, s) => {
                f(*r);
                f(*s);
            }
            Cof::And(a, b) | Cof::Or(a, b) => {
                a.for_each_dim(f);
                b.for_each_dim(f);
            }
        }
    }
}

/// One branch `phi -> i1 .. ik. u` of a composition tube.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub guard: Cof,
    /// Names for the `k` directions, as written in this branch.
    pub binders: Vec<Name>,
    /// Scoped under the `k` directions (last direction is index 0).
    pub body: Rc<Term>,
}

/// The `k`-ary composition former.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comp {
    pub dirs: Vec<Name>,
    /// Scoped under the `k` directions.
    pub line: Rc<Term>,
    pub src: Vec<Dim>,
    pub tgt: Vec<Dim>,
    pub tube: Vec<Branch>,
    pub cap: Rc<Term>,
}

impl Comp {
    pub fn arity(&self) -> usize {
        self.dirs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Ix),
    Global(Name),
    Pi(Name, Rc<Term>, Rc<Term>),
    Lam(Name, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    /// `Path (i. A) a b`: line under one interval binder, then endpoints.
    Path(Name, Rc<Term>, Rc<Term>, Rc<Term>),
    PLam(Name, Rc<Term>),
    PApp(Rc<Term>, Dim),
    Universe(u32),
    Comp(Rc<Comp>),
    /// `let x : A = t in u`
    Let(Name, Rc<Term>, Rc<Term>, Rc<Term>),
}

/// Source position (1-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeclKind {
    Def { ty: Rc<Term>, body: Rc<Term> },
    Postulate { ty: Rc<Term> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub kind: DeclKind,
    pub pos: Pos,
}

impl Decl {
    pub fn ty(&self) -> &Rc<Term> {
        match &self.kind {
            DeclKind::Def { ty, .. } | DeclKind::Postulate { ty } => ty,
        }
    }
}

/// Image of one variable under a [`Subst`].
#[derive(Clone, Debug, PartialEq)]
pub enum SubstEntry {
    /// Renaming to another variable; valid for either kind.
    Var(Ix),
    Term(Term),
    Dim(Dim),
}

/// A simultaneous substitution `(e_0, .., e_{n-1}; ↑shift)`: index `i < n`
/// maps to `e_i`, index `i >= n` maps to variable `i - n + shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subst {
    entries: Vec<SubstEntry>,
    shift: usize,
}

impl Subst {
    pub fn id() -> Subst {
        Subst { entries: Vec::new(), shift: 0 }
    }

    pub fn shift(k: usize) -> Subst {
        Subst { entries: Vec::new(), shift: k }
    }

    pub fn new(entries: Vec<SubstEntry>, shift: usize) -> Subst {
        Subst { entries, shift }
    }

    /// Replace index 0 by `t` and lower the other indices.
    pub fn single_term(t: Term) -> Subst {
        Subst { entries: vec![SubstEntry::Term(t)], shift: 0 }
    }

    /// Replace index 0 by `r` and lower the other indices.
    pub fn single_dim(r: Dim) -> Subst {
        Subst { entries: vec![SubstEntry::Dim(r)], shift: 0 }
    }

    /// Instantiate the `k` innermost interval binders with `dims`, where
    /// `dims[0]` is the outermost of them.
    pub fn dims(dims: &[Dim]) -> Subst {
        Subst { entries: dims.iter().rev().map(|d| SubstEntry::Dim(*d)).collect(), shift: 0 }
    }

    pub fn lookup(&self, i: Ix) -> SubstEntry {
        match self.entries.get(i) {
            Some(e) => e.clone(),
            None => SubstEntry::Var(i - self.entries.len() + self.shift),
        }
    }

    /// The substitution to use under one more binder.
    pub fn lift(&self) -> Subst {
        let up = Subst::shift(1);
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.push(SubstEntry::Var(0));
        entries.extend(self.entries.iter().map(|e| e.apply(&up)));
        Subst { entries, shift: self.shift + 1 }
    }

    pub fn lift_n(&self, n: usize) -> Subst {
        (0..n).fold(self.clone(), |s, _| s.lift())
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Subst) -> Subst {
        let mut entries: Vec<SubstEntry> = other.entries.iter().map(|e| e.apply(self)).collect();
        let skip = other.shift.min(self.entries.len());
        entries.extend(self.entries[skip..].iter().cloned());
        Subst { entries, shift: self.shift + other.shift.saturating_sub(self.entries.len()) }
    }
}

impl SubstEntry {
    fn apply(&self, s: &Subst) -> SubstEntry {
        match self {
            SubstEntry::Var(j) => s.lookup(*j),
            SubstEntry::Term(t) => SubstEntry::Term(t.subst(s)),
            SubstEntry::Dim(d) => SubstEntry::Dim(d.subst(s)),
        }
    }
}

impl Dim {
    pub fn subst(self, s: &Subst) -> Dim {
        match self {
            Dim::Var(i) => match s.lookup(i) {
                SubstEntry::Var(j) => Dim::Var(j),
                SubstEntry::Dim(d) => d,
                SubstEntry::Term(_) => panic!("term substituted for interval variable {i}"),
            },
            d => d,
        }
    }
}

impl Cof {
    pub fn subst(&self, s: &Subst) -> Cof {
        self.map_dims(&mut |d| d.subst(s))
    }
}

fn rc(t: Term) -> Rc<Term> {
    Rc::new(t)
}

impl Term {
    pub fn var(i: Ix) -> Term {
        Term::Var(i)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(rc(f), rc(a))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.into(), rc(body))
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(x.into(), rc(dom), rc(cod))
    }

    pub fn sigma(x: &str, dom: Term, cod: Term) -> Term {
        Term::Sigma(x.into(), rc(dom), rc(cod))
    }

    pub fn plam(i: &str, body: Term) -> Term {
        Term::PLam(i.into(), rc(body))
    }

    pub fn papp(p: Term, r: Dim) -> Term {
        Term::PApp(rc(p), r)
    }

    pub fn path(i: &str, line: Term, a: Term, b: Term) -> Term {
        Term::Path(i.into(), rc(line), rc(a), rc(b))
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn subst(&self, s: &Subst) -> Term {
        match self {
            Term::Var(i) => match s.lookup(*i) {
                SubstEntry::Var(j) => Term::Var(j),
                SubstEntry::Term(t) => t,
                SubstEntry::Dim(_) => panic!("interval substituted for term variable {i}"),
            },
            Term::Global(n) => Term::Global(n.clone()),
            Term::Pi(x, a, b) => Term::Pi(x.clone(), rc(a.subst(s)), rc(b.subst(&s.lift()))),
            Term::Sigma(x, a, b) => Term::Sigma(x.clone(), rc(a.subst(s)), rc(b.subst(&s.lift()))),
            Term::Lam(x, b) => Term::Lam(x.clone(), rc(b.subst(&s.lift()))),
            Term::App(f, a) => Term::App(rc(f.subst(s)), rc(a.subst(s))),
            Term::Pair(a, b) => Term::Pair(rc(a.subst(s)), rc(b.subst(s))),
            Term::Fst(t) => Term::Fst(rc(t.subst(s))),
            Term::Snd(t) => Term::Snd(rc(t.subst(s))),
            Term::Path(i, line, a, b) => {
                Term::Path(i.clone(), rc(line.subst(&s.lift())), rc(a.subst(s)), rc(b.subst(s)))
            }
            Term::PLam(i, b) => Term::PLam(i.clone(), rc(b.subst(&s.lift()))),
            Term::PApp(p, r) => Term::PApp(rc(p.subst(s)), r.subst(s)),
            Term::Universe(l) => Term::Universe(*l),
            Term::Comp(c) => {
                let under = s.lift_n(c.arity());
                Term::Comp(Rc::new(Comp {
                    dirs: c.dirs.clone(),
                    line: rc(c.line.subst(&under)),
                    src: c.src.iter().map(|r| r.subst(s)).collect(),
                    tgt: c.tgt.iter().map(|r| r.subst(s)).collect(),
                    tube: c
                        .tube
                        .iter()
                        .map(|b| Branch {
                            guard: b.guard.subst(s),
                            binders: b.binders.clone(),
                            body: rc(b.body.subst(&under)),
                        })
                        .collect(),
                    cap: rc(c.cap.subst(s)),
                }))
            }
            Term::Let(x, ty, t, body) => {
                Term::Let(x.clone(), rc(ty.subst(s)), rc(t.subst(s)), rc(body.subst(&s.lift())))
            }
        }
    }

    /// Shift every free index up by `k`.
    pub fn shifted(&self, k: usize) -> Term {
        if k == 0 {
            self.clone()
        } else {
            self.subst(&Subst::shift(k))
        }
    }

    /// Replace every binder name by `_`.
    pub fn erase_names(&self) -> Term {
        let e = || -> Name { "_".into() };
        let go = |t: &Rc<Term>| rc(t.erase_names());
        match self {
            Term::Var(_) | Term::Global(_) | Term::Universe(_) => self.clone(),
            Term::Pi(_, a, b) => Term::Pi(e(), go(a), go(b)),
            Term::Sigma(_, a, b) => Term::Sigma(e(), go(a), go(b)),
            Term::Lam(_, b) => Term::Lam(e(), go(b)),
            Term::App(f, a) => Term::App(go(f), go(a)),
            Term::Pair(a, b) => Term::Pair(go(a), go(b)),
            Term::Fst(t) => Term::Fst(go(t)),
            Term::Snd(t) => Term::Snd(go(t)),
            Term::Path(_, l, a, b) => Term::Path(e(), go(l), go(a), go(b)),
            Term::PLam(_, b) => Term::PLam(e(), go(b)),
            Term::PApp(p, r) => Term::PApp(go(p), *r),
            Term::Comp(c) => Term::Comp(Rc::new(Comp {
                dirs: c.dirs.iter().map(|_| e()).collect(),
                line: go(&c.line),
                src: c.src.clone(),
                tgt: c.tgt.clone(),
                tube: c
                    .tube
                    .iter()
                    .map(|b| Branch {
                        guard: b.guard.clone(),
                        binders: b.binders.iter().map(|_| e()).collect(),
                        body: go(&b.body),
                    })
                    .collect(),
                cap: go(&c.cap),
            })),
            Term::Let(_, ty, t, b) => Term::Let(e(), go(ty), go(t), go(b)),
        }
    }

    /// True if every free index is below `depth`.
    pub fn is_scoped(&self, depth: usize) -> bool {
        let dim_ok = |r: &Dim, d: usize| match r {
            Dim::Var(i) => *i < d,
            _ => true,
        };
        match self {
            Term::Var(i) => *i < depth,
            Term::Global(_) | Term::Universe(_) => true,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => a.is_scoped(depth) && b.is_scoped(depth + 1),
            Term::Lam(_, b) | Term::PLam(_, b) => b.is_scoped(depth + 1),
            Term::App(f, a) | Term::Pair(f, a) => f.is_scoped(depth) && a.is_scoped(depth),
            Term::Fst(t) | Term::Snd(t) => t.is_scoped(depth),
            Term::Path(_, l, a, b) => l.is_scoped(depth + 1) && a.is_scoped(depth) && b.is_scoped(depth),
            Term::PApp(p, r) => p.is_scoped(depth) && dim_ok(r, depth),
            Term::Comp(c) => {
                let k = c.arity();
                let mut guards_ok = true;
                for b in &c.tube {
                    b.guard.for_each_dim(&mut |r| guards_ok &= dim_ok(&r, depth));
                }
                guards_ok
                    && c.line.is_scoped(depth + k)
                    && c.src.iter().chain(&c.tgt).all(|r| dim_ok(r, depth))
                    && c.tube.iter().all(|b| b.body.is_scoped(depth + k))
                    && c.cap.is_scoped(depth)
            }
            Term::Let(_, ty, t, b) => ty.is_scoped(depth) && t.is_scoped(depth) && b.is_scoped(depth + 1),
        }
    }

    /// Does the variable with index `ix` occur free?
    pub fn occurs(&self, ix: Ix) -> bool {
        let dim = |r: &Dim, ix: Ix| *r == Dim::Var(ix);
        match self {
            Term::Var(i) => *i == ix,
            Term::Global(_) | Term::Universe(_) => false,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => a.occurs(ix) || b.occurs(ix + 1),
            Term::Lam(_, b) | Term::PLam(_, b) => b.occurs(ix + 1),
            Term::App(f, a) | Term::Pair(f, a) => f.occurs(ix) || a.occurs(ix),
            Term::Fst(t) | Term::Snd(t) => t.occurs(ix),
            Term::Path(_, l, a, b) => l.occurs(ix + 1) || a.occurs(ix) || b.occurs(ix),
            Term::PApp(p, r) => p.occurs(ix) || dim(r, ix),
            Term::Comp(c) => {
                let k = c.arity();
                let mut in_guard = false;
                for b in &c.tube {
                    b.guard.for_each_dim(&mut |r| in_guard |= dim(&r, ix));
                }
                in_guard
                    || c.line.occurs(ix + k)
                    || c.src.iter().chain(&c.tgt).any(|r| dim(r, ix))
                    || c.tube.iter().any(|b| b.body.occurs(ix + k))
                    || c.cap.occurs(ix)
            }
            Term::Let(_, ty, t, b) => ty.occurs(ix) || t.occurs(ix) || b.occurs(ix + 1),
        }
    }

    pub fn for_each_global(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Term::Global(n) => f(n),
            Term::Var(_) | Term::Universe(_) => {}
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) | Term::App(a, b) | Term::Pair(a, b) => {
                a.for_each_global(f);
                b.for_each_global(f);
            }
            Term::Lam(_, b) | Term::PLam(_, b) | Term::Fst(b) | Term::Snd(b) | Term::PApp(b, _) => b.for_each_global(f),
            Term::Path(_, l, a, b) | Term::Let(_, l, a, b) => {
                l.for_each_global(f);
                a.for_each_global(f);
                b.for_each_global(f);
            }
            Term::Comp(c) => {
                c.line.for_each_global(f);
                for b in &c.tube {
                    b.body.for_each_global(f);
                }
                c.cap.for_each_global(f);
            }
        }
    }

    /// Visit every `Comp` node.
    pub fn for_each_comp(&self, f: &mut impl FnMut(&Comp)) {
        match self {
            Term::Var(_) | Term::Global(_) | Term::Universe(_) => {}
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) | Term::App(a, b) | Term::Pair(a, b) => {
                a.for_each_comp(f);
                b.for_each_comp(f);
            }
            Term::Lam(_, b) | Term::PLam(_, b) | Term::Fst(b) | Term::Snd(b) | Term::PApp(b, _) => b.for_each_comp(f),
            Term::Path(_, l, a, b) => {
                l.for_each_comp(f);
                a.for_each_comp(f);
                b.for_each_comp(f);
            }
            Term::Comp(c) => {
                f(c);
                c.line.for_each_comp(f);
                for b in &c.tube {
                    b.body.for_each_comp(f);
                }
                c.cap.for_each_comp(f);
            }
            Term::Let(_, ty, t, b) => {
                ty.for_each_comp(f);
                t.for_each_comp(f);
                b.for_each_comp(f);
            }
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a.erase_names() == b.erase_names()
}

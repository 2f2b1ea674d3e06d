//! Semantic values for normalization by evaluation.
//!
//! Free variables of values are de Bruijn *levels*; interval expressions in
//! values use `Dim::Var(level)`. Neutral values carry their type so that
//! path applications at `0`/`1` can reduce to the endpoints, and so that
//! readback of a spine knows the types of its arguments.
//!
//! Closures are defunctionalized: besides ordinary term closures there are
//! closures built by the composition rules (fillers, projections of type
//! lines, ...). Every closure supports the interval action [`Value::act`],
//! which re-evaluates neutral spines so that stuck compositions fire once a
//! substitution makes one of their guards true.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::syntax::{Cof, Dim, Name, Term};

pub type Lvl = usize;

#[derive(Clone, Debug)]
pub enum Entry {
    Val(Value),
    Dim(Dim),
}

/// One definition or postulate: its type and its value.
#[derive(Clone, Debug)]
pub struct GlobalEntry {
    pub ty: Value,
    pub value: Value,
}

pub type Globals = BTreeMap<Name, GlobalEntry>;

/// Evaluation environment: one entry per bound variable (outermost first)
/// plus the global signature.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub entries: Rc<Vec<Entry>>,
    pub globals: Rc<Globals>,
}

impl Env {
    pub fn new(globals: Rc<Globals>) -> Env {
        Env { entries: Rc::new(Vec::new()), globals }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&self, e: Entry) -> Env {
        let mut v = (*self.entries).clone();
        v.push(e);
        Env { entries: Rc::new(v), globals: self.globals.clone() }
    }

    pub fn extend(&self, es: impl IntoIterator<Item = Entry>) -> Env {
        let mut v = (*self.entries).clone();
        v.extend(es);
        Env { entries: Rc::new(v), globals: self.globals.clone() }
    }

    pub fn lookup(&self, ix: usize) -> &Entry {
        let n = self.entries.len();
        match n.checked_sub(ix + 1) {
            Some(l) => &self.entries[l],
            None => panic!("scope violation: index {ix} in environment of length {n}"),
        }
    }

    pub fn val(&self, ix: usize) -> Value {
        match self.lookup(ix) {
            Entry::Val(v) => v.clone(),
            Entry::Dim(_) => panic!("scope violation: index {ix} is an interval variable"),
        }
    }

    pub fn dim(&self, r: Dim) -> Dim {
        match r {
            Dim::Var(ix) => match self.lookup(ix) {
                Entry::Dim(d) => *d,
                Entry::Val(_) => panic!("scope violation: index {ix} is a term variable"),
            },
            d => d,
        }
    }

    pub fn cof(&self, c: &Cof) -> Cof {
        c.map_dims(&mut |d| self.dim(d))
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Pi(Rc<Value>, Clo),
    Sigma(Rc<Value>, Clo),
    /// Type line (one interval argument) and endpoints.
    Path(Clo, Rc<Value>, Rc<Value>),
    Universe(u32),
    Lam(Clo),
    Pair(Rc<Value>, Rc<Value>),
    PLam(Clo),
    /// A stuck value together with its type.
    Neutral(Rc<Value>, Rc<Neutral>),
}

#[derive(Clone, Debug)]
pub enum Neutral {
    Var(Lvl),
    Global(Name),
    /// Function (itself a neutral value) applied to an argument.
    App(Value, Value),
    Fst(Value),
    Snd(Value),
    PApp(Value, Dim),
    Comp(CompData),
}

/// A composition problem in semantic form. `src.len()` is the number of
/// directions `k`.
#[derive(Clone, Debug)]
pub struct CompData {
    /// Type line; takes `k` interval arguments.
    pub line: Clo,
    pub src: Vec<Dim>,
    pub tgt: Vec<Dim>,
    /// Guards with bodies taking `k` interval arguments.
    pub tube: Vec<(Cof, Clo)>,
    pub cap: Value,
}

impl CompData {
    pub fn arity(&self) -> usize {
        self.src.len()
    }
}

/// A composition problem whose targets are left open: applying it to `k`
/// interval arguments yields the filler at those coordinates.
#[derive(Clone, Debug)]
pub struct FillData {
    pub line: Clo,
    pub src: Vec<Dim>,
    pub tube: Vec<(Cof, Clo)>,
    pub cap: Value,
}

#[derive(Clone, Debug)]
pub enum Clo {
    Term {
        env: Env,
        body: Rc<Term>,
        hint: Name,
    },
    Const(Rc<Value>),
    Fill(Rc<FillData>),
    /// `ī ↦ A(ī)` where `line(ī) = Π(a : A(ī)) B(ī, a)`.
    PiDom(Rc<Clo>),
    /// `ī ↦ B(ī, arg(ī))`.
    PiCod(Rc<Clo>, Rc<Clo>),
    SigmaFst(Rc<Clo>),
    SigmaSnd(Rc<Clo>, Rc<Clo>),
    /// `ī ↦ L(ī)(j)` where `line(ī) = Path (j. L(ī)(j)) a b`.
    PathLine(Rc<Clo>, Dim),
    PathLeft(Rc<Clo>),
    PathRight(Rc<Clo>),
    /// `ī ↦ fun(ī) arg(ī)`.
    AppAt(Rc<Clo>, Rc<Clo>),
    FstOf(Rc<Clo>),
    SndOf(Rc<Clo>),
    PAppOf(Rc<Clo>, Dim),
    /// Body of the function produced by composition at a Π-type.
    CompPi(Rc<CompData>),
    /// Body of the path produced by composition at a path type.
    CompPath(Rc<CompData>),
}

impl Clo {
    pub fn term(env: Env, body: Rc<Term>, hint: Name) -> Clo {
        Clo::Term { env, body, hint }
    }

    pub fn hint(&self) -> Name {
        match self {
            Clo::Term { hint, .. } => hint.clone(),
            _ => "x".into(),
        }
    }
}

impl Value {
    pub fn var(ty: Value, lvl: Lvl) -> Value {
        Value::Neutral(Rc::new(ty), Rc::new(Neutral::Var(lvl)))
    }

    pub fn neutral(ty: Value, n: Neutral) -> Value {
        Value::Neutral(Rc::new(ty), Rc::new(n))
    }
}

/// A substitution of interval levels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimSubst(pub BTreeMap<Lvl, Dim>);

impl DimSubst {
    pub fn new(pairs: impl IntoIterator<Item = (Lvl, Dim)>) -> DimSubst {
        DimSubst(pairs.into_iter().collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self, r: Dim) -> Dim {
        match r {
            Dim::Var(l) => self.0.get(&l).copied().unwrap_or(r),
            d => d,
        }
    }

    pub fn dims(&self, rs: &[Dim]) -> Vec<Dim> {
        rs.iter().map(|r| self.dim(*r)).collect()
    }

    pub fn cof(&self, c: &Cof) -> Cof {
        c.map_dims(&mut |d| self.dim(d))
    }
}

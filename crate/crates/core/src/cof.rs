//! Decision procedures for the cofibration lattice.
//!
//! A formula is put in disjunctive normal form; each conjunct is a set of
//! interval equations whose congruence closure is computed with a small
//! union-find. A conjunct is inconsistent exactly when the closure merges
//! `0` and `1`; such conjuncts are dropped, so the empty DNF is `⊥`.
//!
//! A consistent conjunct entails a disjunction iff it entails one of the
//! disjuncts: a conjunct carves out a representable sub-cube, and a map out
//! of a representable into a union of subobjects factors through one of
//! them.

use crate::syntax::{Cof, Dim};

/// Union-find over interval expressions. Class representatives are the
/// least element in `Dim` order, so `0`/`1` win over variables and smaller
/// variables win over larger ones.
#[derive(Clone, Debug, Default)]
pub struct Congruence {
    /// Parent slot per slot: `0` is `0`, `1` is `1`, `v + 2` is variable `v`.
    /// Slots past the end are their own parent.
    parent: Vec<usize>,
}

fn slot(d: Dim) -> usize {
    match d {
        Dim::Zero => 0,
        Dim::One => 1,
        Dim::Var(v) => v + 2,
    }
}

fn unslot(i: usize) -> Dim {
    match i {
        0 => Dim::Zero,
        1 => Dim::One,
        v => Dim::Var(v - 2),
    }
}

impl Congruence {
    pub fn new() -> Congruence {
        Congruence::default()
    }

    fn find_slot(&self, mut i: usize) -> usize {
        while let Some(&p) = self.parent.get(i) {
            if p == i {
                break;
            }
            i = p;
        }
        i
    }

    pub fn find(&self, d: Dim) -> Dim {
        unslot(self.find_slot(slot(d)))
    }

    pub fn union(&mut self, a: Dim, b: Dim) {
        let (ra, rb) = (self.find_slot(slot(a)), self.find_slot(slot(b)));
        if ra == rb {
            return;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        if self.parent.len() <= drop {
            let n = self.parent.len();
            self.parent.extend(n..=drop);
        }
        self.parent[drop] = keep;
    }

    pub fn same(&self, a: Dim, b: Dim) -> bool {
        self.find_slot(slot(a)) == self.find_slot(slot(b))
    }

    pub fn is_consistent(&self) -> bool {
        !self.same(Dim::Zero, Dim::One)
    }

    /// Every variable that is not its own representative, with its
    /// representative.
    pub fn bindings(&self) -> Vec<(usize, Dim)> {
        (2..self.parent.len())
            .filter_map(|i| {
                let r = self.find_slot(i);
                (r != i).then(|| (i - 2, unslot(r)))
            })
            .collect()
    }
}

/// A conjunction of interval equations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conjunct {
    pub atoms: Vec<(Dim, Dim)>,
}

impl Conjunct {
    pub fn closure(&self) -> Congruence {
        let mut cc = Congruence::new();
        for &(r, s) in &self.atoms {
            cc.union(r, s);
        }
        cc
    }

    pub fn is_consistent(&self) -> bool {
        self.closure().is_consistent()
    }

    pub fn entails(&self, other: &Conjunct) -> bool {
        let cc = self.closure();
        !cc.is_consistent() || other.atoms.iter().all(|&(r, s)| cc.same(r, s))
    }

    /// The canonical presentation: `v = rep(v)` for each non-representative
    /// variable, sorted. Two conjuncts are equivalent iff their canonical
    /// forms coincide.
    pub fn canonical(&self) -> Conjunct {
        let mut atoms: Vec<(Dim, Dim)> = self.closure().bindings().into_iter().map(|(v, r)| (Dim::Var(v), r)).collect();
        atoms.sort();
        Conjunct { atoms }
    }

    pub fn to_cof(&self) -> Cof {
        Cof::all(self.atoms.iter().map(|&(r, s)| Cof::Eq(r, s)))
    }
}

/// Disjunctive normal form with inconsistent conjuncts removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CofDnf {
    pub conjuncts: Vec<Conjunct>,
}

impl CofDnf {
    pub fn is_bot(&self) -> bool {
        self.conjuncts.is_empty()
    }

    /// Holds unconditionally (some conjunct is trivial after closure).
    pub fn is_top(&self) -> bool {
        self.conjuncts.iter().any(|c| c.canonical().atoms.is_empty())
    }

    pub fn to_cof(&self) -> Cof {
        Cof::any(self.conjuncts.iter().map(Conjunct::to_cof))
    }
}

fn dnf_raw(c: &Cof) -> Vec<Conjunct> {
    match c {
        Cof::Top => vec![Conjunct { atoms: vec![] }],
        Cof::Bot => vec![],
        Cof::Eq(r, s) => vec![Conjunct { atoms: vec![(*r, *s)] }],
        Cof::Or(a, b) => {
            let mut v = dnf_raw(a);
            v.extend(dnf_raw(b));
            v
        }
        Cof::And(a, b) => {
            let (da, db) = (dnf_raw(a), dnf_raw(b));
            let mut out = Vec::with_capacity(da.len() * db.len());
            for x in &da {
                for y in &db {
                    let mut atoms = x.atoms.clone();
                    atoms.extend(y.atoms.iter().copied());
                    let c = Conjunct { atoms };
                    if c.is_consistent() {
                        out.push(c);
                    }
                }
            }
            out
        }
    }
}

pub fn to_dnf(c: &Cof) -> CofDnf {
    CofDnf { conjuncts: dnf_raw(c).into_iter().filter(Conjunct::is_consistent).collect() }
}

/// Truth of `c` at the generic point of a consistent conjunct. Since a
/// conjunct entails a disjunction iff it entails a disjunct, this agrees
/// with entailment of the DNF of `c`.
fn holds_at(cc: &Congruence, c: &Cof) -> bool {
    match c {
        Cof::Top => true,
        Cof::Bot => false,
        Cof::Eq(r, s) => cc.same(*r, *s),
        Cof::And(a, b) => holds_at(cc, a) && holds_at(cc, b),
        Cof::Or(a, b) => holds_at(cc, a) || holds_at(cc, b),
    }
}

/// `hyps ⊨ goal`.
pub fn entails(hyps: &[Cof], goal: &Cof) -> bool {
    let mut conjuncts = vec![Conjunct { atoms: Vec::new() }];
    for h in hyps {
        let dh = dnf_raw(h);
        let mut next = Vec::with_capacity(conjuncts.len() * dh.len());
        for x in &conjuncts {
            for y in &dh {
                let mut atoms = x.atoms.clone();
                atoms.extend(y.atoms.iter().copied());
                next.push(Conjunct { atoms });
            }
        }
        conjuncts = next;
    }
    conjuncts.iter().all(|c| {
        let cc = c.closure();
        !cc.is_consistent() || holds_at(&cc, goal)
    })
}

pub fn satisfiable(c: &Cof) -> bool {
    !to_dnf(c).is_bot()
}

/// `⊨ c`, i.e. entailed by no hypotheses.
pub fn valid(c: &Cof) -> bool {
    entails(&[], c)
}

pub fn equivalent(a: &Cof, b: &Cof) -> bool {
    entails(std::slice::from_ref(a), b) && entails(std::slice::from_ref(b), a)
}

/// Atom-wise substitution of interval variables.
pub fn subst_cof(c: &Cof, f: &mut impl FnMut(usize) -> Dim) -> Cof {
    c.map_dims(&mut |d| match d {
        Dim::Var(v) => f(v),
        d => d,
    })
}

/// A unique normal form up to logical equivalence: the maximal conjuncts,
/// each in canonical presentation, sorted.
pub fn canonical_dnf(c: &Cof) -> Vec<Conjunct> {
    let mut cs: Vec<Conjunct> = to_dnf(c).conjuncts.iter().map(Conjunct::canonical).collect();
    cs.sort();
    cs.dedup();
    let keep: Vec<bool> = (0..cs.len())
        .map(|i| !(0..cs.len()).any(|j| j != i && cs[i].entails(&cs[j]) && !cs[j].entails(&cs[i])))
        .collect();
    cs.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

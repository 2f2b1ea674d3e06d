//! Exhaustive cofibration instances and a semantic oracle.
//!
//! The oracle evaluates formulas at every "generic point": a partition of
//! `{0, 1, v0, .., v3}` keeping `0` and `1` apart. An atom `r = s` holds at
//! a partition when `r` and `s` share a block. Entailment is inclusion of
//! the sets of partitions where the formulas hold.

use eqctt::cof;
use eqctt::{Cof, Dim};

pub const VARS: usize = 4;
const POINTS: usize = VARS + 2;

fn point(i: usize) -> Dim {
    match i {
        0 => Dim::Zero,
        1 => Dim::One,
        v => Dim::Var(v - 2),
    }
}

fn slot(d: Dim) -> usize {
    match d {
        Dim::Zero => 0,
        Dim::One => 1,
        Dim::Var(v) => v + 2,
    }
}

/// Restricted growth strings of length 6 with `0` and `1` in different
/// blocks.
pub fn partitions() -> Vec<[u8; POINTS]> {
    fn go(prefix: &mut Vec<u8>, max: u8, out: &mut Vec<[u8; POINTS]>) {
        if prefix.len() == POINTS {
            if prefix[0] != prefix[1] {
                out.push(prefix.as_slice().try_into().unwrap());
            }
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            go(prefix, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut p = vec![0];
    go(&mut p, 0, &mut out);
    out
}

pub fn holds(c: &Cof, p: &[u8; POINTS]) -> bool {
    match c {
        Cof::Top => true,
        Cof::Bot => false,
        Cof::Eq(r, s) => p[slot(*r)] == p[slot(*s)],
        Cof::And(a, b) => holds(a, p) && holds(b, p),
        Cof::Or(a, b) => holds(a, p) || holds(b, p),
    }
}

/// Truth table of `c` over all partitions, as a bitset.
pub fn truth(c: &Cof, parts: &[[u8; POINTS]]) -> Vec<u64> {
    let mut bits = vec![0u64; parts.len().div_ceil(64)];
    for (i, p) in parts.iter().enumerate() {
        if holds(c, p) {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

pub fn oracle_entails(h: &[u64], g: &[u64]) -> bool {
    h.iter().zip(g).all(|(a, b)| a & !b == 0)
}

/// Atoms `r = s` with `r ≤ s` in the order `0, 1, v0, .., v3`.
pub fn atoms() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..POINTS {
        for s in r..POINTS {
            out.push((r, s));
        }
    }
    out
}

/// A formula with at most three atoms, up to commutativity and
/// associativity of `∧` and `∨`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shape {
    Top,
    Bot,
    Atom(usize),
    And2(usize, usize),
    Or2(usize, usize),
    And3(usize, usize, usize),
    Or3(usize, usize, usize),
    /// `(a ∧ b) ∨ c`
    AndOr(usize, usize, usize),
    /// `(a ∨ b) ∧ c`
    OrAnd(usize, usize, usize),
}

pub fn shapes(n_atoms: usize) -> Vec<Shape> {
    let mut out = vec![Shape::Top, Shape::Bot];
    for a in 0..n_atoms {
        out.push(Shape::Atom(a));
        for b in a..n_atoms {
            out.push(Shape::And2(a, b));
            out.push(Shape::Or2(a, b));
            for c in b..n_atoms {
                out.push(Shape::And3(a, b, c));
                out.push(Shape::Or3(a, b, c));
            }
            for c in 0..n_atoms {
                out.push(Shape::AndOr(a, b, c));
                out.push(Shape::OrAnd(a, b, c));
            }
        }
    }
    out
}

pub fn to_cof(s: &Shape, atoms: &[(usize, usize)]) -> Cof {
    let at = |i: usize| Cof::eq(point(atoms[i].0), point(atoms[i].1));
    match *s {
        Shape::Top => Cof::Top,
        Shape::Bot => Cof::Bot,
        Shape::Atom(a) => at(a),
        Shape::And2(a, b) => Cof::and(at(a), at(b)),
        Shape::Or2(a, b) => Cof::or(at(a), at(b)),
        Shape::And3(a, b, c) => Cof::and(Cof::and(at(a), at(b)), at(c)),
        Shape::Or3(a, b, c) => Cof::or(Cof::or(at(a), at(b)), at(c)),
        Shape::AndOr(a, b, c) => Cof::or(Cof::and(at(a), at(b)), at(c)),
        Shape::OrAnd(a, b, c) => Cof::and(Cof::or(at(a), at(b)), at(c)),
    }
}

/// Hypotheses as a list: top-level conjunctions are split into entries.
pub fn to_hyps(s: &Shape, atoms: &[(usize, usize)]) -> Vec<Cof> {
    let at = |i: usize| Cof::eq(point(atoms[i].0), point(atoms[i].1));
    match *s {
        Shape::Top => vec![],
        Shape::And2(a, b) => vec![at(a), at(b)],
        Shape::And3(a, b, c) => vec![at(a), at(b), at(c)],
        _ => vec![to_cof(s, atoms)],
    }
}

fn rename_atom(a: (usize, usize), perm: &[usize], atoms: &[(usize, usize)]) -> usize {
    let m = |x: usize| if x < 2 { x } else { perm[x - 2] + 2 };
    let (r, s) = (m(a.0), m(a.1));
    let key = (r.min(s), r.max(s));
    atoms.iter().position(|&x| x == key).unwrap()
}

fn sort2(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn sort3(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut v = [a, b, c];
    v.sort();
    (v[0], v[1], v[2])
}

pub fn rename(s: &Shape, perm: &[usize], atoms: &[(usize, usize)]) -> Shape {
    let r = |i: usize| rename_atom(atoms[i], perm, atoms);
    match *s {
        Shape::Top => Shape::Top,
        Shape::Bot => Shape::Bot,
        Shape::Atom(a) => Shape::Atom(r(a)),
        Shape::And2(a, b) => {
            let (x, y) = sort2(r(a), r(b));
            Shape::And2(x, y)
        }
        Shape::Or2(a, b) => {
            let (x, y) = sort2(r(a), r(b));
            Shape::Or2(x, y)
        }
        Shape::And3(a, b, c) => {
            let (x, y, z) = sort3(r(a), r(b), r(c));
            Shape::And3(x, y, z)
        }
        Shape::Or3(a, b, c) => {
            let (x, y, z) = sort3(r(a), r(b), r(c));
            Shape::Or3(x, y, z)
        }
        Shape::AndOr(a, b, c) => {
            let (x, y) = sort2(r(a), r(b));
            Shape::AndOr(x, y, r(c))
        }
        Shape::OrAnd(a, b, c) => {
            let (x, y) = sort2(r(a), r(b));
            Shape::OrAnd(x, y, r(c))
        }
    }
}

pub fn var_permutations() -> Vec<Vec<usize>> {
    eqctt::quote::permutations(VARS)
}

pub struct Summary {
    pub instances: usize,
    pub disagreements: Vec<String>,
}

/// Compare the solver with the oracle on every pair (hypotheses, goal)
/// where the hypotheses range over shapes up to renaming of variables and
/// the goal over all shapes.
pub fn run_exhaustive() -> Summary {
    let atoms = atoms();
    let parts = partitions();
    let all = shapes(atoms.len());
    let perms = var_permutations();
    let hyps: Vec<&Shape> = all.iter().filter(|s| perms.iter().all(|p| rename(s, p, &atoms) >= **s)).collect();
    let goals: Vec<(Cof, Vec<u64>)> = all
        .iter()
        .map(|s| {
            let c = to_cof(s, &atoms);
            let t = truth(&c, &parts);
            (c, t)
        })
        .collect();
    let mut instances = 0;
    let mut disagreements = Vec::new();
    for h in hyps {
        let list = to_hyps(h, &atoms);
        let ht = truth(&Cof::all(list.iter().cloned()), &parts);
        for (g, gt) in &goals {
            instances += 1;
            if cof::entails(&list, g) != oracle_entails(&ht, gt) && disagreements.len() < 10 {
                disagreements.push(format!("{list:?} ⊨ {g:?}"));
            }
        }
    }
    Summary { instances, disagreements }
}

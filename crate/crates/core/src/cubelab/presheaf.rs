//! Truncated presheaves on a finite category with objects `0..=dmax`.
//!
//! Cells of level `d` are numbered `0..sizes[d]`; for each arrow `a : p → q`
//! of the base category, `act[a]` maps cells of level `q` to cells of level
//! `p` (restriction along `a`).

use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::sync::Arc;

use super::LabError;

/// Arrows of a base category whose hom-sets can be enumerated.
pub trait Arrow: Clone + Debug + Display + Eq + Hash + Ord + Send + Sync {
    fn dom(&self) -> usize;
    fn cod(&self) -> usize;
    /// `self ∘ f`.
    fn after(&self, f: &Self) -> Self;
    fn identity(n: usize) -> Self;
    fn hom(m: usize, n: usize) -> Vec<Self>;
    /// Split epimorphism that is not invertible.
    fn is_degeneracy(&self) -> bool;
}

/// The full subcategory on objects `0..=dmax`, with arrows numbered.
#[derive(Debug)]
pub struct FinCat<A: Arrow> {
    pub dmax: usize,
    pub arrows: Vec<A>,
    index: HashMap<A, usize>,
    /// Arrow ids by codomain.
    pub into: Vec<Vec<usize>>,
}

impl<A: Arrow> FinCat<A> {
    pub fn new(dmax: usize) -> Arc<FinCat<A>> {
        let mut arrows = Vec::new();
        for q in 0..=dmax {
            for p in 0..=dmax {
                arrows.extend(A::hom(p, q));
            }
        }
        let index = arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut into = vec![Vec::new(); dmax + 1];
        for (i, a) in arrows.iter().enumerate() {
            into[a.cod()].push(i);
        }
        Arc::new(FinCat { dmax, arrows, index, into })
    }

    pub fn id_of(&self, a: &A) -> usize {
        self.index[a]
    }

    pub fn get(&self, a: &A) -> Option<usize> {
        self.index.get(a).copied()
    }
}

#[derive(Clone, Debug)]
pub struct Presheaf<A: Arrow> {
    pub cat: Arc<FinCat<A>>,
    pub sizes: Vec<usize>,
    pub act: Vec<Vec<usize>>,
    pub labels: Vec<Vec<String>>,
}

impl<A: Arrow> Presheaf<A> {
    pub fn dmax(&self) -> usize {
        self.cat.dmax
    }

    /// Build from a restriction function on labelled cells.
    pub fn build(
        cat: Arc<FinCat<A>>,
        labels: Vec<Vec<String>>,
        mut restrict: impl FnMut(&A, usize) -> usize,
    ) -> Presheaf<A> {
        let sizes: Vec<usize> = labels.iter().map(Vec::len).collect();
        let act = cat.arrows.iter().map(|a| (0..sizes[a.cod()]).map(|x| restrict(a, x)).collect()).collect();
        Presheaf { cat, sizes, act, labels }
    }

    pub fn restrict(&self, a: &A, x: usize) -> usize {
        self.act[self.cat.id_of(a)][x]
    }

    /// The representable presheaf `Hom(-, n)`; cells are arrows into `n`.
    pub fn representable(cat: Arc<FinCat<A>>, n: usize) -> (Presheaf<A>, Vec<Vec<A>>) {
        let cells: Vec<Vec<A>> = (0..=cat.dmax).map(|d| A::hom(d, n)).collect();
        let lookup: Vec<HashMap<A, usize>> =
            cells.iter().map(|lv| lv.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect()).collect();
        let labels = cells.iter().map(|lv| lv.iter().map(|a| a.to_string()).collect()).collect();
        let p = Presheaf::build(cat, labels, |a, x| lookup[a.dom()][&cells[a.cod()][x].after(a)]);
        (p, cells)
    }

    pub fn terminal(cat: Arc<FinCat<A>>) -> Presheaf<A> {
        let labels = (0..=cat.dmax).map(|_| vec!["*".to_string()]).collect();
        Presheaf::build(cat, labels, |_, _| 0)
    }

    /// Check the identity and composition laws for every composable pair.
    pub fn check_functorial(&self) -> Result<(), LabError> {
        let cat = &self.cat;
        for d in 0..=cat.dmax {
            let id = cat.id_of(&A::identity(d));
            if (0..self.sizes[d]).any(|x| self.act[id][x] != x) {
                return Err(LabError::NotFunctorial(format!("identity at level {d} acts non-trivially")));
            }
        }
        for (gi, g) in cat.arrows.iter().enumerate() {
            for &fi in &cat.into[g.dom()] {
                let f = &cat.arrows[fi];
                let gf = cat.id_of(&g.after(f));
                for x in 0..self.sizes[g.cod()] {
                    if self.act[gf][x] != self.act[fi][self.act[gi][x]] {
                        return Err(LabError::NotFunctorial(format!(
                            "composition law fails for {g} ∘ {f} at cell {}",
                            self.labels[g.cod()][x]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Levelwise cartesian product; cell `(x, y)` is numbered
    /// `x * |Y_d| + y`.
    pub fn product(&self, other: &Presheaf<A>) -> Result<Presheaf<A>, LabError> {
        if self.dmax() != other.dmax() {
            return Err(LabError::TruncationMismatch(self.dmax(), other.dmax()));
        }
        let labels = (0..=self.dmax())
            .map(|d| {
                let mut lv = Vec::with_capacity(self.sizes[d] * other.sizes[d]);
                for x in &self.labels[d] {
                    for y in &other.labels[d] {
                        lv.push(format!("({x}, {y})"));
                    }
                }
                lv
            })
            .collect();
        let cat = self.cat.clone();
        let act = cat
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let (q, p) = (a.cod(), a.dom());
                (0..self.sizes[q] * other.sizes[q])
                    .map(|c| {
                        let (x, y) = (c / other.sizes[q], c % other.sizes[q]);
                        self.act[ai][x] * other.sizes[p] + other.act[ai][y]
                    })
                    .collect()
            })
            .collect();
        Ok(Presheaf { cat, sizes: (0..=self.dmax()).map(|d| self.sizes[d] * other.sizes[d]).collect(), act, labels })
    }

    /// Quotient by a group acting levelwise: `group[g][d]` permutes level
    /// `d`. Fails if the action does not commute with restriction.
    pub fn quotient(&self, group: &[Vec<Vec<usize>>]) -> Result<(Presheaf<A>, Vec<Vec<usize>>), LabError> {
        for g in group {
            for (ai, a) in self.cat.arrows.iter().enumerate() {
                for x in 0..self.sizes[a.cod()] {
                    if self.act[ai][g[a.cod()][x]] != g[a.dom()][self.act[ai][x]] {
                        return Err(LabError::NotEquivariant(format!("group element does not commute with {a}")));
                    }
                }
            }
        }
        let mut orbit_of = Vec::new();
        let mut labels = Vec::new();
        for d in 0..=self.dmax() {
            let mut of = vec![usize::MAX; self.sizes[d]];
            let mut lv = Vec::new();
            for x in 0..self.sizes[d] {
                if of[x] != usize::MAX {
                    continue;
                }
                let id = lv.len();
                let mut members: Vec<usize> = group.iter().map(|g| g[d][x]).collect();
                members.sort();
                members.dedup();
                for &y in &members {
                    of[y] = id;
                }
                lv.push(format!(
                    "[{}]",
                    members.iter().map(|&y| self.labels[d][y].as_str()).collect::<Vec<_>>().join(" ~ ")
                ));
            }
            orbit_of.push(of);
            labels.push(lv);
        }
        let reps: Vec<Vec<usize>> = orbit_of
            .iter()
            .map(|of| {
                let n = of.iter().copied().max().map_or(0, |m| m + 1);
                let mut r = vec![usize::MAX; n];
                for (x, &o) in of.iter().enumerate() {
                    if r[o] == usize::MAX {
                        r[o] = x;
                    }
                }
                r
            })
            .collect();
        for (ai, a) in self.cat.arrows.iter().enumerate() {
            for x in 0..self.sizes[a.cod()] {
                let via_rep = orbit_of[a.dom()][self.act[ai][reps[a.cod()][orbit_of[a.cod()][x]]]];
                if via_rep != orbit_of[a.dom()][self.act[ai][x]] {
                    return Err(LabError::NotEquivariant("induced action is not well defined".into()));
                }
            }
        }
        let q = Presheaf::build(self.cat.clone(), labels, |a, o| {
            let ai = self.cat.id_of(a);
            orbit_of[a.dom()][self.act[ai][reps[a.cod()][o]]]
        });
        Ok((q, orbit_of))
    }

    /// Cells of level `d` that are not restrictions along a degeneracy.
    pub fn nondegenerate(&self, d: usize) -> Vec<usize> {
        let mut degenerate = vec![false; self.sizes[d]];
        for (ai, a) in self.cat.arrows.iter().enumerate() {
            if a.dom() == d && a.is_degeneracy() {
                for y in 0..self.sizes[a.cod()] {
                    degenerate[self.act[ai][y]] = true;
                }
            }
        }
        (0..self.sizes[d]).filter(|&x| !degenerate[x]).collect()
    }

    /// Sub-presheaf on the cells marked `keep`; fails unless `keep` is
    /// closed under restriction. Returns the inclusion as well.
    pub fn subpresheaf(&self, keep: &[Vec<bool>]) -> Result<(Presheaf<A>, Vec<Vec<usize>>), LabError> {
        let incl: Vec<Vec<usize>> = keep.iter().map(|k| (0..k.len()).filter(|&x| k[x]).collect()).collect();
        let mut back: Vec<HashMap<usize, usize>> = Vec::new();
        for lv in &incl {
            back.push(lv.iter().enumerate().map(|(i, &x)| (x, i)).collect());
        }
        for (ai, a) in self.cat.arrows.iter().enumerate() {
            for &x in &incl[a.cod()] {
                if !keep[a.dom()][self.act[ai][x]] {
                    return Err(LabError::Invalid(format!("cell set is not closed under {a}")));
                }
            }
        }
        let labels =
            incl.iter().enumerate().map(|(d, lv)| lv.iter().map(|&x| self.labels[d][x].clone()).collect()).collect();
        let p = Presheaf::build(self.cat.clone(), labels, |a, i| {
            let ai = self.cat.id_of(a);
            back[a.dom()][&self.act[ai][incl[a.cod()][i]]]
        });
        Ok((p, incl))
    }
}

/// Levelwise bijections commuting with restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Found(Vec<Vec<usize>>),
    Refuted(String),
}

/// Iso-invariant description of a cell: for each arrow into its level, the
/// first-occurrence label of the restricted cell.
fn signatures<A: Arrow>(x: &Presheaf<A>) -> Vec<Vec<Vec<u32>>> {
    (0..=x.dmax())
        .map(|d| {
            (0..x.sizes[d])
                .map(|c| {
                    let mut seen: Vec<HashMap<usize, u32>> = vec![HashMap::new(); x.dmax() + 1];
                    x.cat.into[d]
                        .iter()
                        .map(|&ai| {
                            let p = x.cat.arrows[ai].dom();
                            let img = x.act[ai][c];
                            let n = seen[p].len() as u32;
                            *seen[p].entry(img).or_insert(n)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

struct IsoSearch<'a, A: Arrow> {
    x: &'a Presheaf<A>,
    y: &'a Presheaf<A>,
    sx: Vec<Vec<Vec<u32>>>,
    sy: Vec<Vec<Vec<u32>>>,
    fwd: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

const UNSET: usize = usize::MAX;

impl<A: Arrow> IsoSearch<'_, A> {
    /// Assign `x ↦ y` at level `d` and everything it forces.
    fn assign(&mut self, d: usize, x: usize, y: usize) -> bool {
        let mut queue = vec![(d, x, y)];
        while let Some((d, x, y)) = queue.pop() {
            match self.fwd[d][x] {
                UNSET => {}
                z if z == y => continue,
                _ => return false,
            }
            if self.used[d][y] || self.sx[d][x] != self.sy[d][y] {
                return false;
            }
            self.fwd[d][x] = y;
            self.used[d][y] = true;
            self.trail.push((d, x));
            for &ai in &self.x.cat.into[d] {
                let p = self.x.cat.arrows[ai].dom();
                queue.push((p, self.x.act[ai][x], self.y.act[ai][y]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (d, x) = self.trail.pop().unwrap();
            self.used[d][self.fwd[d][x]] = false;
            self.fwd[d][x] = UNSET;
        }
    }

    fn search(&mut self) -> Result<bool, LabError> {
        let next = (0..=self.x.dmax()).rev().find_map(|d| self.fwd[d].iter().position(|&v| v == UNSET).map(|x| (d, x)));
        let Some((d, x)) = next else { return Ok(true) };
        for y in 0..self.y.sizes[d] {
            if self.used[d][y] || self.sx[d][x] != self.sy[d][y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(LabError::BudgetExceeded { budget: self.budget });
            }
            let mark = self.trail.len();
            if self.assign(d, x, y) && self.search()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// Search for an isomorphism `X ≅ Y`, pruned by cell signatures.
pub fn iso_search<A: Arrow>(x: &Presheaf<A>, y: &Presheaf<A>, budget: u64) -> Result<IsoOutcome, LabError> {
    if x.dmax() != y.dmax() {
        return Err(LabError::TruncationMismatch(x.dmax(), y.dmax()));
    }
    for d in 0..=x.dmax() {
        if x.sizes[d] != y.sizes[d] {
            return Ok(IsoOutcome::Refuted(format!(
                "level {d} has {} cells on the left and {} on the right",
                x.sizes[d], y.sizes[d]
            )));
        }
    }
    let (sx, sy) = (signatures(x), signatures(y));
    for d in 0..=x.dmax() {
        let (mut a, mut b) = (sx[d].clone(), sy[d].clone());
        a.sort();
        b.sort();
        if a != b {
            return Ok(IsoOutcome::Refuted(format!("level {d} cells have different restriction patterns")));
        }
    }
    let mut s = IsoSearch {
        x,
        y,
        sx,
        sy,
        fwd: x.sizes.iter().map(|&n| vec![UNSET; n]).collect(),
        used: y.sizes.iter().map(|&n| vec![false; n]).collect(),
        trail: Vec::new(),
        nodes: 0,
        budget,
    };
    if s.search()? {
        Ok(IsoOutcome::Found(s.fwd))
    } else {
        Ok(IsoOutcome::Refuted("exhaustive search found no levelwise bijection commuting with restriction".into()))
    }
}

/// Check that levelwise maps `phi` form a natural isomorphism.
pub fn is_isomorphism<A: Arrow>(x: &Presheaf<A>, y: &Presheaf<A>, phi: &[Vec<usize>]) -> bool {
    let bijective = (0..=x.dmax()).all(|d| {
        let mut seen = vec![false; y.sizes[d]];
        phi[d].len() == x.sizes[d]
            && x.sizes[d] == y.sizes[d]
            && phi[d].iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    });
    bijective
        && x.cat
            .arrows
            .iter()
            .enumerate()
            .all(|(ai, a)| (0..x.sizes[a.cod()]).all(|c| phi[a.dom()][x.act[ai][c]] == y.act[ai][phi[a.cod()][c]]))
}

//! Morphisms of the cartesian cube category as bipointed function tables.
//!
//! A map `I^m → I^n` is stored as a function `⟨n⟩ → ⟨m⟩` where
//! `⟨k⟩ = {⊥, 1, .., k, ⊤}` is encoded as `0, 1, .., k, k+1`. Entry `j` of
//! the table says what the `j`-th output coordinate is: the constant `0`
//! (`⊥`), the constant `1` (`⊤`), or the input coordinate with that index.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::LabError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeMap {
    /// Dimension of the domain cube.
    pub dom: usize,
    /// Dimension of the codomain cube.
    pub cod: usize,
    /// `table[j]` for `j ∈ ⟨cod⟩`, valued in `⟨dom⟩`.
    pub table: Vec<usize>,
}

impl CubeMap {
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<CubeMap, LabError> {
        let ok =
            table.len() == cod + 2 && table[0] == 0 && table[cod + 1] == dom + 1 && table.iter().all(|&v| v <= dom + 1);
        if ok {
            Ok(CubeMap { dom, cod, table })
        } else {
            Err(LabError::Invalid(format!("not a bipointed table ⟨{cod}⟩ → ⟨{dom}⟩: {table:?}")))
        }
    }

    /// Build from a list of output coordinates (input coordinates are
    /// 1-based).
    pub fn from_coords(dom: usize, coords: &[Coord]) -> CubeMap {
        let mut table = vec![0];
        table.extend(coords.iter().map(|c| match *c {
            Coord::Zero => 0,
            Coord::One => dom + 1,
            Coord::Var(i) => i,
        }));
        table.push(dom + 1);
        CubeMap { dom, cod: coords.len(), table }
    }

    pub fn identity(n: usize) -> CubeMap {
        CubeMap { dom: n, cod: n, table: (0..n + 2).collect() }
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &CubeMap) -> Result<CubeMap, LabError> {
        if f.cod != self.dom {
            return Err(LabError::DimensionMismatch { expected: self.dom, found: f.cod });
        }
        Ok(self.after(f))
    }

    /// `self ∘ f` without the dimension check.
    pub fn after(&self, f: &CubeMap) -> CubeMap {
        CubeMap { dom: f.dom, cod: self.cod, table: self.table.iter().map(|&x| f.table[x]).collect() }
    }

    pub fn coords(&self) -> Vec<Coord> {
        self.table[1..=self.cod]
            .iter()
            .map(|&v| match v {
                0 => Coord::Zero,
                v if v == self.dom + 1 => Coord::One,
                v => Coord::Var(v),
            })
            .collect()
    }

    /// Monomorphism of `□`: the table is surjective.
    pub fn is_mono(&self) -> bool {
        let hit: HashSet<usize> = self.table.iter().copied().collect();
        hit.len() == self.dom + 2
    }

    /// Split epimorphism of `□`: the table is injective.
    pub fn is_split_epi(&self) -> bool {
        let hit: HashSet<usize> = self.table.iter().copied().collect();
        hit.len() == self.table.len()
    }

    pub fn is_iso(&self) -> bool {
        self.dom == self.cod && self.is_mono()
    }

    pub fn is_identity(&self) -> bool {
        *self == CubeMap::identity(self.dom)
    }

    /// The middle entries, as a permutation of `0..n` when `self` is an
    /// automorphism.
    pub fn axis_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_iso() {
            return None;
        }
        Some(self.table[1..=self.cod].iter().map(|&v| v - 1).collect())
    }

    /// The automorphism permuting axes: output coordinate `j` is input
    /// coordinate `perm[j]` (0-based).
    pub fn from_permutation(perm: &[usize]) -> CubeMap {
        let n = perm.len();
        let mut table = vec![0];
        table.extend(perm.iter().map(|&p| p + 1));
        table.push(n + 1);
        CubeMap { dom: n, cod: n, table }
    }

    /// `self × g : I^(m+m') → I^(n+n')`.
    pub fn product(&self, g: &CubeMap) -> CubeMap {
        let dom = self.dom + g.dom;
        let shift = |v: usize, off: usize, d: usize| {
            if v == 0 {
                0
            } else if v == d + 1 {
                dom + 1
            } else {
                v + off
            }
        };
        let mut table = vec![0];
        table.extend(self.table[1..=self.cod].iter().map(|&v| shift(v, 0, self.dom)));
        table.extend(g.table[1..=g.cod].iter().map(|&v| shift(v, self.dom, g.dom)));
        table.push(dom + 1);
        CubeMap { dom, cod: self.cod + g.cod, table }
    }

    /// Split `self : I^d → I^(a+b)` into its two components.
    pub fn split(&self, a: usize) -> (CubeMap, CubeMap) {
        let d = self.dom;
        let mk = |coords: &[usize]| {
            let mut t = vec![0];
            t.extend_from_slice(coords);
            t.push(d + 1);
            CubeMap { dom: d, cod: coords.len(), table: t }
        };
        (mk(&self.table[1..=a]), mk(&self.table[a + 1..=self.cod]))
    }

    /// `⟨f, g⟩ : I^d → I^(a+b)`.
    pub fn pair(f: &CubeMap, g: &CubeMap) -> CubeMap {
        let mut table = vec![0];
        table.extend_from_slice(&f.table[1..=f.cod]);
        table.extend_from_slice(&g.table[1..=g.cod]);
        table.push(f.dom + 1);
        CubeMap { dom: f.dom, cod: f.cod + g.cod, table }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    Zero,
    One,
    Var(usize),
}

impl fmt::Display for CubeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords()
            .into_iter()
            .map(|c| match c {
                Coord::Zero => "0".to_string(),
                Coord::One => "1".to_string(),
                Coord::Var(i) => format!("x{i}"),
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Every map `I^m → I^n`, in lexicographic order of tables.
pub fn enumerate_hom(m: usize, n: usize) -> Vec<CubeMap> {
    let base = m + 2;
    let count = base.pow(n as u32);
    (0..count)
        .map(|mut code| {
            let mut mid = vec![0; n];
            for slot in mid.iter_mut().rev() {
                *slot = code % base;
                code /= base;
            }
            let mut table = Vec::with_capacity(n + 2);
            table.push(0);
            table.extend(mid);
            table.push(m + 1);
            CubeMap { dom: m, cod: n, table }
        })
        .collect()
}

/// Index of a map in [`enumerate_hom`] order.
pub fn hom_index(f: &CubeMap) -> usize {
    let base = f.dom + 2;
    f.table[1..=f.cod].iter().fold(0, |acc, &v| acc * base + v)
}

/// The invertible endomorphisms of `I^n`, found by searching for inverses.
pub fn automorphisms(n: usize) -> Vec<CubeMap> {
    let homs = enumerate_hom(n, n);
    let id = CubeMap::identity(n);
    homs.iter().filter(|f| homs.iter().any(|g| g.after(f) == id && f.after(g) == id)).cloned().collect()
}

/// An Eilenberg–Zilber factorization `f = m ∘ e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EzFactorization {
    pub e: CubeMap,
    pub m: CubeMap,
}

/// Factor `f` as a split epimorphism followed by a monomorphism.
///
/// On tables, `f = inj ∘ surj` through the image of `f.table`; the image's
/// middle elements are labelled in order of first occurrence, which makes
/// automorphisms factor as `(σ, id)`.
pub fn ez_factor(f: &CubeMap) -> EzFactorization {
    let mut image: Vec<usize> = Vec::new();
    for &v in &f.table[1..=f.cod] {
        if v != 0 && v != f.dom + 1 && !image.contains(&v) {
            image.push(v);
        }
    }
    let k = image.len();
    let label = |v: usize| {
        if v == 0 {
            0
        } else if v == f.dom + 1 {
            k + 1
        } else {
            image.iter().position(|&w| w == v).unwrap() + 1
        }
    };
    let m_table: Vec<usize> = f.table.iter().map(|&v| label(v)).collect();
    let mut e_table = vec![0];
    e_table.extend(image.iter().copied());
    e_table.push(f.dom + 1);
    EzFactorization {
        e: CubeMap { dom: f.dom, cod: k, table: e_table },
        m: CubeMap { dom: k, cod: f.cod, table: m_table },
    }
}

/// A map `s` with `e ∘ s = id`, by exhaustive search.
pub fn find_section(e: &CubeMap) -> Option<CubeMap> {
    let id = CubeMap::identity(e.cod);
    enumerate_hom(e.cod, e.dom).into_iter().find(|s| e.after(s) == id)
}

/// Left cancellability of `m` against all pairs of maps out of cubes of
/// dimension at most `dmax`.
pub fn is_cancellable(m: &CubeMap, dmax: usize) -> bool {
    (0..=dmax).all(|d| {
        let homs = enumerate_hom(d, m.dom);
        let images: HashSet<CubeMap> = homs.iter().map(|g| m.after(g)).collect();
        images.len() == homs.len()
    })
}

/// A subgroup of the axis permutations of `I^n`, each permutation given as
/// the 0-based image list of an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    pub n: usize,
    pub elements: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(n: usize, mut elements: Vec<Vec<usize>>) -> Result<GroupAction, LabError> {
        elements.sort();
        elements.dedup();
        let set: HashSet<&Vec<usize>> = elements.iter().collect();
        let is_perm = |p: &Vec<usize>| {
            let mut q = p.clone();
            q.sort();
            q == (0..n).collect::<Vec<_>>()
        };
        if !elements.iter().all(is_perm) {
            return Err(LabError::Invalid(format!("not permutations of {n} axes")));
        }
        let id: Vec<usize> = (0..n).collect();
        if !set.contains(&id) {
            return Err(LabError::Invalid("group lacks the identity".into()));
        }
        for a in &elements {
            for b in &elements {
                let ab: Vec<usize> = (0..n).map(|j| a[b[j]]).collect();
                if !set.contains(&ab) {
                    return Err(LabError::Invalid("not closed under composition".into()));
                }
            }
        }
        Ok(GroupAction { n, elements })
    }

    pub fn symmetric(n: usize) -> GroupAction {
        let elements = automorphisms(n).iter().filter_map(CubeMap::axis_permutation).collect();
        GroupAction::new(n, elements).expect("automorphisms form a group")
    }

    pub fn trivial(n: usize) -> GroupAction {
        GroupAction { n, elements: vec![(0..n).collect()] }
    }
}

impl super::presheaf::Arrow for CubeMap {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.cod
    }
    fn after(&self, f: &CubeMap) -> CubeMap {
        CubeMap::after(self, f)
    }
    fn identity(n: usize) -> CubeMap {
        CubeMap::identity(n)
    }
    fn hom(m: usize, n: usize) -> Vec<CubeMap> {
        enumerate_hom(m, n)
    }
    fn is_degeneracy(&self) -> bool {
        self.is_split_epi() && !self.is_iso()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hom_sets() {
        let h = enumerate_hom(1, 1);
        assert_eq!(h.len(), 3);
        assert!(h.contains(&CubeMap::identity(1)));
        assert_eq!(enumerate_hom(0, 3).len(), 8);
        assert_eq!(enumerate_hom(3, 0).len(), 1);
        for f in enumerate_hom(2, 2) {
            assert_eq!(enumerate_hom(2, 2)[hom_index(&f)], f);
        }
    }

    #[test]
    fn identity_is_neutral_and_faces_compose() {
        for f in enumerate_hom(2, 1) {
            assert_eq!(CubeMap::identity(1).after(&f), f);
            assert_eq!(f.after(&CubeMap::identity(2)), f);
        }
        // x ↦ (x, 0) then (x, y) ↦ (x, y, 1)
        let d1 = CubeMap::from_coords(1, &[Coord::Var(1), Coord::Zero]);
        let d2 = CubeMap::from_coords(2, &[Coord::Var(1), Coord::Var(2), Coord::One]);
        let c = d2.compose(&d1).unwrap();
        assert_eq!(c, CubeMap::from_coords(1, &[Coord::Var(1), Coord::Zero, Coord::One]));
        assert!(d1.compose(&d2).is_err());
    }

    #[test]
    fn automorphisms_are_axis_permutations() {
        assert_eq!(automorphisms(1).len(), 1);
        assert_eq!(automorphisms(2).len(), 2);
        assert_eq!(automorphisms(3).len(), 6);
    }

    #[test]
    fn ez_conventions() {
        let id = CubeMap::identity(2);
        assert_eq!(ez_factor(&id), EzFactorization { e: id.clone(), m: id.clone() });
        let swap = CubeMap::from_permutation(&[1, 0]);
        assert_eq!(ez_factor(&swap), EzFactorization { e: swap.clone(), m: id });
        let diag = CubeMap::from_coords(1, &[Coord::Var(1), Coord::Var(1)]);
        let f = ez_factor(&diag);
        assert_eq!(f.e, CubeMap::identity(1));
        assert_eq!(f.m, diag);
    }

    #[test]
    fn product_and_pairing() {
        let a = CubeMap::from_coords(1, &[Coord::Var(1), Coord::Zero]);
        let b = CubeMap::from_coords(2, &[Coord::Var(2)]);
        let p = a.product(&b);
        assert_eq!(p, CubeMap::from_coords(3, &[Coord::Var(1), Coord::Zero, Coord::Var(3)]));
        let (x, y) = p.split(2);
        assert_eq!(CubeMap::pair(&x, &y), p);
    }
}

//! The simplex category, its embedding into cubes, and triangulation.

use std::fmt;

use serde::Serialize;

use super::cube::CubeMap;
use super::presheaf::{Arrow, FinCat, Presheaf};

/// A monotone map `[dom] → [cod]`, stored as its list of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplexMap {
    pub dom: usize,
    pub cod: usize,
    pub values: Vec<usize>,
}

impl SimplexMap {
    pub fn new(cod: usize, values: Vec<usize>) -> Option<SimplexMap> {
        let ok = !values.is_empty() && values.windows(2).all(|w| w[0] <= w[1]) && values.iter().all(|&v| v <= cod);
        ok.then(|| SimplexMap { dom: values.len() - 1, cod, values })
    }

    pub fn is_surjective(&self) -> bool {
        (0..=self.cod).all(|j| self.values.contains(&j))
    }
}

impl fmt::Display for SimplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "[{}]", vs.join(""))
    }
}

fn monotone(m: usize, n: usize) -> Vec<SimplexMap> {
    fn go(len: usize, lo: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(len, v, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m + 1, 0, n, &mut Vec::new(), &mut out);
    out.into_iter().map(|values| SimplexMap { dom: m, cod: n, values }).collect()
}

impl Arrow for SimplexMap {
    fn dom(&self) -> usize {
        self.dom
    }
    fn cod(&self) -> usize {
        self.cod
    }
    fn after(&self, f: &SimplexMap) -> SimplexMap {
        SimplexMap { dom: f.dom, cod: self.cod, values: f.values.iter().map(|&i| self.values[i]).collect() }
    }
    fn identity(n: usize) -> SimplexMap {
        SimplexMap { dom: n, cod: n, values: (0..=n).collect() }
    }
    fn hom(m: usize, n: usize) -> Vec<SimplexMap> {
        monotone(m, n)
    }
    fn is_degeneracy(&self) -> bool {
        self.is_surjective() && self.dom != self.cod
    }
}

/// The interval dual of a monotone map: `f∨(j)` is the least `i` with
/// `f(i) ≥ j`, or `⊤` if there is none. The result is the cube map
/// `I^m → I^n` associated with `f : [m] → [n]`.
pub fn dualize(f: &SimplexMap) -> CubeMap {
    let m = f.dom;
    let table = (0..=f.cod + 1).map(|j| (0..=m).find(|&i| f.values[i] >= j).unwrap_or(m + 1)).collect();
    CubeMap { dom: m, cod: f.cod, table }
}

pub type CubicalSet = Presheaf<CubeMap>;
pub type SimplicialSet = Presheaf<SimplexMap>;

/// Restriction along the simplex-to-cube embedding: level `d` is kept and
/// a monotone map acts through its dual.
pub fn triangulate(x: &CubicalSet) -> SimplicialSet {
    let cat = FinCat::<SimplexMap>::new(x.dmax());
    Presheaf::build(cat, x.labels.clone(), |f, c| x.restrict(&dualize(f), c))
}

/// The standard `n`-simplex truncated at `dmax`.
pub fn standard_simplex(n: usize, dmax: usize) -> SimplicialSet {
    Presheaf::representable(FinCat::new(dmax), n).0
}

/// `(Δ¹)^n` truncated at `dmax`.
pub fn simplex_power(n: usize, dmax: usize) -> SimplicialSet {
    let cat = FinCat::<SimplexMap>::new(dmax);
    let mut acc = Presheaf::terminal(cat.clone());
    let line = Presheaf::representable(cat, 1).0;
    for _ in 0..n {
        acc = acc.product(&line).expect("same truncation");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubelab::presheaf::{iso_search, IsoOutcome};

    #[test]
    fn dualize_is_contravariantly_functorial() {
        for m in 0..=3 {
            for n in 0..=3 {
                for p in 0..=3 {
                    for f in monotone(m, n) {
                        for g in monotone(n, p) {
                            assert_eq!(dualize(&g.after(&f)), dualize(&g).after(&dualize(&f)));
                        }
                    }
                }
            }
        }
        assert_eq!(dualize(&SimplexMap::identity(2)), CubeMap::identity(2));
    }

    #[test]
    fn small_triangulations() {
        let cat = FinCat::<CubeMap>::new(3);
        for n in 0..=1 {
            let t = triangulate(&Presheaf::representable(cat.clone(), n).0);
            t.check_functorial().unwrap();
            let out = iso_search(&t, &standard_simplex(n, 3), 1_000_000).unwrap();
            assert!(matches!(out, IsoOutcome::Found(_)));
        }
    }

    #[test]
    fn simplex_counts() {
        let d2 = standard_simplex(2, 3);
        assert_eq!(d2.sizes, vec![3, 6, 10, 15]);
        assert_eq!(d2.nondegenerate(2).len(), 1);
        assert_eq!(d2.nondegenerate(3).len(), 0);
        let sq = simplex_power(2, 2);
        assert_eq!(sq.nondegenerate(2).len(), 2);
    }
}

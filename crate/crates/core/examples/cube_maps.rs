//! Maps of the cartesian cube category: counting, symmetries and
//! Eilenberg–Zilber factorization.

use eqctt::cubelab::{automorphisms, enumerate_hom, ez_factor, find_section, Coord, CubeMap};

fn main() {
    for m in 0..=3 {
        let row: Vec<String> = (0..=3).map(|n| enumerate_hom(m, n).len().to_string()).collect();
        println!("|Hom(I^{m}, I^n)| for n = 0..3: {}", row.join(" "));
    }
    for s in automorphisms(3) {
        println!("automorphism {s} permutes axes as {:?}", s.axis_permutation().unwrap());
    }

    // (x, y) ↦ (y, 0, y) forgets x, then includes a diagonal.
    let f = CubeMap::from_coords(2, &[Coord::Var(2), Coord::Zero, Coord::Var(2)]);
    let ez = ez_factor(&f);
    println!("{f} = {} after {}", ez.m, ez.e);
    println!("section of {}: {}", ez.e, find_section(&ez.e).unwrap());
}

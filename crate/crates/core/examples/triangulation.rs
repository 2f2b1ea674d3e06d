//! Triangulate cubes and a cube quotient, and compare them with simplices.

use eqctt::cubelab::{
    cube_quotient, iso_search, representable, simplex_power, standard_simplex, triangulate, GroupAction, IsoOutcome,
};

const D: usize = 3;

fn main() {
    for n in 0..=3 {
        let t = triangulate(&representable(n, D).0);
        let verdict = match iso_search(&t, &simplex_power(n, D), 1_000_000).unwrap() {
            IsoOutcome::Found(_) => "isomorphic to",
            IsoOutcome::Refuted(_) => "not isomorphic to",
        };
        let sizes: Vec<usize> = (0..=D).map(|d| t.sizes[d]).collect();
        println!(
            "T(I^{n}) {verdict} (Δ¹)^{n}; simplices per level {sizes:?}, top non-degenerate {}",
            t.nondegenerate(n).len()
        );
    }

    let q = cube_quotient(2, &GroupAction::symmetric(2), D).unwrap();
    match iso_search(&triangulate(&q), &standard_simplex(2, D), 1_000_000).unwrap() {
        IsoOutcome::Found(phi) => println!("T(I²/Σ₂) ≅ Δ², vertices map as {:?}", phi[0]),
        IsoOutcome::Refuted(why) => println!("T(I²/Σ₂) is not Δ²: {why}"),
    }
}

//! Bounded checks of uniform equivariant lifting against open boxes.

use eqctt::cubelab::lifting::{check_equivariant_lifting, open_box_non_example, CubeSetMap, LiftBounds};
use eqctt::cubelab::representable;

const D: usize = 3;

fn main() {
    let bounds = LiftBounds { n_max: 1, k_max: 1, budget: 10_000_000 };
    let maps = [
        ("id(I^1)", CubeSetMap::identity(representable(1, D).0)),
        ("I^1 -> 1", CubeSetMap::to_terminal(representable(1, D).0)),
        ("box -> 1", open_box_non_example(D).unwrap()),
    ];
    for (name, f) in maps {
        let r = check_equivariant_lifting(&f, bounds).unwrap();
        println!("{name}: {:?}, {} ({})", r.verdict, r.message, r.certificate);
        if let Some(rf) = &r.refutation {
            let top: Vec<String> = rf.top.iter().map(|c| format!("{} ↦ {}", c.cell, c.value)).collect();
            println!(
                "    refuting box n = {}, k = {}, C = {}, ζ = {}",
                rf.open_box.n, rf.open_box.k, rf.open_box.subobject, rf.open_box.zeta
            );
            println!("    top: {}", top.join(", "));
        }
    }
}

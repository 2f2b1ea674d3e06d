//! Decide entailment between cofibrations over named interval variables.

use eqctt::cof::{canonical_dnf, entails, satisfiable};
use eqctt::parse::parse_cof_free;

fn main() {
    let cases = [
        ("i = 0 /\\ j = i", "j = 0"),
        ("i = 0 \\/ i = 1", "i = 0"),
        ("i = j /\\ j = k", "k = i"),
        ("(i = 0 \\/ j = 1) /\\ i = 1", "j = 1"),
        ("i = 0 /\\ i = 1", "0 = 1"),
    ];
    for (hyp, goal) in cases {
        let mut names = Vec::new();
        let h = parse_cof_free(hyp, &mut names).unwrap();
        let g = parse_cof_free(goal, &mut names).unwrap();
        let verdict = if entails(std::slice::from_ref(&h), &g) { "entails" } else { "does not entail" };
        println!("{hyp}  {verdict}  {goal}");
        println!("    satisfiable: {}, conjuncts: {}", satisfiable(&h), canonical_dnf(&h).len());
    }
}

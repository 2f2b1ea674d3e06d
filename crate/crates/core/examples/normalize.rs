//! Normalize definitions and watch the composition equations fire.

use eqctt::check::{check_source, normalize_global};
use eqctt::print::print_term;
use eqctt::quote::Quoter;

const SRC: &str = "
postulate A : U0
postulate B : U0
postulate P : Path U0 A B
postulate F : U0 -> U0 -> U0
postulate h : (X : U0) -> X
postulate a : A
postulate p : Path A a a

-- The guard holds, so the composite is the tube at the target.
def tube : A = comp^1 (i. A) [0 = 0 -> i. p @ i] a : (0) ~> (1)

-- Target equal to source: the composite is the cap.
def cap : A -> A = \\x. comp^2 (i j. A) [] x : (1, 0) ~> (1, 0)

-- Nothing applies, so the composite is stuck. The second is the first
-- with its directions swapped; both have the same normal form.
def stuck1 : F B A = comp^2 (i j. F (P @ i) (P @ j)) [] (h (F A A)) : (0, 0) ~> (1, 0)
def stuck2 : F B A = comp^2 (i j. F (P @ j) (P @ i)) [] (h (F A A)) : (0, 0) ~> (0, 1)

-- At a function type the composite is computed pointwise.
def fun : A -> B = comp^1 (i. A -> P @ i) [] (\\x. h A) : (0) ~> (1)
";

fn main() {
    let checked = check_source("example", SRC, Quoter::default());
    for d in checked.report.diagnostics() {
        println!("{d}");
    }
    for name in ["tube", "cap", "stuck1", "stuck2", "fun"] {
        match normalize_global(&checked.globals, name, Quoter::default()) {
            Some(Ok(t)) => println!("{name:>6} = {}", print_term(&t)),
            Some(Err(e)) => println!("{name:>6}: {e}"),
            None => println!("{name:>6}: did not check"),
        }
    }
}

//! Type-check a source file and print one line per declaration.
//!
//! `cargo run --example check_file -- corpus/j.ectt`

use eqctt::check::{check_module, Status};
use eqctt::quote::Quoter;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/j.ectt").into());
    let src = match std::fs::read_to_string(&path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            std::process::exit(2);
        }
    };
    let report = check_module(&path, &src, Quoter::default());
    for d in &report.decls {
        let mark = if d.status == Status::Ok { "ok " } else { "ERR" };
        println!("{mark} {}", d.name);
        for diag in &d.diagnostics {
            println!("    {diag}");
        }
    }
    std::process::exit(if report.all_ok() { 0 } else { 1 });
}

use std::io::Write;

fn main() {
    let out = eqctt::cli::run(std::env::args_os(), &|k| std::env::var(k).ok());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}

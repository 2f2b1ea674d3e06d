//! Pretty printer producing concrete `.ectt` syntax.
//!
//! Binder names are freshened where needed so that the output parses back to
//! an alpha-equivalent term. Unused binders print as `_` (or as the
//! non-dependent `A -> B` / `A * B` forms).

use std::collections::HashSet;

use crate::syntax::{Branch, Cof, Comp, Decl, DeclKind, Dim, Term};

const EXPR: u8 = 0;
const PROD: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

struct Printer {
    scope: Vec<String>,
    reserved: HashSet<String>,
}

impl Printer {
    fn new(scope: Vec<String>, t: &Term) -> Printer {
        let mut reserved = HashSet::new();
        t.for_each_global(&mut |n| {
            reserved.insert(n.to_string());
        });
        Printer { scope, reserved }
    }

    fn fresh(&self, hint: &str, fallback: &str) -> String {
        let base = if hint.is_empty() || hint == "_" { fallback } else { hint };
        let taken = |n: &str| self.scope.iter().any(|s| s == n) || self.reserved.contains(n) || is_keyword(n);
        if !taken(base) {
            return base.to_string();
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { fallback } else { stem };
        (1..).map(|n| format!("{stem}{n}")).find(|n| !taken(n)).unwrap()
    }

    /// Name for a binder whose body is `body` (the binder is index `depth`
    /// counted from the body's point of view, usually 0).
    fn binder(&self, hint: &str, used: bool, fallback: &str) -> String {
        if used {
            self.fresh(hint, fallback)
        } else {
            "_".to_string()
        }
    }

    fn with<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> T) -> T {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    fn var(&self, ix: usize) -> String {
        match self.scope.len().checked_sub(ix + 1) {
            Some(lvl) => self.scope[lvl].clone(),
            None => format!("#{ix}"),
        }
    }

    fn dim(&self, r: Dim) -> String {
        match r {
            Dim::Zero => "0".into(),
            Dim::One => "1".into(),
            Dim::Var(ix) => self.var(ix),
        }
    }

    fn dims(&self, rs: &[Dim]) -> String {
        if rs.len() == 1 {
            self.dim(rs[0])
        } else {
            let parts: Vec<String> = rs.iter().map(|r| self.dim(*r)).collect();
            format!("({})", parts.join(", "))
        }
    }

    fn cof(&self, c: &Cof, prec: u8) -> String {
        match c {
            Cof::Top => "tt".into(),
            Cof::Bot => "ff".into(),
            Cof::Eq(r, s) => format!("{} = {}", self.dim(*r), self.dim(*s)),
            Cof::Or(a, b) => {
                let s = format!("{} \\/ {}", self.cof(a, 0), self.cof(b, 1));
                if prec > 0 {
                    format!("({s})")
                } else {
                    s
                }
            }
            Cof::And(a, b) => {
                let s = format!("{} /\\ {}", self.cof(a, 1), self.cof(b, 2));
                if prec > 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }

    fn term(&mut self, t: &Term, prec: u8) -> String {
        let (s, level) = self.term_raw(t);
        if level < prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn term_raw(&mut self, t: &Term) -> (String, u8) {
        match t {
            Term::Var(ix) => (self.var(*ix), ATOM),
            Term::Global(n) => (n.to_string(), ATOM),
            Term::Universe(l) => (format!("U{l}"), ATOM),
            Term::Pi(x, a, b) => {
                if b.occurs(0) {
                    let a_s = self.term(a, EXPR);
                    let x = self.fresh(x, "x");
                    let b_s = self.with(std::slice::from_ref(&x), |p| p.term(b, EXPR));
                    (format!("({x} : {a_s}) -> {b_s}"), EXPR)
                } else {
                    let a_s = self.term(a, PROD);
                    let b_s = self.with(&["_".into()], |p| p.term(b, EXPR));
                    (format!("{a_s} -> {b_s}"), EXPR)
                }
            }
            Term::Sigma(x, a, b) => {
                if b.occurs(0) {
                    let a_s = self.term(a, EXPR);
                    let x = self.fresh(x, "x");
                    let b_s = self.with(std::slice::from_ref(&x), |p| p.term(b, PROD));
                    (format!("({x} : {a_s}) * {b_s}"), EXPR)
                } else {
                    let a_s = self.term(a, APP);
                    let b_s = self.with(&["_".into()], |p| {
                        // a dependent sigma is allowed to the right of `*`
                        match &**b {
                            Term::Sigma(_, _, bb) if bb.occurs(0) => p.term(b, EXPR),
                            _ => p.term(b, PROD),
                        }
                    });
                    (format!("{a_s} * {b_s}"), PROD)
                }
            }
            Term::Lam(x, b) => {
                let x = self.binder(x, b.occurs(0), "x");
                let body = self.with(std::slice::from_ref(&x), |p| p.term(b, EXPR));
                (format!("\\{x}. {body}"), EXPR)
            }
            Term::PLam(i, b) => {
                let i = self.binder(i, b.occurs(0), "i");
                let body = self.with(std::slice::from_ref(&i), |p| p.term(b, EXPR));
                (format!("<{i}> {body}"), EXPR)
            }
            Term::App(f, a) => {
                let f_s = self.term(f, APP);
                let a_s = self.term(a, ATOM);
                (format!("{f_s} {a_s}"), APP)
            }
            Term::PApp(p, r) => {
                let p_s = self.term(p, APP);
                (format!("{p_s} @ {}", self.dim(*r)), APP)
            }
            Term::Fst(t) => (format!("{}.1", self.term(t, ATOM)), ATOM),
            Term::Snd(t) => (format!("{}.2", self.term(t, ATOM)), ATOM),
            Term::Pair(a, b) => {
                let a_s = self.term(a, EXPR);
                let b_s = self.term(b, EXPR);
                (format!("({a_s}, {b_s})"), ATOM)
            }
            Term::Path(i, line, a, b) => {
                let a_s = self.term(a, ATOM);
                let b_s = self.term(b, ATOM);
                let i = self.binder(i, line.occurs(0), "i");
                let l = self.with(std::slice::from_ref(&i), |p| p.term(line, EXPR));
                (format!("Path ({i}. {l}) {a_s} {b_s}"), APP)
            }
            Term::Let(x, ty, bound, body) => {
                let ty_s = self.term(ty, EXPR);
                let bound_s = self.term(bound, EXPR);
                let x = self.fresh(x, "x");
                let body_s = self.with(std::slice::from_ref(&x), |p| p.term(body, EXPR));
                (format!("let {x} : {ty_s} = {bound_s} in {body_s}"), EXPR)
            }
            Term::Comp(c) => (self.comp(c), EXPR),
        }
    }

    fn dir_names(&self, hints: &[std::rc::Rc<str>]) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for h in hints {
            let mut n = self.fresh(h, "i");
            let mut k = 1;
            while names.contains(&n) {
                n = self.fresh(&format!("{}{k}", h.trim_end_matches(|c: char| c.is_ascii_digit())), "i");
                k += 1;
            }
            names.push(n);
        }
        names
    }

    fn comp(&mut self, c: &Comp) -> String {
        let k = c.arity();
        let dirs = self.dir_names(&c.dirs);
        let line = self.with(&dirs, |p| p.term(&c.line, EXPR));
        let branches: Vec<String> = c.tube.iter().map(|b| self.branch(b)).collect();
        let cap = self.term(&c.cap, EXPR);
        format!(
            "comp^{k} ({}. {line}) [{}] {cap} : {} ~> {}",
            dirs.join(" "),
            branches.join(" | "),
            self.dims(&c.src),
            self.dims(&c.tgt)
        )
    }

    fn branch(&mut self, b: &Branch) -> String {
        let guard = self.cof(&b.guard, 0);
        let names = self.dir_names(&b.binders);
        let body = self.with(&names, |p| p.term(&b.body, EXPR));
        format!("{guard} -> {}. {body}", names.join(" "))
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "def" | "postulate" | "let" | "in" | "Path" | "comp" | "tt" | "ff")
        || s.strip_prefix('U').is_some_and(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()))
}

/// Print a closed term.
pub fn print_term(t: &Term) -> String {
    Printer::new(Vec::new(), t).term(t, EXPR)
}

/// Print a term whose free variables are named by `scope` (outermost first).
pub fn print_term_in(scope: &[String], t: &Term) -> String {
    Printer::new(scope.to_vec(), t).term(t, EXPR)
}

pub fn print_cof_in(scope: &[String], c: &Cof) -> String {
    Printer { scope: scope.to_vec(), reserved: HashSet::new() }.cof(c, 0)
}

pub fn print_decl(d: &Decl) -> String {
    match &d.kind {
        DeclKind::Def { ty, body } => {
            format!("def {} : {} =\n  {}", d.name, print_term(ty), print_term(body))
        }
        DeclKind::Postulate { ty } => format!("postulate {} : {}", d.name, print_term(ty)),
    }
}

pub fn print_module(decls: &[Decl]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&print_decl(d));
        out.push('\n');
    }
    out
}

//! Bidirectional type checking of declarations.
//!
//! Universes are non-cumulative: `U n : U (n+1)`, and Π/Σ types live at the
//! maximum level of their components. Interval hypotheses introduced by tube
//! guards are kept as formulas over levels; checking under a disjunction
//! splits into one pass per maximal conjunct, and each conjunct is applied as
//! a substitution before inspecting the head of a type.

use std::cell::RefCell;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::rc::Rc;

use serde::Serialize;

use crate::cof::{self, Conjunct};
use crate::domain::{Clo, DimSubst, Entry, Env, GlobalEntry, Globals, Neutral, Value};
use crate::eval::eval;
use crate::parse::{parse_items, Item, ParseError, ParseErrorKind};
use crate::print::print_term_in;
use crate::quote::{conjunct_subst, PermutationBoundExceeded, Quoter};
use crate::syntax::{Branch, Cof, Comp, DeclKind, Dim, Name, Pos, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticCode {
    UnboundVariable,
    TypeMismatch,
    BoundaryMismatch,
    IncompatibleSystem,
    ArityMismatch,
    GuardNeverHolds,
    PermutationBoundExceeded,
    SyntaxError,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub severity: Severity,
    pub message: String,
    pub pos: Pos,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}[{:?}]: {}", self.pos, self.code, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, "\n    expected: {e}")?;
        }
        if let Some(a) = &self.actual {
            write!(f, "\n    actual:   {a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeclReport {
    pub name: String,
    pub status: Status,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub file: String,
    pub decls: Vec<DeclReport>,
}

impl ModuleReport {
    pub fn all_ok(&self) -> bool {
        self.decls.iter().all(|d| d.status == Status::Ok)
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.decls.iter().flat_map(|d| d.diagnostics.iter())
    }
}

/// A checking failure before a position is attached.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeError {
    pub code: DiagnosticCode,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl TypeError {
    fn new(code: DiagnosticCode, message: impl Into<String>) -> TypeError {
        TypeError { code, message: message.into(), expected: None, actual: None }
    }

    fn with(mut self, expected: String, actual: String) -> TypeError {
        self.expected = Some(expected);
        self.actual = Some(actual);
        self
    }

    fn at(self, pos: Pos, severity: Severity) -> Diagnostic {
        Diagnostic {
            code: self.code,
            severity,
            message: self.message,
            pos,
            expected: self.expected,
            actual: self.actual,
        }
    }
}

impl From<PermutationBoundExceeded> for TypeError {
    fn from(e: PermutationBoundExceeded) -> TypeError {
        TypeError::new(DiagnosticCode::PermutationBoundExceeded, e.to_string())
    }
}

type TcResult<T> = Result<T, TypeError>;

fn parse_error_code(kind: ParseErrorKind) -> DiagnosticCode {
    match kind {
        ParseErrorKind::Syntax => DiagnosticCode::SyntaxError,
        ParseErrorKind::Unbound => DiagnosticCode::UnboundVariable,
        ParseErrorKind::Arity | ParseErrorKind::GuardMentionsDirection => DiagnosticCode::ArityMismatch,
    }
}

impl From<&ParseError> for Diagnostic {
    fn from(e: &ParseError) -> Diagnostic {
        Diagnostic {
            code: parse_error_code(e.kind),
            severity: Severity::Error,
            message: e.message.clone(),
            pos: e.pos,
            expected: None,
            actual: None,
        }
    }
}

/// Typing context: names for printing, a type per term variable (`None`
/// for interval variables), the evaluation environment and the interval
/// hypotheses in force.
#[derive(Clone)]
pub struct Ctx {
    names: Vec<String>,
    tys: Vec<Option<Value>>,
    pub env: Env,
    hyps: Vec<Cof>,
    /// Maximal conjuncts of `hyps`; empty when the hypotheses are
    /// inconsistent.
    conjuncts: Rc<Vec<Conjunct>>,
    pub quoter: Quoter,
    warnings: Rc<RefCell<Vec<TypeError>>>,
}

impl Ctx {
    pub fn new(globals: Rc<Globals>, quoter: Quoter) -> Ctx {
        Ctx {
            names: Vec::new(),
            tys: Vec::new(),
            env: Env::new(globals),
            hyps: Vec::new(),
            conjuncts: Rc::new(vec![Conjunct { atoms: Vec::new() }]),
            quoter,
            warnings: Rc::new(RefCell::new(Vec::new())),
        }
    }

    pub fn len(&self) -> usize {
        self.tys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tys.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bind(&self, name: &str, ty: Value) -> (Ctx, Value) {
        let x = Value::var(ty.clone(), self.len());
        (self.define(name, ty, x.clone()), x)
    }

    pub fn define(&self, name: &str, ty: Value, v: Value) -> Ctx {
        let mut c = self.clone();
        c.names.push(name.to_string());
        c.tys.push(Some(ty));
        c.env = c.env.push(Entry::Val(v));
        c
    }

    pub fn bind_dim(&self, name: &str) -> (Ctx, Dim) {
        let d = Dim::Var(self.len());
        let mut c = self.clone();
        c.names.push(name.to_string());
        c.tys.push(None);
        c.env = c.env.push(Entry::Dim(d));
        (c, d)
    }

    pub fn bind_dims(&self, names: &[Name]) -> (Ctx, Vec<Dim>) {
        let mut c = self.clone();
        let mut ds = Vec::with_capacity(names.len());
        for n in names {
            let (c2, d) = c.bind_dim(n);
            c = c2;
            ds.push(d);
        }
        (c, ds)
    }

    /// Add a hypothesis given over levels.
    pub fn restrict(&self, phi: Cof) -> Ctx {
        let mut c = self.clone();
        c.hyps.push(phi);
        c.conjuncts = Rc::new(cof::canonical_dnf(&Cof::all(c.hyps.iter().cloned())));
        c
    }

    fn restrict_to(&self, c: &Conjunct) -> Ctx {
        let mut out = self.clone();
        out.hyps = vec![c.to_cof()];
        out.conjuncts = Rc::new(vec![c.clone()]);
        out
    }

    pub fn is_inconsistent(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn eval(&self, t: &Term) -> Value {
        eval(&self.env, t)
    }

    fn single_restriction(&self) -> Option<DimSubst> {
        match self.conjuncts.as_slice() {
            [c] => Some(conjunct_subst(c)),
            _ => None,
        }
    }

    /// Expose the head of a type under the current restriction.
    fn whnf_ty(&self, ty: &Value) -> Value {
        match self.single_restriction() {
            Some(rho) => ty.act(&rho),
            None => ty.clone(),
        }
    }

    pub fn conv(&self, ty: &Value, a: &Value, b: &Value) -> TcResult<bool> {
        Ok(self.quoter.convert(self.len(), &self.hyps, ty, a, b)?)
    }

    pub fn conv_ty(&self, a: &Value, b: &Value) -> TcResult<bool> {
        Ok(self.quoter.convert_type(self.len(), &self.hyps, a, b)?)
    }

    pub fn show_ty(&self, ty: &Value) -> String {
        match self.quoter.quote_type(self.len(), &self.whnf_ty(ty)) {
            Ok(t) => print_term_in(&self.names, &t),
            Err(e) => format!("<{e}>"),
        }
    }

    pub fn show(&self, ty: &Value, v: &Value) -> String {
        let rho = self.single_restriction().unwrap_or_default();
        match self.quoter.quote(self.len(), &ty.act(&rho), &v.act(&rho)) {
            Ok(t) => print_term_in(&self.names, &t),
            Err(e) => format!("<{e}>"),
        }
    }

    fn dim(&self, r: Dim) -> TcResult<Dim> {
        if let Dim::Var(ix) = r {
            match self.len().checked_sub(ix + 1).map(|l| &self.tys[l]) {
                Some(None) => {}
                Some(Some(_)) => {
                    return Err(TypeError::new(
                        DiagnosticCode::TypeMismatch,
                        format!("term variable `{}` used as an interval point", self.name_of(ix)),
                    ))
                }
                None => return Err(TypeError::new(DiagnosticCode::UnboundVariable, "interval variable out of scope")),
            }
        }
        Ok(self.env.dim(r))
    }

    fn cof(&self, c: &Cof) -> TcResult<Cof> {
        let mut err = None;
        let out = c.map_dims(&mut |d| match self.dim(d) {
            Ok(d) => d,
            Err(e) => {
                err.get_or_insert(e);
                d
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    fn name_of(&self, ix: usize) -> &str {
        &self.names[self.len() - 1 - ix]
    }

    fn warn(&self, e: TypeError) {
        self.warnings.borrow_mut().push(e);
    }
}

fn mismatch(ctx: &Ctx, what: &str, expected: &Value, actual: &Value) -> TypeError {
    TypeError::new(DiagnosticCode::TypeMismatch, what.to_string()).with(ctx.show_ty(expected), ctx.show_ty(actual))
}

/// Synthesize the type of `t`.
pub fn infer(ctx: &Ctx, t: &Term) -> TcResult<Value> {
    match t {
        Term::Var(ix) => match ctx.len().checked_sub(ix + 1).map(|l| &ctx.tys[l]) {
            Some(Some(ty)) => Ok(ty.clone()),
            Some(None) => Err(TypeError::new(
                DiagnosticCode::TypeMismatch,
                format!("interval variable `{}` used as a term", ctx.name_of(*ix)),
            )),
            None => Err(TypeError::new(DiagnosticCode::UnboundVariable, format!("variable index {ix} out of scope"))),
        },
        Term::Global(n) => match ctx.env.globals.get(n) {
            Some(g) => Ok(g.ty.clone()),
            None => Err(TypeError::new(
                DiagnosticCode::UnboundVariable,
                format!("`{n}` is not defined (its declaration is missing or failed)"),
            )),
        },
        Term::Universe(l) => Ok(Value::Universe(l + 1)),
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let la = infer_universe(ctx, a)?;
            let (ctx2, _) = ctx.bind(x, ctx.eval(a));
            let lb = infer_universe(&ctx2, b)?;
            Ok(Value::Universe(la.max(lb)))
        }
        Term::Path(i, line, a, b) => {
            let (ctx_i, _) = ctx.bind_dim(i);
            let l = infer_universe(&ctx_i, line)?;
            let clo = Clo::term(ctx.env.clone(), line.clone(), i.clone());
            check(ctx, a, &clo.apply_dims(&[Dim::Zero]))?;
            check(ctx, b, &clo.apply_dims(&[Dim::One]))?;
            Ok(Value::Universe(l))
        }
        Term::App(f, a) => {
            let tf = infer(ctx, f)?;
            match ctx.whnf_ty(&tf) {
                Value::Pi(dom, cod) => {
                    check(ctx, a, &dom)?;
                    Ok(cod.apply(&[Entry::Val(ctx.eval(a))]))
                }
                other => Err(TypeError::new(DiagnosticCode::TypeMismatch, "applied term is not a function")
                    .with("a function type".into(), ctx.show_ty(&other))),
            }
        }
        Term::Fst(p) | Term::Snd(p) => {
            let tp = infer(ctx, p)?;
            match ctx.whnf_ty(&tp) {
                Value::Sigma(a, b) => match t {
                    Term::Fst(_) => Ok((*a).clone()),
                    _ => Ok(b.apply(&[Entry::Val(crate::eval::do_fst(&ctx.eval(p)))])),
                },
                other => Err(TypeError::new(DiagnosticCode::TypeMismatch, "projection from a term that is not a pair")
                    .with("a Σ-type".into(), ctx.show_ty(&other))),
            }
        }
        Term::PApp(p, r) => {
            let r = ctx.dim(*r)?;
            let tp = infer(ctx, p)?;
            match ctx.whnf_ty(&tp) {
                Value::Path(line, _, _) => Ok(line.apply_dims(&[r])),
                other => Err(TypeError::new(DiagnosticCode::TypeMismatch, "path application of a non-path")
                    .with("a path type".into(), ctx.show_ty(&other))),
            }
        }
        Term::Comp(c) => check_comp(ctx, c),
        Term::Let(x, ty, bound, body) => {
            infer_universe(ctx, ty)?;
            let tyv = ctx.eval(ty);
            check(ctx, bound, &tyv)?;
            let ctx2 = ctx.define(x, tyv, ctx.eval(bound));
            infer(&ctx2, body)
        }
        Term::Lam(..) => Err(TypeError::new(
            DiagnosticCode::TypeMismatch,
            "cannot synthesize a type for a λ-abstraction; use it where a Π-type is expected",
        )),
        Term::Pair(..) => Err(TypeError::new(
            DiagnosticCode::TypeMismatch,
            "cannot synthesize a type for a pair; use it where a Σ-type is expected",
        )),
        Term::PLam(..) => Err(TypeError::new(
            DiagnosticCode::TypeMismatch,
            "cannot synthesize a type for a path abstraction; use it where a path type is expected",
        )),
    }
}

/// Check that `t` is a type and return its universe level.
pub fn infer_universe(ctx: &Ctx, t: &Term) -> TcResult<u32> {
    let ty = infer(ctx, t)?;
    match ctx.whnf_ty(&ty) {
        Value::Universe(l) => Ok(l),
        other => Err(TypeError::new(DiagnosticCode::TypeMismatch, "expected a type")
            .with("a universe".into(), ctx.show_ty(&other))),
    }
}

/// Check `t` against the type `ty`.
pub fn check(ctx: &Ctx, t: &Term, ty: &Value) -> TcResult<()> {
    match ctx.conjuncts.len() {
        0 => return Ok(()),
        1 => {}
        _ => {
            for c in ctx.conjuncts.iter() {
                check(&ctx.restrict_to(c), t, ty)?;
            }
            return Ok(());
        }
    }
    let ty = ctx.whnf_ty(ty);
    match (t, &ty) {
        (Term::Lam(x, body), Value::Pi(dom, cod)) => {
            let (ctx2, v) = ctx.bind(x, (**dom).clone());
            check(&ctx2, body, &cod.apply(&[Entry::Val(v)]))
        }
        (Term::Pair(a, b), Value::Sigma(fst, snd)) => {
            check(ctx, a, fst)?;
            check(ctx, b, &snd.apply(&[Entry::Val(ctx.eval(a))]))
        }
        (Term::PLam(i, body), Value::Path(line, a, b)) => {
            let (ctx2, d) = ctx.bind_dim(i);
            check(&ctx2, body, &line.apply_dims(&[d]))?;
            let clo = Clo::term(ctx.env.clone(), body.clone(), i.clone());
            for (end, want) in [(Dim::Zero, a), (Dim::One, b)] {
                let end_ty = line.apply_dims(&[end]);
                let got = clo.apply_dims(&[end]);
                if !ctx.conv(&end_ty, &got, want)? {
                    let which = if end == Dim::Zero { "left" } else { "right" };
                    return Err(TypeError::new(
                        DiagnosticCode::BoundaryMismatch,
                        format!("path abstraction has the wrong {which} endpoint"),
                    )
                    .with(ctx.show(&end_ty, want), ctx.show(&end_ty, &got)));
                }
            }
            Ok(())
        }
        (Term::Let(x, a, bound, body), _) => {
            infer_universe(ctx, a)?;
            let av = ctx.eval(a);
            check(ctx, bound, &av)?;
            let ctx2 = ctx.define(x, av, ctx.eval(bound));
            check(&ctx2, body, &ty)
        }
        (Term::Lam(..), _) => {
            Err(mismatch(ctx, "λ-abstraction checked against a non-function type", &ty, &ty).map_expected("a Π-type"))
        }
        (Term::Pair(..), _) => {
            Err(mismatch(ctx, "pair checked against a non-Σ type", &ty, &ty).map_expected("a Σ-type"))
        }
        (Term::PLam(..), _) => {
            Err(mismatch(ctx, "path abstraction checked against a non-path type", &ty, &ty).map_expected("a path type"))
        }
        _ => {
            let got = infer(ctx, t)?;
            if ctx.conv_ty(&got, &ty)? {
                Ok(())
            } else {
                Err(mismatch(ctx, "type mismatch", &ty, &got))
            }
        }
    }
}

impl TypeError {
    fn map_expected(mut self, e: &str) -> TypeError {
        self.expected = Some(e.to_string());
        self
    }
}

/// Check a composition term and return its type, the line at the target.
pub fn check_comp(ctx: &Ctx, c: &Comp) -> TcResult<Value> {
    let k = c.dirs.len();
    if k == 0 || c.src.len() != k || c.tgt.len() != k {
        return Err(TypeError::new(
            DiagnosticCode::ArityMismatch,
            format!(
                "composition with {k} directions needs {k} source and target points (found {} and {})",
                c.src.len(),
                c.tgt.len()
            ),
        ));
    }
    if k > ctx.quoter.k_max {
        return Err(PermutationBoundExceeded { arity: k, k_max: ctx.quoter.k_max }.into());
    }
    let (ctx_dirs, dirs) = ctx.bind_dims(&c.dirs);
    infer_universe(&ctx_dirs, &c.line)?;
    let line = Clo::term(ctx.env.clone(), c.line.clone(), c.dirs[0].clone());
    let src = c.src.iter().map(|r| ctx.dim(*r)).collect::<TcResult<Vec<_>>>()?;
    let tgt = c.tgt.iter().map(|r| ctx.dim(*r)).collect::<TcResult<Vec<_>>>()?;

    let mut guards = Vec::with_capacity(c.tube.len());
    for (n, b) in c.tube.iter().enumerate() {
        check_branch_arity(b, k)?;
        let g = ctx.cof(&b.guard)?;
        if !cof::satisfiable(&g) {
            ctx.warn(TypeError::new(
                DiagnosticCode::GuardNeverHolds,
                format!("guard of tube branch {} never holds", n + 1),
            ));
        }
        guards.push(g);
    }
    let bodies: Vec<Clo> =
        c.tube.iter().map(|b| Clo::term(ctx.env.clone(), b.body.clone(), c.dirs[0].clone())).collect();
    let line_at_dirs = line.apply_dims(&dirs);
    for (b, g) in c.tube.iter().zip(&guards) {
        check(&ctx_dirs.restrict(g.clone()), &b.body, &line_at_dirs)?;
    }
    check_system(&ctx_dirs, &guards, &bodies, &dirs, &line_at_dirs)?;

    let line_src = line.apply_dims(&src);
    check(ctx, &c.cap, &line_src)?;
    let cap = ctx.eval(&c.cap);
    for (n, (g, u)) in guards.iter().zip(&bodies).enumerate() {
        let under = ctx.restrict(g.clone());
        let at_src = u.apply_dims(&src);
        if !under.conv(&line_src, &at_src, &cap)? {
            return Err(TypeError::new(
                DiagnosticCode::BoundaryMismatch,
                format!("tube branch {} does not agree with the cap at the source", n + 1),
            )
            .with(under.show(&line_src, &cap), under.show(&line_src, &at_src)));
        }
    }
    Ok(line.apply_dims(&tgt))
}

fn check_branch_arity(b: &Branch, k: usize) -> TcResult<()> {
    if b.binders.len() != k {
        return Err(TypeError::new(
            DiagnosticCode::ArityMismatch,
            format!("tube branch binds {} directions, expected {k}", b.binders.len()),
        ));
    }
    Ok(())
}

/// Pairwise agreement of tube branches on the overlaps of their guards.
pub fn check_system(ctx: &Ctx, guards: &[Cof], bodies: &[Clo], dirs: &[Dim], ty: &Value) -> TcResult<()> {
    for i in 0..guards.len() {
        for j in i + 1..guards.len() {
            let under = ctx.restrict(Cof::and(guards[i].clone(), guards[j].clone()));
            let (ui, uj) = (bodies[i].apply_dims(dirs), bodies[j].apply_dims(dirs));
            if !under.conv(ty, &ui, &uj)? {
                return Err(TypeError::new(
                    DiagnosticCode::IncompatibleSystem,
                    format!("tube branches {} and {} disagree where both guards hold", i + 1, j + 1),
                )
                .with(under.show(ty, &ui), under.show(ty, &uj)));
            }
        }
    }
    Ok(())
}

/// The outcome of checking a file: the report plus the resulting signature.
pub struct Checked {
    pub report: ModuleReport,
    pub globals: Rc<Globals>,
}

fn check_decl(
    globals: &Rc<Globals>,
    quoter: Quoter,
    name: &Name,
    kind: &DeclKind,
) -> (TcResult<GlobalEntry>, Vec<TypeError>) {
    let ctx = Ctx::new(globals.clone(), quoter);
    let result = (|| {
        if globals.contains_key(name) {
            return Err(TypeError::new(DiagnosticCode::SyntaxError, format!("`{name}` is already declared")));
        }
        match kind {
            DeclKind::Postulate { ty } => {
                infer_universe(&ctx, ty)?;
                let tyv = ctx.eval(ty);
                let value = Value::neutral(tyv.clone(), Neutral::Global(name.clone()));
                Ok(GlobalEntry { ty: tyv, value })
            }
            DeclKind::Def { ty, body } => {
                infer_universe(&ctx, ty)?;
                let tyv = ctx.eval(ty);
                check(&ctx, body, &tyv)?;
                Ok(GlobalEntry { ty: tyv, value: ctx.eval(body) })
            }
        }
    })();
    let warnings = ctx.warnings.borrow().clone();
    (result, warnings)
}

/// Check every declaration of a source file in order.
pub fn check_source(file: &str, src: &str, quoter: Quoter) -> Checked {
    let mut globals: Rc<Globals> = Rc::new(Globals::new());
    let mut decls = Vec::new();
    for item in parse_items(src) {
        match item {
            Item::Error { name, error } => decls.push(DeclReport {
                name: name.map(|n| n.to_string()).unwrap_or_else(|| "<unparsed>".into()),
                status: Status::Error,
                diagnostics: vec![Diagnostic::from(&error)],
            }),
            Item::Decl(d) => {
                let outcome = catch_unwind(AssertUnwindSafe(|| check_decl(&globals, quoter, &d.name, &d.kind)));
                let (result, warnings) = outcome.unwrap_or_else(|p| {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    (Err(TypeError::new(DiagnosticCode::TypeMismatch, format!("internal error: {msg}"))), Vec::new())
                });
                let mut diagnostics: Vec<Diagnostic> =
                    warnings.into_iter().map(|w| w.at(d.pos, Severity::Warning)).collect();
                let status = match result {
                    Ok(entry) => {
                        Rc::make_mut(&mut globals).insert(d.name.clone(), entry);
                        Status::Ok
                    }
                    Err(e) => {
                        diagnostics.push(e.at(d.pos, Severity::Error));
                        Status::Error
                    }
                };
                decls.push(DeclReport { name: d.name.to_string(), status, diagnostics });
            }
        }
    }
    Checked { report: ModuleReport { file: file.to_string(), decls }, globals }
}

pub fn check_module(file: &str, src: &str, quoter: Quoter) -> ModuleReport {
    check_source(file, src, quoter).report
}

/// The η-long β-normal form of a checked global's value.
pub fn normalize_global(
    globals: &Globals,
    name: &str,
    quoter: Quoter,
) -> Option<Result<Term, PermutationBoundExceeded>> {
    let g = globals.get(name)?;
    Some(quoter.quote(0, &g.ty, &g.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(src: &str) -> Vec<(String, Status, Vec<DiagnosticCode>)> {
        check_module("t.ectt", src, Quoter::default())
            .decls
            .into_iter()
            .map(|d| (d.name, d.status, d.diagnostics.iter().map(|x| x.code).collect()))
            .collect()
    }

    #[test]
    fn empty_file() {
        assert!(codes("").is_empty());
    }

    #[test]
    fn universe_levels() {
        let r = codes("def a : U1 = U0\ndef b : U0 = U0\ndef c : U1 = (A : U0) -> A");
        assert_eq!(r[0].1, Status::Ok);
        assert_eq!(r[1].2, vec![DiagnosticCode::TypeMismatch]);
        assert_eq!(r[2].1, Status::Ok);
    }

    #[test]
    fn constant_path_and_boundary() {
        let src = "postulate A : U0\npostulate a : A\npostulate b : A\n\
                   def p : Path A a a = <i> a\n\
                   def q : Path A a b = <i> a\n\
                   def r : A = (<i> a) @ 0";
        let r = codes(src);
        assert_eq!(r[3].1, Status::Ok);
        assert_eq!(r[4].2, vec![DiagnosticCode::BoundaryMismatch]);
        assert_eq!(r[5].2, vec![DiagnosticCode::TypeMismatch]);
    }

    #[test]
    fn one_bad_among_three() {
        let src = "postulate A : U0\ndef bad : A = U0\ndef id : A -> A = \\x. x";
        let r = codes(src);
        assert_eq!(r.iter().filter(|d| d.1 == Status::Ok).count(), 2);
        assert_eq!(r[1].2, vec![DiagnosticCode::TypeMismatch]);
    }

    #[test]
    fn incompatible_system() {
        let src = "postulate A : U0\npostulate a : A\npostulate b : A\n\
                   def c : Path A a a = <i> comp^1 (j. A) [i = 0 -> j. a | i = 0 -> j. b] a : (0) ~> (1)";
        let r = codes(src);
        assert_eq!(r[3].2, vec![DiagnosticCode::IncompatibleSystem]);
    }

    #[test]
    fn cap_disagreeing_with_tube() {
        let src = "postulate A : U0\npostulate a : A\npostulate b : A\n\
                   def c : A = comp^1 (j. A) [tt -> j. a] b : (0) ~> (1)";
        assert_eq!(codes(src)[3].2, vec![DiagnosticCode::BoundaryMismatch]);
    }

    #[test]
    fn vacuous_overlap_and_warning() {
        let src = "postulate A : U0\npostulate a : A\npostulate b : A\n\
                   def c : Path A a a = <i> comp^1 (j. A) [i = 0 -> j. a | i = 1 -> j. a] a : (0) ~> (1)\n\
                   def d : A = comp^1 (j. A) [ff -> j. b] a : (0) ~> (1)";
        let r = codes(src);
        assert_eq!(r[3].1, Status::Ok, "{:?}", r[3]);
        assert_eq!(r[4].1, Status::Ok);
        assert_eq!(r[4].2, vec![DiagnosticCode::GuardNeverHolds]);
    }

    #[test]
    fn kmax_exceeded() {
        let src = "postulate A : U0\npostulate a : A\n\
                   def c : A = comp^5 (i1 i2 i3 i4 i5. A) [] a : (0,0,0,0,0) ~> (1,1,1,1,1)";
        assert_eq!(codes(src)[2].2, vec![DiagnosticCode::PermutationBoundExceeded]);
    }
}

//! Evaluation into weak-head normal values.
//!
//! Evaluation only ever sees terms that have been type checked, so a
//! mismatch between an eliminator and its argument is a kernel bug and
//! panics.

use std::rc::Rc;

use crate::domain::{Clo, CompData, DimSubst, Entry, Env, FillData, Neutral, Value};
use crate::kan;
use crate::syntax::{Cof, Dim, Term};

pub fn eval(env: &Env, t: &Term) -> Value {
    match t {
        Term::Var(ix) => env.val(*ix),
        Term::Global(n) => match env.globals.get(n) {
            Some(g) => g.value.clone(),
            None => panic!("scope violation: unknown global `{n}`"),
        },
        Term::Pi(x, a, b) => Value::Pi(Rc::new(eval(env, a)), Clo::term(env.clone(), b.clone(), x.clone())),
        Term::Sigma(x, a, b) => Value::Sigma(Rc::new(eval(env, a)), Clo::term(env.clone(), b.clone(), x.clone())),
        Term::Lam(x, b) => Value::Lam(Clo::term(env.clone(), b.clone(), x.clone())),
        Term::App(f, a) => do_app(&eval(env, f), &eval(env, a)),
        Term::Pair(a, b) => Value::Pair(Rc::new(eval(env, a)), Rc::new(eval(env, b))),
        Term::Fst(p) => do_fst(&eval(env, p)),
        Term::Snd(p) => do_snd(&eval(env, p)),
        Term::Path(i, line, a, b) => {
            Value::Path(Clo::term(env.clone(), line.clone(), i.clone()), Rc::new(eval(env, a)), Rc::new(eval(env, b)))
        }
        Term::PLam(i, b) => Value::PLam(Clo::term(env.clone(), b.clone(), i.clone())),
        Term::PApp(p, r) => do_papp(&eval(env, p), env.dim(*r)),
        Term::Universe(l) => Value::Universe(*l),
        Term::Comp(c) => {
            let dir_hint = c.dirs.first().cloned().unwrap_or_else(|| "i".into());
            kan::comp(CompData {
                line: Clo::term(env.clone(), c.line.clone(), dir_hint.clone()),
                src: c.src.iter().map(|r| env.dim(*r)).collect(),
                tgt: c.tgt.iter().map(|r| env.dim(*r)).collect(),
                tube: c
                    .tube
                    .iter()
                    .map(|b| (env.cof(&b.guard), Clo::term(env.clone(), b.body.clone(), dir_hint.clone())))
                    .collect(),
                cap: eval(env, &c.cap),
            })
        }
        Term::Let(_, _, bound, body) => {
            let v = eval(env, bound);
            eval(&env.push(Entry::Val(v)), body)
        }
    }
}

pub fn do_app(f: &Value, a: &Value) -> Value {
    match f {
        Value::Lam(clo) => clo.apply(&[Entry::Val(a.clone())]),
        Value::Neutral(ty, _) => match &**ty {
            Value::Pi(_, cod) => {
                let ty = cod.apply(&[Entry::Val(a.clone())]);
                Value::neutral(ty, Neutral::App(f.clone(), a.clone()))
            }
            other => panic!("application of a neutral of non-function type {other:?}"),
        },
        other => panic!("application of a non-function {other:?}"),
    }
}

pub fn do_fst(p: &Value) -> Value {
    match p {
        Value::Pair(a, _) => (**a).clone(),
        Value::Neutral(ty, _) => match &**ty {
            Value::Sigma(a, _) => Value::neutral((**a).clone(), Neutral::Fst(p.clone())),
            other => panic!("projection from a neutral of non-pair type {other:?}"),
        },
        other => panic!("projection from a non-pair {other:?}"),
    }
}

pub fn do_snd(p: &Value) -> Value {
    match p {
        Value::Pair(_, b) => (**b).clone(),
        Value::Neutral(ty, _) => match &**ty {
            Value::Sigma(_, cod) => {
                let ty = cod.apply(&[Entry::Val(do_fst(p))]);
                Value::neutral(ty, Neutral::Snd(p.clone()))
            }
            other => panic!("projection from a neutral of non-pair type {other:?}"),
        },
        other => panic!("projection from a non-pair {other:?}"),
    }
}

pub fn do_papp(p: &Value, r: Dim) -> Value {
    match p {
        Value::PLam(clo) => clo.apply(&[Entry::Dim(r)]),
        Value::Neutral(ty, _) => match &**ty {
            Value::Path(line, a, b) => match r {
                Dim::Zero => (**a).clone(),
                Dim::One => (**b).clone(),
                Dim::Var(_) => Value::neutral(line.apply(&[Entry::Dim(r)]), Neutral::PApp(p.clone(), r)),
            },
            other => panic!("path application of a neutral of non-path type {other:?}"),
        },
        other => panic!("path application of a non-path {other:?}"),
    }
}

fn dims_of(args: &[Entry]) -> Vec<Dim> {
    args.iter()
        .map(|e| match e {
            Entry::Dim(d) => *d,
            Entry::Val(_) => panic!("closure expected interval arguments"),
        })
        .collect()
}

impl Clo {
    /// Instantiate the closure; `args[0]` binds the outermost binder.
    pub fn apply(&self, args: &[Entry]) -> Value {
        match self {
            Clo::Term { env, body, .. } => eval(&env.extend(args.iter().cloned()), body),
            Clo::Const(v) => (**v).clone(),
            Clo::Fill(fd) => kan::comp(CompData {
                line: fd.line.clone(),
                src: fd.src.clone(),
                tgt: dims_of(args),
                tube: fd.tube.clone(),
                cap: fd.cap.clone(),
            }),
            Clo::PiDom(line) => match line.apply(args) {
                Value::Pi(a, _) => (*a).clone(),
                other => panic!("expected a Π-type in type line, found {other:?}"),
            },
            Clo::PiCod(line, arg) => match line.apply(args) {
                Value::Pi(_, b) => b.apply(&[Entry::Val(arg.apply(args))]),
                other => panic!("expected a Π-type in type line, found {other:?}"),
            },
            Clo::SigmaFst(line) => match line.apply(args) {
                Value::Sigma(a, _) => (*a).clone(),
                other => panic!("expected a Σ-type in type line, found {other:?}"),
            },
            Clo::SigmaSnd(line, arg) => match line.apply(args) {
                Value::Sigma(_, b) => b.apply(&[Entry::Val(arg.apply(args))]),
                other => panic!("expected a Σ-type in type line, found {other:?}"),
            },
            Clo::PathLine(line, j) => match line.apply(args) {
                Value::Path(l, _, _) => l.apply(&[Entry::Dim(*j)]),
                other => panic!("expected a path type in type line, found {other:?}"),
            },
            Clo::PathLeft(line) => match line.apply(args) {
                Value::Path(_, a, _) => (*a).clone(),
                other => panic!("expected a path type in type line, found {other:?}"),
            },
            Clo::PathRight(line) => match line.apply(args) {
                Value::Path(_, _, b) => (*b).clone(),
                other => panic!("expected a path type in type line, found {other:?}"),
            },
            Clo::AppAt(fun, arg) => do_app(&fun.apply(args), &arg.apply(args)),
            Clo::FstOf(c) => do_fst(&c.apply(args)),
            Clo::SndOf(c) => do_snd(&c.apply(args)),
            Clo::PAppOf(c, j) => do_papp(&c.apply(args), *j),
            Clo::CompPi(data) => match args {
                [Entry::Val(a)] => kan::comp_pi_body(data, a.clone()),
                _ => panic!("Π-composition body takes one term argument"),
            },
            Clo::CompPath(data) => match args {
                [Entry::Dim(j)] => kan::comp_path_body(data, *j),
                _ => panic!("path-composition body takes one interval argument"),
            },
        }
    }

    pub fn apply_dims(&self, dims: &[Dim]) -> Value {
        let args: Vec<Entry> = dims.iter().map(|d| Entry::Dim(*d)).collect();
        self.apply(&args)
    }

    pub fn act(&self, s: &DimSubst) -> Clo {
        let rc = |c: &Rc<Clo>| Rc::new(c.act(s));
        match self {
            Clo::Term { env, body, hint } => Clo::Term { env: act_env(env, s), body: body.clone(), hint: hint.clone() },
            Clo::Const(v) => Clo::Const(Rc::new(v.act(s))),
            Clo::Fill(fd) => Clo::Fill(Rc::new(FillData {
                line: fd.line.act(s),
                src: s.dims(&fd.src),
                tube: act_tube(&fd.tube, s),
                cap: fd.cap.act(s),
            })),
            Clo::PiDom(l) => Clo::PiDom(rc(l)),
            Clo::PiCod(l, a) => Clo::PiCod(rc(l), rc(a)),
            Clo::SigmaFst(l) => Clo::SigmaFst(rc(l)),
            Clo::SigmaSnd(l, a) => Clo::SigmaSnd(rc(l), rc(a)),
            Clo::PathLine(l, j) => Clo::PathLine(rc(l), s.dim(*j)),
            Clo::PathLeft(l) => Clo::PathLeft(rc(l)),
            Clo::PathRight(l) => Clo::PathRight(rc(l)),
            Clo::AppAt(f, a) => Clo::AppAt(rc(f), rc(a)),
            Clo::FstOf(c) => Clo::FstOf(rc(c)),
            Clo::SndOf(c) => Clo::SndOf(rc(c)),
            Clo::PAppOf(c, j) => Clo::PAppOf(rc(c), s.dim(*j)),
            Clo::CompPi(d) => Clo::CompPi(Rc::new(act_comp_data(d, s))),
            Clo::CompPath(d) => Clo::CompPath(Rc::new(act_comp_data(d, s))),
        }
    }
}

fn act_env(env: &Env, s: &DimSubst) -> Env {
    let entries = env
        .entries
        .iter()
        .map(|e| match e {
            Entry::Val(v) => Entry::Val(v.act(s)),
            Entry::Dim(d) => Entry::Dim(s.dim(*d)),
        })
        .collect();
    Env { entries: Rc::new(entries), globals: env.globals.clone() }
}

fn act_tube(tube: &[(Cof, Clo)], s: &DimSubst) -> Vec<(Cof, Clo)> {
    tube.iter().map(|(g, u)| (s.cof(g), u.act(s))).collect()
}

pub(crate) fn act_comp_data(d: &CompData, s: &DimSubst) -> CompData {
    CompData {
        line: d.line.act(s),
        src: s.dims(&d.src),
        tgt: s.dims(&d.tgt),
        tube: act_tube(&d.tube, s),
        cap: d.cap.act(s),
    }
}

impl Value {
    /// The interval action: substitute interval levels and re-normalize.
    pub fn act(&self, s: &DimSubst) -> Value {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Value::Pi(a, b) => Value::Pi(Rc::new(a.act(s)), b.act(s)),
            Value::Sigma(a, b) => Value::Sigma(Rc::new(a.act(s)), b.act(s)),
            Value::Path(l, a, b) => Value::Path(l.act(s), Rc::new(a.act(s)), Rc::new(b.act(s))),
            Value::Universe(l) => Value::Universe(*l),
            Value::Lam(c) => Value::Lam(c.act(s)),
            Value::Pair(a, b) => Value::Pair(Rc::new(a.act(s)), Rc::new(b.act(s))),
            Value::PLam(c) => Value::PLam(c.act(s)),
            Value::Neutral(ty, n) => match &**n {
                Neutral::Var(_) => Value::Neutral(Rc::new(ty.act(s)), n.clone()),
                Neutral::Global(_) => self.clone(),
                Neutral::App(f, a) => do_app(&f.act(s), &a.act(s)),
                Neutral::Fst(p) => do_fst(&p.act(s)),
                Neutral::Snd(p) => do_snd(&p.act(s)),
                Neutral::PApp(p, r) => do_papp(&p.act(s), s.dim(*r)),
                Neutral::Comp(d) => kan::comp(act_comp_data(d, s)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    #[test]
    fn beta() {
        let t = parse_term("(\\x. x) ((\\y. y) U0)", &[]).unwrap();
        assert!(matches!(eval(&Env::default(), &t), Value::Universe(0)));
    }

    #[test]
    fn neutral_path_endpoints() {
        // p : Path U0 U0 U1 (ill-typed endpoints are fine here)
        let line = Clo::Const(Rc::new(Value::Universe(1)));
        let ty = Value::Path(line, Rc::new(Value::Universe(0)), Rc::new(Value::Universe(7)));
        let p = Value::var(ty, 0);
        assert!(matches!(do_papp(&p, Dim::One), Value::Universe(7)));
        let at_i = do_papp(&p, Dim::Var(1));
        assert!(matches!(at_i, Value::Neutral(..)));
        let at_0 = at_i.act(&DimSubst::new([(1, Dim::Zero)]));
        assert!(matches!(at_0, Value::Universe(0)));
    }
}

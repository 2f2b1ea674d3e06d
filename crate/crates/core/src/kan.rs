//! Kan composition for the `k`-ary former.
//!
//! [`comp`] first fires a branch whose guard holds, then returns the cap
//! when source and target coincide, and otherwise dispatches on the head of
//! the type line. Lines whose head is a universe or a neutral type leave the
//! composition stuck; stuck compositions are identified up to permutation of
//! their directions at readback.

use std::rc::Rc;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::cof;
use crate::domain::{Clo, CompData, FillData, Neutral, Value};
use crate::eval::{do_app, do_fst, do_papp, do_snd};
use crate::syntax::{Cof, Dim};

static NEXT_PROBE: AtomicUsize = AtomicUsize::new(usize::MAX);

/// A level far above any real context, used to inspect the head of a line
/// without committing to particular coordinates.
fn fresh_probe() -> Dim {
    Dim::Var(NEXT_PROBE.fetch_sub(1, Ordering::Relaxed))
}

enum Head {
    Pi,
    Sigma,
    Path,
    Stuck,
}

fn line_head(line: &Clo, k: usize) -> Head {
    let probes: Vec<Dim> = (0..k).map(|_| fresh_probe()).collect();
    match line.apply_dims(&probes) {
        Value::Pi(..) => Head::Pi,
        Value::Sigma(..) => Head::Sigma,
        Value::Path(..) => Head::Path,
        Value::Universe(_) | Value::Neutral(..) => Head::Stuck,
        other => panic!("type line evaluates to a non-type {other:?}"),
    }
}

pub fn comp(data: CompData) -> Value {
    for (guard, body) in &data.tube {
        if cof::valid(guard) {
            return body.apply_dims(&data.tgt);
        }
    }
    if data.src == data.tgt {
        return data.cap;
    }
    match line_head(&data.line, data.arity()) {
        Head::Pi => Value::Lam(Clo::CompPi(Rc::new(data))),
        Head::Sigma => comp_sigma(data),
        Head::Path => Value::PLam(Clo::CompPath(Rc::new(data))),
        Head::Stuck => {
            let ty = data.line.apply_dims(&data.tgt);
            Value::neutral(ty, Neutral::Comp(data))
        }
    }
}

/// Filler with open targets, as a closure over `k` interval arguments.
pub fn fill(line: Clo, src: Vec<Dim>, tube: Vec<(Cof, Clo)>, cap: Value) -> Clo {
    Clo::Fill(Rc::new(FillData { line, src, tube, cap }))
}

/// Composition with an empty tube.
pub fn transport(line: Clo, src: Vec<Dim>, tgt: Vec<Dim>, cap: Value) -> Value {
    comp(CompData { line, src, tgt, tube: Vec::new(), cap })
}

/// The composite function at a Π-line, applied to `a : A(tgt)`.
pub(crate) fn comp_pi_body(data: &CompData, a: Value) -> Value {
    let line = Rc::new(data.line.clone());
    let a_fill = Rc::new(fill(Clo::PiDom(line.clone()), data.tgt.clone(), Vec::new(), a));
    let cap = do_app(&data.cap, &a_fill.apply_dims(&data.src));
    comp(CompData {
        line: Clo::PiCod(line, a_fill.clone()),
        src: data.src.clone(),
        tgt: data.tgt.clone(),
        tube: data.tube.iter().map(|(g, u)| (g.clone(), Clo::AppAt(Rc::new(u.clone()), a_fill.clone()))).collect(),
        cap,
    })
}

fn comp_sigma(data: CompData) -> Value {
    let line = Rc::new(data.line);
    let fst_tube = data.tube.iter().map(|(g, u)| (g.clone(), Clo::FstOf(Rc::new(u.clone())))).collect();
    let w = Rc::new(fill(Clo::SigmaFst(line.clone()), data.src.clone(), fst_tube, do_fst(&data.cap)));
    let fst = w.apply_dims(&data.tgt);
    let snd = comp(CompData {
        line: Clo::SigmaSnd(line, w),
        src: data.src,
        tgt: data.tgt,
        tube: data.tube.into_iter().map(|(g, u)| (g, Clo::SndOf(Rc::new(u)))).collect(),
        cap: do_snd(&data.cap),
    });
    Value::Pair(Rc::new(fst), Rc::new(snd))
}

/// The composite path at a path line, applied to the interval point `j`.
pub(crate) fn comp_path_body(data: &CompData, j: Dim) -> Value {
    let line = Rc::new(data.line.clone());
    let mut tube = vec![
        (Cof::eq(j, Dim::Zero), Clo::PathLeft(line.clone())),
        (Cof::eq(j, Dim::One), Clo::PathRight(line.clone())),
    ];
    tube.extend(data.tube.iter().map(|(g, u)| (g.clone(), Clo::PAppOf(Rc::new(u.clone()), j))));
    comp(CompData {
        line: Clo::PathLine(line, j),
        src: data.src.clone(),
        tgt: data.tgt.clone(),
        tube,
        cap: do_papp(&data.cap, j),
    })
}

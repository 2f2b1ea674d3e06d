// The three equation families of composition, checked on every top-level
// comp of a corpus file: guard restriction, identical source and target,
// and permutation of directions.

use std::rc::Rc;

use eqctt::check::{check_source, Ctx};
use eqctt::parse::parse_module;
use eqctt::quote::{permutations, Quoter};
use eqctt::syntax::{Comp, DeclKind, Subst, SubstEntry, Term};

pub struct CompCase {
    pub name: String,
    pub ctx: Ctx,
    pub comp: Comp,
}

/// Comps at the head of each definition, under its leading path binders.
pub fn cases(src: &str) -> Vec<CompCase> {
    let checked = check_source("corpus", src, Quoter::default());
    assert!(checked.report.all_ok(), "corpus does not check: {:#?}", checked.report);
    let decls = parse_module(src).expect("corpus parses");
    let mut out = Vec::new();
    for d in decls {
        let DeclKind::Def { body, .. } = &d.kind else { continue };
        let mut ctx = Ctx::new(checked.globals.clone(), Quoter::default());
        let mut t: &Term = body;
        while let Term::PLam(name, inner) = t {
            ctx = ctx.bind_dim(name).0;
            t = inner;
        }
        if let Term::Comp(c) = t {
            out.push(CompCase { name: d.name.to_string(), ctx, comp: (**c).clone() });
        }
    }
    out
}

fn line_at(c: &Comp, dims: &[eqctt::Dim]) -> Term {
    c.line.subst(&Subst::dims(dims))
}

#[derive(Default, Debug)]
pub struct LawTally {
    pub guard_checks: usize,
    pub cap_checks: usize,
    pub permutation_checks: usize,
    pub failures: Vec<String>,
}

/// Rename the directions of a comp: new direction `p` is old direction
/// `sigma[p]`.
pub fn permute(c: &Comp, sigma: &[usize]) -> Comp {
    let k = c.arity();
    let mut inv = vec![0; k];
    for (p, &m) in sigma.iter().enumerate() {
        inv[m] = p;
    }
    // Index `i` of the body scope is old direction `k - 1 - i`.
    let entries = (0..k).map(|i| SubstEntry::Var(k - 1 - inv[k - 1 - i])).collect();
    let ren = Subst::new(entries, k);
    Comp {
        dirs: sigma.iter().map(|&m| c.dirs[m].clone()).collect(),
        line: Rc::new(c.line.subst(&ren)),
        src: sigma.iter().map(|&m| c.src[m]).collect(),
        tgt: sigma.iter().map(|&m| c.tgt[m]).collect(),
        tube: c
            .tube
            .iter()
            .map(|b| eqctt::syntax::Branch {
                guard: b.guard.clone(),
                binders: sigma.iter().map(|&m| b.binders[m].clone()).collect(),
                body: Rc::new(b.body.subst(&ren)),
            })
            .collect(),
        cap: c.cap.clone(),
    }
}

pub fn check_laws(case: &CompCase, tally: &mut LawTally) {
    let ctx = &case.ctx;
    let c = &case.comp;
    let whole = Term::Comp(Rc::new(c.clone()));
    let ty_tgt = line_at(c, &c.tgt);
    let mut fail = |what: String| tally.failures.push(format!("{}: {what}", case.name));

    // Restriction by a guard reduces to that branch at the target.
    for (j, b) in c.tube.iter().enumerate() {
        let under = ctx.restrict(ctx.env.cof(&b.guard));
        let ty = under.eval(&ty_tgt);
        let branch = b.body.subst(&Subst::dims(&c.tgt));
        match under.conv(&ty, &under.eval(&whole), &under.eval(&branch)) {
            Ok(true) => {}
            Ok(false) => fail(format!("branch {j} at its guard")),
            Err(e) => fail(format!("branch {j}: {e:?}")),
        }
        tally.guard_checks += 1;
    }

    // Target equal to source gives the cap.
    let mut at_src = c.clone();
    at_src.tgt = c.src.clone();
    let ty = ctx.eval(&line_at(c, &c.src));
    match ctx.conv(&ty, &ctx.eval(&Term::Comp(Rc::new(at_src))), &ctx.eval(&c.cap)) {
        Ok(true) => {}
        Ok(false) => fail("target := source is not the cap".into()),
        Err(e) => fail(format!("cap: {e:?}")),
    }
    tally.cap_checks += 1;

    // Every permutation of the directions gives the same composite.
    let ty = ctx.eval(&ty_tgt);
    let v = ctx.eval(&whole);
    for sigma in permutations(c.arity()) {
        let p = Term::Comp(Rc::new(permute(c, &sigma)));
        match ctx.conv(&ty, &v, &ctx.eval(&p)) {
            Ok(true) => {}
            Ok(false) => fail(format!("permutation {sigma:?}")),
            Err(e) => fail(format!("permutation {sigma:?}: {e:?}")),
        }
        tally.permutation_checks += 1;
    }
}

//! Randomized and exhaustive checks of structural invariants.

#[path = "common/gen.rs"]
mod gen;

use std::fs;
use std::path::PathBuf;

use eqctt::cof::{canonical_dnf, entails, equivalent, satisfiable, subst_cof, to_dnf, valid};
use eqctt::cubelab::{
    automorphisms, enumerate_hom, ez_factor, iso_search, representable, triangulate, CubeMap, IsoOutcome,
};
use eqctt::parse::{parse_module, parse_term_in};
use eqctt::print::{print_module, print_term_in};
use eqctt::syntax::{DeclKind, Subst, SubstEntry};
use eqctt::{alpha_eq, Cof, Dim, Term};
use proptest::prelude::*;

fn dim() -> impl Strategy<Value = Dim> {
    prop_oneof![Just(Dim::Zero), Just(Dim::One), (0usize..4).prop_map(Dim::Var)]
}

fn cof() -> impl Strategy<Value = Cof> {
    let leaf = prop_oneof![
        1 => Just(Cof::Top),
        1 => Just(Cof::Bot),
        8 => (dim(), dim()).prop_map(|(r, s)| Cof::eq(r, s)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Cof::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Cof::or(a, b)),
        ]
    })
}

fn assignment() -> impl Strategy<Value = Vec<Dim>> {
    proptest::collection::vec(dim(), 4)
}

fn cube_map(dom: usize, cod: usize) -> impl Strategy<Value = CubeMap> {
    let homs = enumerate_hom(dom, cod);
    (0..homs.len()).prop_map(move |i| homs[i].clone())
}

fn composable() -> impl Strategy<Value = (CubeMap, CubeMap, CubeMap)> {
    (0usize..=3, 0usize..=3, 0usize..=3, 0usize..=3)
        .prop_flat_map(|(a, b, c, d)| (cube_map(a, b), cube_map(b, c), cube_map(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn entailment_is_reflexive(phi in cof()) {
        prop_assert!(entails(std::slice::from_ref(&phi), &phi));
    }

    #[test]
    fn entailment_is_transitive(a in cof(), b in cof(), c in cof()) {
        if entails(std::slice::from_ref(&a), &b) && entails(std::slice::from_ref(&b), &c) {
            prop_assert!(entails(std::slice::from_ref(&a), &c));
        }
    }

    #[test]
    fn entailment_is_monotone_in_hypotheses(hyps in proptest::collection::vec(cof(), 0..3), extra in cof(), goal in cof()) {
        if entails(&hyps, &goal) {
            let mut more = hyps.clone();
            more.push(extra);
            prop_assert!(entails(&more, &goal));
        }
    }

    #[test]
    fn satisfiable_iff_not_entailing_bottom(phi in cof()) {
        prop_assert_eq!(satisfiable(&phi), !entails(std::slice::from_ref(&phi), &Cof::Bot));
    }

    #[test]
    fn validity_is_stable_under_substitution(phi in cof(), rho in assignment()) {
        if valid(&phi) {
            prop_assert!(valid(&subst_cof(&phi, &mut |v| rho[v])));
        }
    }

    #[test]
    fn substitution_commutes_with_dnf(phi in cof(), rho in assignment()) {
        let direct = subst_cof(&phi, &mut |v| rho[v]);
        let via_dnf = subst_cof(&to_dnf(&phi).to_cof(), &mut |v| rho[v]);
        prop_assert!(equivalent(&direct, &via_dnf));
    }

    #[test]
    fn canonical_forms_decide_equivalence(a in cof(), b in cof()) {
        prop_assert_eq!(canonical_dnf(&a) == canonical_dnf(&b), equivalent(&a, &b));
    }

    #[test]
    fn entailment_respects_orientation(r in dim(), s in dim(), goal in cof()) {
        prop_assert_eq!(entails(&[Cof::eq(r, s)], &goal), entails(&[Cof::eq(s, r)], &goal));
    }

    #[test]
    fn cube_composition_is_associative((f, g, h) in composable()) {
        prop_assert_eq!(h.after(&g).after(&f), h.after(&g.after(&f)));
        prop_assert_eq!(CubeMap::identity(f.cod).after(&f), f.clone());
        prop_assert_eq!(f.after(&CubeMap::identity(f.dom)), f);
    }

    #[test]
    fn ez_factorization_is_stable_under_automorphisms(f in (0usize..=3, 0usize..=3).prop_flat_map(|(m, n)| cube_map(m, n))) {
        // Precomposing with an automorphism of the target changes only the
        // mono part; the split epi part keeps its codomain.
        for s in automorphisms(f.cod) {
            let g = s.after(&f);
            prop_assert_eq!(ez_factor(&g).e.cod, ez_factor(&f).e.cod);
        }
    }

    #[test]
    fn substitution_avoids_capture(seed in any::<u64>()) {
        // Substituting an open term under a binder keeps its free variable
        // pointing outside the binder.
        let scope = [("x", false), ("y", false)];
        let t = parse_term_in("\\z. (x, z)", &[], &scope).unwrap();
        let replacement = if seed % 2 == 0 { "y" } else { "(y, y)" };
        let u = parse_term_in(replacement, &[], &scope).unwrap();
        let s = Subst::new(vec![SubstEntry::Var(0), SubstEntry::Term(u.clone())], 2);
        let got = t.subst(&s);
        let expected = parse_term_in(&format!("\\z. ({replacement}, z)"), &[], &scope).unwrap();
        prop_assert!(alpha_eq(&got, &expected));
    }
}

#[test]
fn generated_terms_survive_printing() {
    let mut g = gen::Gen::new(7);
    let names: Vec<String> = gen::SCOPE.iter().map(|(n, _)| n.to_string()).collect();
    for _ in 0..300 {
        let src = g.term(3, &["x".to_string()], &["i".to_string(), "j".to_string()]).print();
        let t = parse_term_in(&src, gen::GLOBALS, gen::SCOPE).unwrap();
        let printed = print_term_in(&names, &t);
        let back =
            parse_term_in(&printed, gen::GLOBALS, gen::SCOPE).unwrap_or_else(|e| panic!("reparse of {printed}: {e}"));
        assert!(alpha_eq(&t, &back), "{src}\n{printed}");
    }
}

#[test]
fn corpus_survives_printing() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = fs::read_to_string(&path).unwrap();
        let decls = parse_module(&src).unwrap();
        let again = parse_module(&print_module(&decls)).unwrap();
        assert_eq!(decls.len(), again.len(), "{}", path.display());
        for (a, b) in decls.iter().zip(&again) {
            assert_eq!(a.name, b.name);
            assert!(alpha_eq(a.ty(), b.ty()), "{}: {}", path.display(), a.name);
            if let (DeclKind::Def { body: x, .. }, DeclKind::Def { body: y, .. }) = (&a.kind, &b.kind) {
                assert!(alpha_eq(x, y), "{}: {}", path.display(), a.name);
            }
        }
        for d in &decls {
            let mut ok = true;
            let mut visit =
                |t: &Term| t.for_each_comp(&mut |c| ok &= c.src.len() == c.arity() && c.tgt.len() == c.arity());
            match &d.kind {
                DeclKind::Def { ty, body } => {
                    visit(ty);
                    visit(body);
                }
                DeclKind::Postulate { ty } => visit(ty),
            }
            assert!(ok, "{}: {}", path.display(), d.name);
        }
    }
}

#[test]
fn triangulation_preserves_products() {
    for m in 0..=2 {
        for n in 0..=(3 - m) {
            let (im, inn) = (representable(m, 3).0, representable(n, 3).0);
            let lhs = triangulate(&im.product(&inn).unwrap());
            let rhs = triangulate(&im).product(&triangulate(&inn)).unwrap();
            assert!(matches!(iso_search(&lhs, &rhs, 10_000_000).unwrap(), IsoOutcome::Found(_)), "T(I^{m} x I^{n})");
        }
    }
}

#[test]
fn representables_are_functorial() {
    for n in 0..=3 {
        representable(n, 3).0.check_functorial().unwrap();
        triangulate(&representable(n, 3).0).check_functorial().unwrap();
    }
}

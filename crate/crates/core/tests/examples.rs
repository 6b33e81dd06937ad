//! Worked examples checked end to end through the public API.

use tracecodes::curves::{self, CurveSpec, Status};
use tracecodes::gf::Fe;
use tracecodes::linpoly::{FamilySpec, LinearizedPoly};
use tracecodes::quadform::QuadForm;
use tracecodes::spectra::{self, brute_spectrum, cwe_brute, CodeSpec, Variant, DEFAULT_BUDGET};
use tracecodes::trace::TraceCtx;

#[test]
fn generic_beta_gives_an_interior_curve() {
    let ctx = TraceCtx::new(2, 1, 4).unwrap();
    let f = ctx.field();
    let r = LinearizedPoly::monomial(1, 1, Fe::ONE);
    let form = QuadForm::new(&ctx, r.clone());
    let st = form.structure();
    let mut interior = 0;
    for beta in f.elements() {
        let rep = curves::optimality_status(&ctx, &CurveSpec::new(r.clone(), beta)).unwrap();
        if form.beta_class(&st, beta) == tracecodes::quadform::BetaClass::Generic {
            assert_eq!(rep.status, Status::Interior);
            assert_eq!(rep.points, 17);
            interior += 1;
        }
    }
    assert_eq!(interior, 12);
    let alpha = f.alpha();
    let rep = curves::optimality_status(&ctx, &CurveSpec::new(r, alpha)).unwrap();
    assert_eq!(rep.status, Status::Interior);
}

#[test]
fn full_rank_monomials_are_never_optimal() {
    // v = l and r = m: v != (m - r)/2 for every beta.
    let ctx = TraceCtx::new(3, 1, 4).unwrap();
    let f = ctx.field();
    let gamma = f.alpha();
    let r = LinearizedPoly::monomial(1, 1, gamma);
    assert_eq!(QuadForm::new(&ctx, r.clone()).rank(), 4);
    for beta in f.elements() {
        let rep = curves::optimality_status(&ctx, &CurveSpec::new(r.clone(), beta)).unwrap();
        assert_eq!(rep.status, Status::Interior);
    }
}

#[test]
fn non_injective_families_are_rejected() {
    // l = m/2: some nonzero gamma give the zero form.
    let ctx = TraceCtx::new(3, 1, 4).unwrap();
    let fam = FamilySpec::new(3, 1, 4, vec![2]).unwrap();
    let dist = tracecodes::klapper::tally_family(&ctx, &fam).unwrap();
    assert_eq!(dist.zero, 9);
    assert!(spectra::predict_general(3, 4, &dist, Variant::Base).is_err());
    let spec = CodeSpec::new(fam, Variant::Base, false).unwrap();
    assert!(!brute_spectrum(&ctx, &spec, DEFAULT_BUDGET).unwrap().injective);
}

#[test]
fn odd_rank_families_are_rejected() {
    let ctx = TraceCtx::new(3, 1, 4).unwrap();
    let fam = FamilySpec::new(3, 1, 4, vec![0, 1]).unwrap();
    let dist = tracecodes::klapper::tally_family(&ctx, &fam).unwrap();
    assert!(dist.odd > 0);
    assert!(spectra::predict_general(3, 4, &dist, Variant::Base).is_err());
}

#[test]
fn ternary_enumerators() {
    let ctx = TraceCtx::new(3, 1, 4).unwrap();
    let fam = FamilySpec::monomial(3, 1, 4, 1).unwrap();
    let short = CodeSpec::new(fam.clone(), Variant::Base, true).unwrap();
    let brute = cwe_brute(&ctx, &short, DEFAULT_BUDGET).unwrap().compress().unwrap();
    assert_eq!(brute, spectra::cwe_monomial(3, 4, 1).unwrap());
    let rows: Vec<(u64, u64, u128)> = brute.terms.iter().map(|t| (t.a, t.b, t.count)).collect();
    assert_eq!(rows, vec![(20, 0, 1), (8, 6, 60), (2, 9, 20)]);

    let long = CodeSpec::new(fam, Variant::Base, false).unwrap();
    let brute = cwe_brute(&ctx, &long, DEFAULT_BUDGET).unwrap().compress().unwrap();
    let dist = tracecodes::klapper::rank_distribution_monomial(3, 4, 1).unwrap();
    assert_eq!(brute, spectra::cwe_general(3, 4, &dist).unwrap());
}

#[test]
fn two_term_enumerator_exponents() {
    let cwe = spectra::cwe_l3l(3, 8, 1).unwrap();
    let dist = tracecodes::klapper::rank_distribution_l3l(3, 8, 1).unwrap();
    assert_eq!(cwe, spectra::cwe_general(3, 8, &dist).unwrap());
    assert_eq!(cwe.terms.len(), 5);
    assert!(cwe.terms.iter().all(|t| t.a + 2 * t.b == 6560));
    assert_eq!(cwe.terms.iter().map(|t| t.count).sum::<u128>(), 3u128.pow(16));
}

use proptest::prelude::*;

use tracecodes::arith::{gcd, gcd_u128};
use tracecodes::curves::{self, CurveSpec, Status};
use tracecodes::gf::{Fe, Field};
use tracecodes::klapper::{classify_monomial, m_counts, EllParams};
use tracecodes::linpoly::{enumerate_family, FamilySpec, LinearizedPoly};
use tracecodes::quadform::QuadForm;
use tracecodes::spectra::{self, build_codeword, weight, CodeSpec, Variant};
use tracecodes::trace::TraceCtx;

/// `(p, s, m)` with tables.
const SMALL: [(u32, u32, u32); 7] = [(2, 1, 4), (2, 1, 6), (2, 2, 3), (3, 1, 4), (3, 2, 2), (5, 1, 3), (7, 1, 2)];

fn ctx_strategy() -> impl Strategy<Value = TraceCtx> {
    prop::sample::select(SMALL.to_vec()).prop_map(|(p, s, m)| TraceCtx::new(p, s, m).unwrap())
}

fn elem(ctx: &TraceCtx, raw: u32) -> Fe {
    Fe(raw % ctx.size())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_additive(ctx in ctx_strategy(), a: u32, b: u32) {
        let f = ctx.field();
        let (x, y) = (elem(&ctx, a), elem(&ctx, b));
        prop_assert_eq!(f.frobenius(f.add(x, y), 1), f.add(f.frobenius(x, 1), f.frobenius(y, 1)));
        prop_assert_eq!(f.pow(x, f.p() as u64), f.frobenius(x, 1));
        prop_assert_eq!(f.frobenius(x, f.n()), x);
    }

    #[test]
    fn linearized_eval_is_linear(ctx in ctx_strategy(), a: u32, b: u32, c0: u32, c1: u32, lam: u8) {
        let f = ctx.field();
        let sub = ctx.sub();
        let m = ctx.m();
        let exps: Vec<u32> = if m > 2 { vec![0, 1, 2] } else { vec![0, 1] };
        let coeffs: Vec<Fe> = exps.iter().enumerate().map(|(i, _)| elem(&ctx, c0.wrapping_mul(i as u32 + 1) ^ c1)).collect();
        let r = LinearizedPoly::new(ctx.s(), exps, coeffs).unwrap();
        let (x, y) = (elem(&ctx, a), elem(&ctx, b));
        prop_assert_eq!(r.eval(f, f.add(x, y)), f.add(r.eval(f, x), r.eval(f, y)));
        let l = sub.elem(lam % sub.q() as u8);
        prop_assert_eq!(r.eval(f, f.mul(l, x)), f.mul(l, r.eval(f, x)));
    }

    #[test]
    fn counts_sum_and_radical(ctx in ctx_strategy(), c0: u32, c1: u32, b: u32) {
        let m = ctx.m();
        let exps: Vec<u32> = (1..m).take(2).collect();
        let coeffs = vec![elem(&ctx, c0), elem(&ctx, c1)][..exps.len()].to_vec();
        let form = QuadForm::new(&ctx, LinearizedPoly::new(ctx.s(), exps, coeffs).unwrap());
        let qlog = form.log_table().unwrap();
        let h = form.histogram(&qlog, elem(&ctx, b));
        prop_assert_eq!(h.iter().sum::<u64>(), ctx.size() as u64);

        let f = ctx.field();
        let rad = form.radical();
        let r = form.rank();
        let q = ctx.q() as u64;
        // |V| = q^{m - r}: the radical basis has m - r vectors.
        prop_assert_eq!(rad.len() as u32, m - r);
        let mut span = std::collections::BTreeSet::new();
        let mut coords = vec![0u8; rad.len()];
        loop {
            span.insert(ctx.combine(&rad, &coords));
            let Some(i) = coords.iter().position(|&c| (c as u64) + 1 < q) else { break };
            coords[i] += 1;
            coords[..i].iter_mut().for_each(|c| *c = 0);
        }
        prop_assert_eq!(span.len() as u64, q.pow(m - r));
        let x = elem(&ctx, b.rotate_left(7));
        for &v in &span {
            prop_assert_eq!(form.eval(v), 0);
            prop_assert_eq!(form.eval(f.add(x, v)), form.eval(x));
        }
        if r > 0 && r % 2 == 0 {
            let fast = form.profile().eps.unwrap();
            prop_assert_eq!(form.type_of(r).unwrap(), fast);
            prop_assert_eq!(form.type_by_field_count(r).unwrap(), fast);
        }
    }

    #[test]
    fn gcd_and_power_counts(qi in 0usize..6, m in 2u32..24, l in 1u32..23) {
        let q = [2u64, 3, 4, 5, 7, 9][qi];
        prop_assume!(l < m);
        let d = gcd(m as u64, l as u64) as u32;
        prop_assume!((m / d) % 2 == 0);
        let big = (q as u128).pow(m) - 1;
        let e = (q as u128).pow(l) + 1;
        prop_assert_eq!(gcd_u128(big, e), (q as u128).pow(d) + 1);
        if big < u64::MAX as u128 {
            let (mm, mp) = m_counts(q, m, l).unwrap();
            prop_assert_eq!(mm as u128 * ((q as u128).pow(d) + 1), big);
            prop_assert_eq!(mp, mm * q.pow(d));
        }
    }

    #[test]
    fn classification_on_random_gamma(idx in 0usize..5, raw: u32, lsel: u32) {
        let (p, s, m) = [(2, 1, 16), (2, 2, 8), (3, 1, 10), (5, 1, 6), (2, 4, 4)][idx];
        let ctx = TraceCtx::new(p, s, m).unwrap();
        let ells: Vec<u32> = (1..m).filter(|&l| (m / gcd(m as u64, l as u64) as u32) % 2 == 0).collect();
        let ell = ells[lsel as usize % ells.len()];
        let gamma = Fe(1 + raw % (ctx.size() - 1));
        let c = classify_monomial(&ctx, gamma, ell).unwrap();
        let form = QuadForm::new(&ctx, LinearizedPoly::monomial(s, ell, gamma));
        let prof = form.profile();
        prop_assert_eq!(c.profile(), prof);
        if prof.rank > 0 {
            prop_assert_eq!(form.type_of(prof.rank).unwrap(), prof.eps.unwrap());
        }
    }

    #[test]
    fn curve_routes_agree(idx in 0usize..4, c0: u32, c1: u32, b: u32) {
        let (p, m) = [(2, 4), (2, 6), (3, 4), (5, 2)][idx];
        let ctx = TraceCtx::new(p, 1, m).unwrap();
        let exps: Vec<u32> = (1..m).take(2).collect();
        let coeffs = vec![elem(&ctx, c0), elem(&ctx, c1)][..exps.len()].to_vec();
        let spec = CurveSpec::new(LinearizedPoly::new(1, exps, coeffs).unwrap(), elem(&ctx, b));
        // Errors if the weight and solution routes, or the endpoint and
        // weight-class routes, disagree.
        let rep = curves::optimality_status(&ctx, &spec).unwrap();
        if rep.status != Status::Degenerate {
            let (lo, hi) = (rep.hw_lo.unwrap(), rep.hw_hi.unwrap());
            prop_assert!(lo <= rep.points as i128 && rep.points as i128 <= hi);
        }
    }

    #[test]
    fn long_word_repeats_short_word(idx in 0usize..4, g: u32, bsym: u8) {
        let (p, s, m, l) = [(2, 1, 8, 1), (2, 1, 6, 1), (3, 1, 4, 1), (2, 2, 4, 1)][idx];
        let ctx = TraceCtx::new(p, s, m).unwrap();
        let fam = FamilySpec::monomial(p, s, m, l).unwrap();
        let r = LinearizedPoly::monomial(s, l, elem(&ctx, g));
        let b = bsym % ctx.q() as u8;
        for variant in [Variant::Base, Variant::PlusB] {
            let short = CodeSpec::new(fam.clone(), variant, true).unwrap();
            let long = CodeSpec::new(fam.clone(), variant, false).unwrap();
            let bb = if variant.has_b() { b } else { 0 };
            let ws = build_codeword(&ctx, &short, &r, Fe::ZERO, bb).unwrap();
            let wl = build_codeword(&ctx, &long, &r, Fe::ZERO, bb).unwrap();
            let d = long.length().unwrap() / short.length().unwrap();
            prop_assert_eq!(d, short.divisor().unwrap());
            for (i, chunk) in wl.chunks(ws.len()).enumerate() {
                prop_assert_eq!(chunk, &ws[..], "copy {}", i);
            }
            prop_assert_eq!(weight(&wl), d * weight(&ws));
        }
    }
}

#[test]
fn relative_trace_fibers() {
    for (p, n, d) in [(2, 6, 2), (2, 6, 3), (3, 4, 2), (2, 8, 4), (5, 2, 1)] {
        let f = Field::new(p, n).unwrap();
        let mut fibers = std::collections::BTreeMap::new();
        for x in f.elements() {
            *fibers.entry(f.rel_trace(x, d).unwrap()).or_insert(0u64) += 1;
        }
        assert_eq!(fibers.len() as u64, (p as u64).pow(d));
        assert!(fibers.values().all(|&c| c == (p as u64).pow(n - d)));
    }
}

#[test]
fn field_construction_is_deterministic() {
    for (p, n) in [(2, 8), (3, 8), (5, 4), (7, 3), (2, 16)] {
        let a = Field::new(p, n).unwrap();
        let b = Field::new(p, n).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.alpha(), b.alpha());
    }
}

#[test]
fn family_enumeration_is_a_bijection() {
    let ctx = TraceCtx::new(3, 1, 3).unwrap();
    let fam = FamilySpec::new(3, 1, 3, vec![0, 1]).unwrap();
    let all: std::collections::BTreeSet<Vec<Fe>> =
        enumerate_family(&ctx, &fam).unwrap().map(|r| r.coeffs).collect();
    assert_eq!(all.len(), 27 * 27);
}

/// Every field with `q^m <= 2^12` exhaustively, for every admissible `l`;
/// larger fields up to `2^16` are covered for `l = 1` here and for random
/// `(gamma, l)` by the property above.
#[test]
fn classification_exhaustive() {
    let mut fields = Vec::new();
    for (p, s) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1), (13, 1)] {
        let q = (p as u64).pow(s);
        let mut m = 2;
        while q.pow(m) <= 1 << 16 {
            fields.push((p, s, m));
            m += 1;
        }
    }
    let mut checked = 0u64;
    for (p, s, m) in fields {
        let ctx = TraceCtx::new(p, s, m).unwrap();
        let small = (ctx.size() as u64) <= 1 << 12;
        for ell in 1..m {
            if (m / gcd(m as u64, ell as u64) as u32) % 2 == 1 || (!small && ell > 1) {
                continue;
            }
            let pr = EllParams::new(ctx.q() as u64, m, ell).unwrap();
            let mut small_rank = 0u64;
            for gamma in ctx.field().elements().skip(1) {
                let c = classify_monomial(&ctx, gamma, ell).unwrap();
                let form = QuadForm::new(&ctx, LinearizedPoly::monomial(s, ell, gamma));
                let prof = form.profile();
                assert_eq!(c.profile(), prof, "q={} m={m} l={ell} gamma={gamma:?}", ctx.q());
                if small && prof.rank > 0 {
                    assert_eq!(form.type_of(prof.rank).unwrap(), prof.eps.unwrap());
                }
                if prof.rank < m {
                    small_rank += 1;
                }
                checked += 1;
            }
            assert_eq!(small_rank, pr.n().unwrap());
        }
    }
    assert!(checked > 100_000);
}

#[test]
fn frequency_sums_and_symmetry() {
    for (p, s, m, l) in [(2, 1, 4, 1), (2, 1, 6, 1), (2, 1, 8, 1), (2, 1, 8, 3), (2, 1, 10, 1), (2, 1, 12, 2)] {
        let q = (p as u64).pow(s);
        for v in Variant::ALL {
            let pred = spectra::predict_monomial_long(q, m, l, v).unwrap();
            let k = pred.params.k;
            assert_eq!(pred.spectrum.total(), (q as u128).pow(k));
            if v.has_b() {
                assert!(pred.spectrum.is_symmetric(), "q={q} m={m} l={l} {v}");
            }
        }
    }
    for v in Variant::ALL {
        let pred = spectra::predict_l3l(3, 8, 1, v).unwrap();
        assert_eq!(pred.spectrum.total(), 3u128.pow(pred.params.k));
    }
}

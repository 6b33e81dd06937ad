//! Artin-Schreier curves `y^p - y = x R(x) + beta x` over `F_{p^m}`: point
//! counts, genus, Hasse-Weil bounds and optimality.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{frac_int, ipow, pow_frac, Frac};
use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::klapper::{branch_of, l3l_params, Branch, EllParams};
use crate::linpoly::LinearizedPoly;
use crate::quadform::{histogram_with, profile_from_gram, BetaClass, QuadForm};
use crate::spectra::weight;
use crate::trace::TraceCtx;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub r: LinearizedPoly,
    pub beta: Fe,
}

impl CurveSpec {
    pub fn new(r: LinearizedPoly, beta: Fe) -> CurveSpec {
        CurveSpec { r, beta }
    }

    /// `v` with `deg R = p^v`; None for `R = 0`.
    pub fn v(&self) -> Option<u32> {
        self.r.p_degree()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Maximal,
    Minimal,
    Interior,
    /// `R = 0`: no genus or optimality claim is made.
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub points: u64,
    pub genus: Option<u64>,
    pub hw_lo: Option<i128>,
    pub hw_hi: Option<i128>,
    pub status: Status,
}

fn require_prime_base(ctx: &TraceCtx) -> Result<()> {
    if ctx.s() != 1 {
        return Err(Error::Invalid("curves are defined over a prime base field (s = 1)".into()));
    }
    if !ctx.has_tables() {
        return Err(Error::FieldTooLarge { p: ctx.p(), n: ctx.m(), limit: crate::gf::DEFAULT_TABLE_LIMIT });
    }
    Ok(())
}

fn rhs(ctx: &TraceCtx, spec: &CurveSpec, x: Fe) -> Fe {
    let f = ctx.field();
    f.add(f.mul(x, spec.r.eval(f, x)), f.mul(spec.beta, x))
}

/// `#{y : y^p - y = c}` for every `c`, indexed by packed value.
pub fn artin_schreier_fibers(ctx: &TraceCtx) -> Vec<u32> {
    let f = ctx.field();
    let mut fibers = vec![0u32; ctx.size() as usize];
    for y in f.elements() {
        let c = f.sub(f.frobenius(y, 1), y);
        fibers[c.0 as usize] += 1;
    }
    fibers
}

/// Points through the codeword weight: `p^{m+1} + 1 - p w`.
pub fn points_by_weight(ctx: &TraceCtx, spec: &CurveSpec) -> Result<u64> {
    require_prime_base(ctx)?;
    let f = ctx.field();
    let word: Vec<u8> = (0..f.order() as i64).map(|i| ctx.trace(rhs(ctx, spec, f.exp(i)))).collect();
    let p = ctx.p() as i128;
    let pts = ipow(p, ctx.m() + 1)? + 1 - p * weight(&word) as i128;
    Ok(pts as u64)
}

/// Points by solving `y^p - y = f(x)` for every affine `x`, plus infinity.
pub fn points_by_solutions(ctx: &TraceCtx, spec: &CurveSpec, fibers: &[u32]) -> Result<u64> {
    require_prime_base(ctx)?;
    let affine: u64 = ctx.field().elements().map(|x| fibers[rhs(ctx, spec, x).0 as usize] as u64).sum();
    Ok(affine + 1)
}

/// Rational points including the point at infinity; both routes must agree.
pub fn count_points(ctx: &TraceCtx, spec: &CurveSpec) -> Result<u64> {
    let a = points_by_weight(ctx, spec)?;
    let b = points_by_solutions(ctx, spec, &artin_schreier_fibers(ctx))?;
    if a != b {
        return Err(Error::Mismatch(format!("point counts differ: {a} by weight, {b} by solutions")));
    }
    Ok(a)
}

/// `g = (p - 1) p^v / 2`.
pub fn genus(p: u32, spec: &CurveSpec) -> Result<u64> {
    let v = spec.v().ok_or_else(|| Error::Invalid("genus is undefined for R = 0".into()))?;
    Ok((p as u64 - 1) * (p as u64).pow(v) / 2)
}

/// `p^m + 1 -+ (p - 1) p^{v + m/2}`.
pub fn hasse_weil(p: u32, m: u32, v: u32) -> Result<(i128, i128)> {
    if m % 2 == 1 {
        return Err(Error::Hypothesis(format!("m must be even for the Hasse-Weil endpoints (m = {m})")));
    }
    let pi = p as i128;
    let c = ipow(pi, m)? + 1;
    let r = (pi - 1) * ipow(pi, v + m / 2)?;
    Ok((c - r, c + r))
}

/// Status from the Hasse-Weil endpoints.
fn status_by_points(points: u64, lo: i128, hi: i128) -> Result<Status> {
    let pts = points as i128;
    if pts < lo || pts > hi {
        return Err(Error::Mismatch(format!("{pts} points lie outside the Hasse-Weil interval [{lo}, {hi}]")));
    }
    Ok(if pts == hi {
        Status::Maximal
    } else if pts == lo {
        Status::Minimal
    } else {
        Status::Interior
    })
}

/// Status from the rank/type of `Q_R` and the weight class of the word.
fn status_by_class(ctx: &TraceCtx, spec: &CurveSpec, w: u64) -> Result<Status> {
    let p = ctx.p() as i128;
    let m = ctx.m();
    let v = spec.v().expect("nonzero R");
    let form = QuadForm::new(ctx, spec.r.clone());
    let st = form.structure();
    let prof = profile_from_gram(ctx.sub(), &st.gram, &st.diag, st.m);
    let r = prof.rank;
    if r % 2 == 1 || 2 * v + r != m {
        return Ok(Status::Interior);
    }
    let big_a = ipow(p, m)? - ipow(p, m - 1)?;
    let u = ipow(p, m - r / 2 - 1)?;
    let w2 = |i: u32| if i == 1 { big_a - (p - 1) * u } else { big_a + (p - 1) * u };
    let w3 = |i: u32| if i == 1 { big_a + u } else { big_a - u };
    let w = w as i128;
    let status = if w == w2(1) {
        Status::Maximal
    } else if w == w2(2) {
        Status::Minimal
    } else if p == 2 && w == w3(2) {
        Status::Maximal
    } else if p == 2 && w == w3(1) {
        Status::Minimal
    } else {
        Status::Interior
    };
    Ok(status)
}

/// Full report; the endpoint test and the weight-class test must agree.
pub fn optimality_status(ctx: &TraceCtx, spec: &CurveSpec) -> Result<CurveReport> {
    let points = count_points(ctx, spec)?;
    let Some(v) = spec.v() else {
        return Ok(CurveReport { points, genus: None, hw_lo: None, hw_hi: None, status: Status::Degenerate });
    };
    let (lo, hi) = hasse_weil(ctx.p(), ctx.m(), v)?;
    let by_points = status_by_points(points, lo, hi)?;
    let p = ctx.p() as u64;
    let w = (p.pow(ctx.m() + 1) + 1 - points) / p;
    let by_class = status_by_class(ctx, spec, w)?;
    if by_points != by_class {
        return Err(Error::Mismatch(format!(
            "endpoint test says {by_points:?}, weight class says {by_class:?}"
        )));
    }
    Ok(CurveReport { points, genus: Some(genus(ctx.p(), spec)?), hw_lo: Some(lo), hw_hi: Some(hi), status: by_points })
}

/// Predicted point-count multiset `points -> #beta` for `gamma x^{p^l + 1}`
/// in a given branch, evaluated exactly (degenerate parameters give
/// fractional intermediate terms).
pub fn point_count_table(p: u32, m: u32, ell: u32, branch: Branch) -> Result<BTreeMap<u64, u64>> {
    let pr = EllParams::new(p as u64, m, ell)?;
    let pi = p as i128;
    let (mi, d) = (m as i64, pr.delta as i64);
    let h = mi / 2;
    let e = pr.eps_ell as i128;
    let pf = |x: i64| pow_frac(pi, x);
    let one = Frac::from_integer(ipow(pi, m)? + 1);
    let all = Frac::from_integer(ipow(pi, m)?);
    let rows: Vec<(Frac, Frac)> = match branch {
        Branch::OddA => vec![
            (one, all - pf(mi - 2 * d)?),
            (one - pf(d + h)? * (pi - 1), pf(mi - 2 * d - 1)? - pf(h - d - 1)? * (pi - 1)),
            (one + pf(d + h)?, (pf(mi - 2 * d - 1)? + pf(h - d - 1)?) * (pi - 1)),
        ],
        // The middle count is p^{m-1} + (p-1) p^{m/2-1}; see the notes in the README.
        Branch::OddB => vec![
            (one + pf(h)? * (pi - 1), pf(mi - 1)? + pf(h - 1)? * (pi - 1)),
            (one - pf(h)?, (pf(mi - 1)? - pf(h - 1)?) * (pi - 1)),
        ],
        Branch::OddC => vec![
            (one, all - pf(mi - 2 * d)?),
            (one + pf(d + h)? * (pi - 1), pf(mi - 2 * d - 1)? + pf(h - d - 1)? * (pi - 1)),
            (one - pf(d + h)?, (pf(mi - 2 * d - 1)? - pf(h - d - 1)?) * (pi - 1)),
        ],
        Branch::OddD => vec![
            (one - pf(h)? * (pi - 1), pf(mi - 1)? - pf(h - 1)? * (pi - 1)),
            (one + pf(h)?, (pf(mi - 1)? + pf(h - 1)?) * (pi - 1)),
        ],
        Branch::EvenPower => vec![
            (one, all - pf(mi - 2 * d)?),
            (one - pf(h + d)? * e, pf(mi - 2 * d - 1)? - pf(h - d - 1)? * e),
            (one + pf(h + d)? * e, pf(mi - 2 * d - 1)? + pf(h - d - 1)? * e),
        ],
        Branch::EvenNonPower => vec![
            (one + pf(h)? * e, pf(mi - 1)? + pf(h - 1)? * e),
            (one - pf(h)? * e, pf(mi - 1)? - pf(h - 1)? * e),
        ],
    };
    let mut out = BTreeMap::new();
    for (pts, cnt) in rows {
        let (Some(pts), Some(cnt)) = (frac_int(pts), frac_int(cnt)) else {
            return Err(Error::Mismatch(format!("non-integral row {pts:?} x {cnt:?}")));
        };
        if cnt < 0 || pts < 0 {
            return Err(Error::Mismatch(format!("negative row {pts} x {cnt}")));
        }
        if cnt > 0 {
            *out.entry(pts as u64).or_insert(0) += cnt as u64;
        }
    }
    let total: u64 = out.values().sum();
    if total != ipow(pi, m)? as u64 {
        return Err(Error::Mismatch(format!("beta counts sum to {total}, not p^m")));
    }
    Ok(out)
}

/// Closed-form `(minimal, maximal)` beta counts per `gamma` of a branch,
/// for `l | m`.
pub fn optimal_beta_counts(p: u32, m: u32, ell: u32, branch: Branch) -> Result<(u64, u64)> {
    let pr = EllParams::new(p as u64, m, ell)?;
    if m % ell != 0 {
        return Err(Error::Hypothesis(format!("l must divide m (m = {m}, l = {ell})")));
    }
    let pi = p as i128;
    let (mi, l) = (m as i64, ell as i64);
    let head = pow_frac(pi, mi - 2 * l - 1)?;
    let tail = pow_frac(pi, mi / 2 - l - 1)?;
    let as_u64 = |f: Frac| -> Result<u64> {
        frac_int(f).filter(|v| *v >= 0).map(|v| v as u64).ok_or_else(|| Error::Mismatch(format!("count {f:?}")))
    };
    Ok(match branch {
        Branch::OddA if pr.half_even() => (as_u64(head - tail * (pi - 1))?, 0),
        Branch::OddC if !pr.half_even() => (0, as_u64(head + tail * (pi - 1))?),
        Branch::EvenPower => (as_u64(head - tail)?, as_u64(head + tail)?),
        // Full rank forms: v = l never equals (m - r)/2 = 0.
        _ => (0, 0),
    })
}

/// Per-branch outcome of a full `(gamma, beta)` sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BranchScan {
    pub branch: Branch,
    pub gammas: u64,
    /// Point-count multiset of the first `gamma` in packed order.
    pub observed: BTreeMap<u64, u64>,
    pub predicted: BTreeMap<u64, u64>,
    /// Gammas whose multiset differed from the prediction.
    pub mismatched: u64,
    /// Distinct `(minimal, maximal)` beta counts seen across the branch.
    pub optimal_observed: Vec<(u64, u64)>,
    pub optimal_predicted: Option<(u64, u64)>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonomialScan {
    pub p: u32,
    pub m: u32,
    pub ell: u32,
    pub branches: Vec<BranchScan>,
    pub ok: bool,
}

/// Sweeps every `gamma != 0` and every `beta` for `y^p - y = gamma x^{p^l+1} + beta x`.
pub fn scan_monomial(ctx: &TraceCtx, ell: u32) -> Result<MonomialScan> {
    require_prime_base(ctx)?;
    let p = ctx.p();
    let m = ctx.m();
    let f = ctx.field();
    let v = ell;
    let (lo, hi) = hasse_weil(p, m, v)?;
    let size = ctx.size();
    let per_gamma: Vec<(Branch, BTreeMap<u64, u64>, (u64, u64))> = (1..size)
        .into_par_iter()
        .map(|g| -> Result<_> {
            let gamma = Fe(g);
            let branch = branch_of(ctx, gamma, ell)?;
            let form = QuadForm::new(ctx, LinearizedPoly::monomial(1, ell, gamma));
            let qlog = form.log_table()?;
            let mut counts = BTreeMap::new();
            let (mut min, mut max) = (0, 0);
            for beta in f.elements() {
                let zeros = histogram_with(ctx, &qlog, beta)[0];
                let pts = 1 + p as u64 * zeros;
                *counts.entry(pts).or_insert(0u64) += 1;
                if pts as i128 == lo {
                    min += 1;
                }
                if pts as i128 == hi {
                    max += 1;
                }
            }
            Ok((branch, counts, (min, max)))
        })
        .collect::<Result<_>>()?;

    let mut groups: BTreeMap<Branch, Vec<&(Branch, BTreeMap<u64, u64>, (u64, u64))>> = BTreeMap::new();
    for item in &per_gamma {
        groups.entry(item.0).or_default().push(item);
    }
    let mut branches = Vec::new();
    for (branch, items) in groups {
        let predicted = point_count_table(p, m, ell, branch)?;
        let mismatched = items.iter().filter(|it| it.1 != predicted).count() as u64;
        let mut optimal_observed: Vec<(u64, u64)> = items.iter().map(|it| it.2).collect();
        optimal_observed.sort_unstable();
        optimal_observed.dedup();
        let optimal_predicted = if m % ell == 0 { Some(optimal_beta_counts(p, m, ell, branch)?) } else { None };
        let ok = mismatched == 0 && optimal_predicted.map_or(true, |c| optimal_observed == vec![c]);
        branches.push(BranchScan {
            branch,
            gammas: items.len() as u64,
            observed: items[0].1.clone(),
            predicted,
            mismatched,
            optimal_observed,
            optimal_predicted,
            ok,
        });
    }
    let ok = branches.iter().all(|b| b.ok);
    Ok(MonomialScan { p, m, ell, branches, ok })
}

/// An explicit optimal curve `y^p - y = g1 x^{p^{3l}+1} + g2 x^{p^l+1} + beta x`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub modulus: Vec<u32>,
    pub alpha: Vec<u32>,
    pub gamma1: Vec<u32>,
    pub gamma2: Vec<u32>,
    pub beta: Vec<u32>,
    pub rank: u32,
    #[serde(rename = "type")]
    pub eps: i8,
    pub pairs_examined: u128,
    pub report: CurveReport,
    /// Points recounted by solving `y^p - y = f(x)` directly.
    pub recount: u64,
}

/// Searches `(g1, g2)` (both nonzero, packed order) for a form of rank
/// `m - 6l`, then the first `beta` giving an optimal curve.
pub fn l3l_optimal_witness(ctx: &TraceCtx, ell: u32, max_pairs: u128) -> Result<Witness> {
    require_prime_base(ctx)?;
    let p = ctx.p();
    let m = ctx.m();
    l3l_params(p, m, ell)?;
    if m % ell != 0 {
        return Err(Error::Hypothesis(format!("l must divide m (m = {m}, l = {ell})")));
    }
    let target = m - 6 * ell;
    let size = ctx.size();
    let chunk = 16u32;
    let mut examined: u128 = 0;
    let mut found = None;
    let mut start = 1u32;
    while found.is_none() && start < size && examined < max_pairs {
        let blocks = ((max_pairs - examined) / size as u128).min(chunk as u128) as u32;
        if blocks == 0 {
            break;
        }
        let end = (start + blocks).min(size);
        let best: Mutex<Option<(u32, u32, i8)>> = Mutex::new(None);
        crate::klapper::sweep_pairs(ctx, 3 * ell, ell, start..end, |g1, g2, prof| {
            if g2.is_zero() || prof.rank != target {
                return;
            }
            let mut b = best.lock().unwrap();
            if b.map_or(true, |(x, y, _)| (g1.0, g2.0) < (x, y)) {
                *b = Some((g1.0, g2.0, prof.eps.unwrap_or(0)));
            }
        })?;
        examined += (end - start) as u128 * size as u128;
        found = best.into_inner().unwrap();
        start = end;
    }
    let Some((g1, g2, eps)) = found else {
        return Err(Error::NotFound(format!("no rank {target} form within {examined} pairs")));
    };
    let f = ctx.field();
    let r = LinearizedPoly::new(1, vec![ell, 3 * ell], vec![Fe(g2), Fe(g1)])?;
    let form = QuadForm::new(ctx, r.clone());
    let st = form.structure();
    let prof = profile_from_gram(ctx.sub(), &st.gram, &st.diag, st.m);
    if prof.rank != target || prof.eps != Some(eps) {
        return Err(Error::Mismatch("pair sweep and direct profile disagree".into()));
    }
    let fibers = artin_schreier_fibers(ctx);
    let (lo, hi) = hasse_weil(p, m, 3 * ell)?;
    for beta in f.elements() {
        // Only betas in the zero-shift class can reach an endpoint.
        if form.beta_class(&st, beta) != BetaClass::Shift(0) {
            continue;
        }
        let spec = CurveSpec::new(r.clone(), beta);
        let pts = points_by_weight(ctx, &spec)?;
        if pts as i128 == lo || pts as i128 == hi {
            let report = optimality_status(ctx, &spec)?;
            let recount = points_by_solutions(ctx, &spec, &fibers)?;
            return Ok(Witness {
                modulus: f.modulus().to_vec(),
                alpha: f.coeffs(f.alpha()),
                gamma1: f.coeffs(Fe(g1)),
                gamma2: f.coeffs(Fe(g2)),
                beta: f.coeffs(beta),
                rank: target,
                eps,
                pairs_examined: examined,
                report,
                recount,
            });
        }
    }
    Err(Error::NotFound(format!("rank {target} form found but no beta reaches an endpoint")))
}

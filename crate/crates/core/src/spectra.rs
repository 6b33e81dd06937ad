//! The codes `C_L`, `C_{L,0}`, `C_{L,1}`, `C_{L,2}` and the shortened
//! monomial codes: brute-force spectra, closed-form spectra, complete weight
//! enumerators and a few structural checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{frac_int, gcd, ipow, pow_frac, Frac};
use crate::error::{Error, Result};
use crate::gf::{Fe, Subfield};
use crate::klapper::{
    l3l_f_values, l3l_params, l3l_profile, rank_distribution_l3l, rank_distribution_monomial, EllParams,
    RankDistribution,
};
use crate::linpoly::{family_member, FamilySpec, LinearizedPoly};
use crate::quadform::{nu, profile_from_gram, BetaClass, QuadForm, QuadFormProfile};
use crate::trace::TraceCtx;

/// Default cap on symbol evaluations for brute-force spectra.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `c_R`.
    Base,
    /// `c_{R,b}`: adds the constant words.
    PlusB,
    /// `c_R(beta)`: adds `tr(beta x)`.
    PlusBeta,
    /// `c_{R,b}(beta)`.
    PlusBoth,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Base, Variant::PlusB, Variant::PlusBeta, Variant::PlusBoth];

    pub fn has_b(self) -> bool {
        matches!(self, Variant::PlusB | Variant::PlusBoth)
    }

    pub fn has_beta(self) -> bool {
        matches!(self, Variant::PlusBeta | Variant::PlusBoth)
    }

    /// `base`, `0`, `1` or `2`.
    pub fn label(self) -> &'static str {
        match self {
            Variant::Base => "base",
            Variant::PlusB => "0",
            Variant::PlusBeta => "1",
            Variant::PlusBoth => "2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "base" => Ok(Variant::Base),
            "0" | "plus_b" => Ok(Variant::PlusB),
            "1" | "plus_beta" => Ok(Variant::PlusBeta),
            "2" | "plus_both" => Ok(Variant::PlusBoth),
            _ => Err(Error::Invalid(format!("unknown variant {s:?} (expected base, 0, 1 or 2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSpec {
    pub family: FamilySpec,
    pub variant: Variant,
    /// Keep only the first `(q^m - 1)/D` coordinates.
    pub shortened: bool,
}

impl CodeSpec {
    pub fn new(family: FamilySpec, variant: Variant, shortened: bool) -> Result<CodeSpec> {
        if shortened {
            if family.exponents.len() != 1 {
                return Err(Error::Invalid("shortened codes need a single-monomial family".into()));
            }
            if variant.has_beta() {
                return Err(Error::Invalid("shortened codes exist for variants base and 0 only".into()));
            }
        }
        Ok(CodeSpec { family, variant, shortened })
    }

    /// `D = gcd(q^m - 1, q^l + 1)` for shortened codes, else 1.
    pub fn divisor(&self) -> Result<u64> {
        if !self.shortened {
            return Ok(1);
        }
        let q = self.family.q();
        let full = ipow(q as i128, self.family.m)? as u64 - 1;
        let e = ipow(q as i128, self.family.exponents[0])? as u64 + 1;
        Ok(gcd(full, e))
    }

    pub fn length(&self) -> Result<u64> {
        let full = ipow(self.family.q() as i128, self.family.m)? as u64 - 1;
        Ok(full / self.divisor()?)
    }

    /// Number of `(R, beta, b)` triples, `q^{m s} q^{m [beta]} q^{[b]}`.
    pub fn index_count(&self) -> Result<u128> {
        let q = self.family.q() as u128;
        let mut n = self.family.size()?;
        if self.variant.has_beta() {
            n = n.checked_mul(q.pow(self.family.m)).ok_or(Error::Overflow("index count"))?;
        }
        if self.variant.has_b() {
            n = n.checked_mul(q).ok_or(Error::Overflow("index count"))?;
        }
        Ok(n)
    }
}

/// Weight distribution as an exact map `w -> A_w`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub n: u64,
    pub counts: BTreeMap<u64, u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: u64,
    pub k: u32,
    /// Minimum nonzero weight, 0 for the zero code.
    pub d: u64,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.n, self.k, self.d)
    }
}

impl Spectrum {
    pub fn new(n: u64) -> Spectrum {
        Spectrum { n, counts: BTreeMap::new() }
    }

    pub fn add(&mut self, w: u64, c: u128) {
        if c > 0 {
            *self.counts.entry(w).or_insert(0) += c;
        }
    }

    /// Adds closed-form rows, rejecting negative or out-of-range values.
    fn add_rows(&mut self, rows: &[(i128, i128)]) -> Result<()> {
        for &(w, c) in rows {
            if c < 0 {
                return Err(Error::Mismatch(format!("negative frequency {c} at weight {w}")));
            }
            if c == 0 {
                continue;
            }
            if w < 0 || w as u64 > self.n {
                return Err(Error::Mismatch(format!("weight {w} outside 0..={}", self.n)));
            }
            self.add(w as u64, c as u128);
        }
        Ok(())
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    /// `k` with `total = q^k`.
    pub fn dimension(&self, q: u64) -> Option<u32> {
        let mut t = self.total();
        let mut k = 0;
        while t > 1 && t % q as u128 == 0 {
            t /= q as u128;
            k += 1;
        }
        (t == 1).then_some(k)
    }

    pub fn min_distance(&self) -> u64 {
        self.counts.keys().copied().find(|&w| w > 0).unwrap_or(0)
    }

    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    pub fn params(&self, q: u64) -> Result<CodeParams> {
        let k = self
            .dimension(q)
            .ok_or_else(|| Error::Mismatch(format!("code size {} is not a power of {q}", self.total())))?;
        Ok(CodeParams { n: self.n, k, d: self.min_distance() })
    }

    /// `A_w = A_{n - w}` for every `w`.
    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().all(|(&w, &c)| self.counts.get(&(self.n - w)) == Some(&c))
    }

    /// Divides every weight and the length by `d`.
    pub fn divide(&self, d: u64) -> Result<Spectrum> {
        if self.n % d != 0 {
            return Err(Error::Mismatch(format!("length {} not divisible by {d}", self.n)));
        }
        let mut out = Spectrum::new(self.n / d);
        for (&w, &c) in &self.counts {
            if w % d != 0 {
                return Err(Error::Mismatch(format!("weight {w} not divisible by {d}")));
            }
            out.add(w / d, c);
        }
        Ok(out)
    }

    /// Multiplies every weight and the length by `d`.
    pub fn multiply(&self, d: u64) -> Spectrum {
        let mut out = Spectrum::new(self.n * d);
        for (&w, &c) in &self.counts {
            out.add(w * d, c);
        }
        out
    }

    /// Sorted `(weight, frequency)` rows.
    pub fn rows(&self) -> Vec<(u64, u128)> {
        self.counts.iter().map(|(&w, &c)| (w, c)).collect()
    }

    /// Keeps only weights in `keep`.
    pub fn restricted(&self, keep: impl Fn(u64) -> bool) -> Spectrum {
        Spectrum { n: self.n, counts: self.counts.iter().filter(|(&w, _)| keep(w)).map(|(&w, &c)| (w, c)).collect() }
    }
}

/// The word `(tr(x R(x) + beta x) + b)` over `x = alpha^i`.
pub fn build_codeword(ctx: &TraceCtx, spec: &CodeSpec, r: &LinearizedPoly, beta: Fe, b: u8) -> Result<Vec<u8>> {
    if !beta.is_zero() && !spec.variant.has_beta() {
        return Err(Error::Invalid(format!("variant {} has no beta term", spec.variant)));
    }
    if b != 0 && !spec.variant.has_b() {
        return Err(Error::Invalid(format!("variant {} has no constant term", spec.variant)));
    }
    if r.exponents != spec.family.exponents {
        return Err(Error::Invalid("polynomial is not in the code's family".into()));
    }
    let n = spec.length()?;
    let f = ctx.field();
    let sub = ctx.sub();
    let form = QuadForm::new(ctx, r.clone());
    Ok((0..n as i64)
        .map(|i| {
            let x = f.exp(i);
            sub.add(sub.add(form.eval(x), ctx.trace(f.mul(beta, x))), b)
        })
        .collect())
}

/// Hamming weight.
pub fn weight(word: &[u8]) -> u64 {
    word.iter().filter(|&&c| c != 0).count() as u64
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteReport {
    pub spectrum: Spectrum,
    /// Distinct `(R, beta, b)` gave distinct words (the zero word occurs once).
    pub injective: bool,
    pub evaluations: u128,
}

fn require_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Exact spectrum by enumerating every `(R, beta, b)`.
pub fn brute_spectrum(ctx: &TraceCtx, spec: &CodeSpec, budget: u128) -> Result<BruteReport> {
    check_ctx(ctx, &spec.family)?;
    if !ctx.has_tables() {
        return Err(Error::FieldTooLarge { p: ctx.p(), n: ctx.s() * ctx.m(), limit: crate::gf::DEFAULT_TABLE_LIMIT });
    }
    let n = spec.length()?;
    let members = spec.family.size()?;
    let betas: u128 = if spec.variant.has_beta() { ctx.size() as u128 } else { 1 };
    let needed = (members * betas).saturating_mul(n as u128);
    require_budget(needed, budget)?;

    let sub = ctx.sub();
    let q = sub.q() as usize;
    let bs: Vec<u8> = if spec.variant.has_b() { (0..q as u8).collect() } else { vec![0] };
    let tr = ctx.trace_table();
    let order = ctx.field().order() as usize;
    let len = n as usize;

    let counts = (0..members as u64)
        .into_par_iter()
        .fold(
            || vec![0u128; len + 1],
            |mut acc, idx| {
                let r = family_member(ctx, &spec.family, idx as u128);
                let qlog = QuadForm::new(ctx, r).log_table().expect("tables checked above");
                let mut h = vec![0usize; q];
                for beta in 0..betas as u32 {
                    h.iter_mut().for_each(|c| *c = 0);
                    match ctx.field().log(Fe(beta)) {
                        None => qlog[..len].iter().for_each(|&v| h[v as usize] += 1),
                        Some(lb) => {
                            let mut j = lb as usize;
                            for &v in &qlog[..len] {
                                h[sub.add(v, tr[j]) as usize] += 1;
                                j += 1;
                                if j == order {
                                    j = 0;
                                }
                            }
                        }
                    }
                    for &b in &bs {
                        acc[len - h[sub.neg(b) as usize]] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u128; len + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let mut spectrum = Spectrum::new(n);
    for (w, &c) in counts.iter().enumerate() {
        spectrum.add(w as u64, c);
    }
    let injective = spectrum.counts.get(&0) == Some(&1);
    Ok(BruteReport { spectrum, injective, evaluations: needed })
}

fn check_ctx(ctx: &TraceCtx, family: &FamilySpec) -> Result<()> {
    if ctx.p() != family.p || ctx.s() != family.s || ctx.m() != family.m {
        return Err(Error::Invalid("field context does not match the family".into()));
    }
    Ok(())
}

/// Full-length weight of `c_{R,b}(beta)` for a form with the given profile
/// and a `beta` of the given class.
pub fn weight_from_profile(
    q: u64,
    m: u32,
    profile: QuadFormProfile,
    b: u8,
    class: BetaClass,
    sub: &Subfield,
) -> Result<u64> {
    let qi = q as i128;
    let xi = sub.neg(b);
    let zeros: i128 = match (profile.rank, profile.eps, class) {
        (0, _, BetaClass::Generic) => ipow(qi, m - 1)?,
        (0, _, BetaClass::Shift(c)) => {
            if sub.add(xi, c) == 0 {
                ipow(qi, m)?
            } else {
                0
            }
        }
        (_, None, _) => return Err(Error::OddRank(profile.rank)),
        (_, Some(_), BetaClass::Generic) => ipow(qi, m - 1)?,
        (r, Some(eps), BetaClass::Shift(c)) => {
            ipow(qi, m - 1)? + eps as i128 * nu(q, sub.add(xi, c)) * ipow(qi, m - r / 2 - 1)?
        }
    };
    let w = ipow(qi, m)? - 1 - zeros + if b == 0 { 1 } else { 0 };
    Ok(w as u64)
}

/// Counts of `beta` per class: `q^m - q^r` generic and
/// `q^{r-1} + eps nu(c) q^{r/2-1}` with shift `c`.
fn class_sizes(q: i128, m: u32, r: u32, eps: i128) -> Result<(i128, i128, i128)> {
    let generic = ipow(q, m)? - ipow(q, r)?;
    let zero = ipow(q, r - 1)? + eps * (q - 1) * ipow(q, r / 2 - 1)?;
    let other = ipow(q, r - 1)? - eps * ipow(q, r / 2 - 1)?;
    Ok((generic, zero, other))
}

/// General spectra of `C_L` and its extensions from the rank/type counts.
///
/// `dist.zero` must be 1 (only `R = 0` has rank 0) and every rank even.
pub fn predict_general(q: u64, m: u32, dist: &RankDistribution, variant: Variant) -> Result<Spectrum> {
    if dist.odd > 0 {
        return Err(Error::Hypothesis(format!("{} members have odd rank", dist.odd)));
    }
    if dist.zero != 1 {
        return Err(Error::Hypothesis(format!("{} members have rank 0; only R = 0 may", dist.zero)));
    }
    let qi = q as i128;
    let qm = ipow(qi, m)?;
    let big_a = qm - ipow(qi, m - 1)?;
    let mut rows: Vec<(i128, i128)> = vec![(0, 1)];
    let forms: Vec<(u32, i128, i128)> = dist
        .counts
        .iter()
        .flat_map(|(&r, c)| [(r, 1i128, c[0] as i128), (r, -1i128, c[1] as i128)])
        .filter(|t| t.2 > 0)
        .collect();
    for &(r, _, _) in &forms {
        if r % 2 == 1 || r > m {
            return Err(Error::Hypothesis(format!("rank {r} is odd or exceeds m")));
        }
    }
    let base_w = |r: u32, eps: i128| -> Result<i128> { Ok(big_a - eps * (qi - 1) * ipow(qi, m - r / 2 - 1)?) };
    match variant {
        Variant::Base | Variant::PlusB => {
            for &(r, eps, c) in &forms {
                rows.push((base_w(r, eps)?, c));
            }
            if variant == Variant::PlusB {
                rows.push((qm - 1, qi - 1));
                for &(r, eps, c) in &forms {
                    rows.push((big_a + eps * ipow(qi, m - r / 2 - 1)? - 1, c * (qi - 1)));
                }
            }
        }
        Variant::PlusBeta | Variant::PlusBoth => {
            let mut generic = qm - 1;
            for &(r, eps, c) in &forms {
                let (g, zero, other) = class_sizes(qi, m, r, eps)?;
                let u = ipow(qi, m - r / 2 - 1)?;
                generic += c * g;
                rows.push((big_a - eps * (qi - 1) * u, c * zero));
                rows.push((big_a + eps * u, c * other * (qi - 1)));
            }
            rows.push((big_a, generic));
            if variant == Variant::PlusBoth {
                rows.push((qm - 1, qi - 1));
                rows.push((big_a - 1, (qi - 1) * generic));
                for &(r, eps, c) in &forms {
                    let u = ipow(qi, m - r / 2 - 1)?;
                    let shifted_zero = ipow(qi, r - 1)? - eps * ipow(qi, r / 2 - 1)?;
                    let shifted_other = ipow(qi, r)? - shifted_zero;
                    rows.push((big_a - 1 - eps * (qi - 1) * u, c * shifted_zero * (qi - 1)));
                    rows.push((big_a - 1 + eps * u, c * shifted_other * (qi - 1)));
                }
            }
        }
    }
    let mut s = Spectrum::new(qm as u64 - 1);
    s.add_rows(&rows)?;
    let mut expect = dist.total();
    if variant.has_beta() {
        expect *= qm as u128;
    }
    if variant.has_b() {
        expect *= q as u128;
    }
    if s.total() != expect {
        return Err(Error::Mismatch(format!("frequencies sum to {}, expected {expect}", s.total())));
    }
    if s.dimension(q).is_none() {
        return Err(Error::Mismatch(format!("frequency sum {} is not a power of {q}", s.total())));
    }
    Ok(s)
}

/// Exponent helper that rejects negative exponents.
fn pw(q: i128, e: i64) -> Result<i128> {
    if e < 0 {
        return Err(Error::Hypothesis(format!("negative exponent {e}")));
    }
    ipow(q, e as u32)
}

fn exact_div(a: i128, d: i128) -> Result<i128> {
    if a % d != 0 {
        return Err(Error::Mismatch(format!("{a} is not divisible by {d}")));
    }
    Ok(a / d)
}

/// Rows of the monomial tables in printed form. `e = (-1)^{m_l/2}`.
fn monomial_rows(pr: &EllParams, variant: Variant) -> Result<Vec<(i128, i128)>> {
    let q = pr.q as i128;
    let m = pr.m as i64;
    let d = pr.delta as i64;
    let h = m / 2;
    let e = pr.eps_ell as i128;
    let big_d = pr.d()? as i128;
    let n = pr.n()? as i128;
    let qm = pw(q, m)?;
    let a = qm - pw(q, m - 1)?;
    let qd = pw(q, d)?;
    let mut rows = vec![(0, 1)];
    match variant {
        Variant::Base | Variant::PlusB => {
            rows.push((exact_div(a + e * (q - 1) * pw(q, h + d - 1)?, big_d)?, n));
            rows.push((exact_div(a - e * (q - 1) * pw(q, h - 1)?, big_d)?, n * qd));
            if variant == Variant::PlusB {
                rows.push((exact_div(qm - 1, big_d)?, q - 1));
                rows.push((exact_div(a - e * pw(q, h + d - 1)? - 1, big_d)?, n * (q - 1)));
                rows.push((exact_div(a + e * pw(q, h - 1)? - 1, big_d)?, n * qd * (q - 1)));
            }
        }
        Variant::PlusBeta | Variant::PlusBoth => {
            let generic = n * (qm - pw(q, m - 2 * d)?) + qm - 1;
            rows.push((a, generic));
            rows.push((a - e * (q - 1) * pw(q, h - 1)?, n * qd * (pw(q, m - 1)? + e * (q - 1) * pw(q, h - 1)?)));
            rows.push((
                a + e * (q - 1) * pw(q, h + d - 1)?,
                n * (pw(q, m - 1 - 2 * d)? - e * (q - 1) * pw(q, h - d - 1)?),
            ));
            rows.push((a + e * pw(q, h - 1)?, n * qd * (pw(q, m - 1)? - e * pw(q, h - 1)?) * (q - 1)));
            rows.push((a - e * pw(q, h + d - 1)?, n * (pw(q, m - 1 - 2 * d)? + e * pw(q, h - d - 1)?) * (q - 1)));
            if variant == Variant::PlusBoth {
                rows.push((qm - 1, q - 1));
                rows.push((a - 1, generic * (q - 1)));
                rows.push((
                    a - e * (q - 1) * pw(q, h - 1)? - 1,
                    n * qd * (pw(q, m - 1)? - e * pw(q, h - 1)?) * (q - 1),
                ));
                rows.push((
                    a + e * (q - 1) * pw(q, h + d - 1)? - 1,
                    n * (pw(q, m - 1 - 2 * d)? + e * pw(q, h - d - 1)?) * (q - 1),
                ));
                rows.push((a + e * pw(q, h - 1)? - 1, n * qd * (qm - pw(q, m - 1)? + e * pw(q, h - 1)?) * (q - 1)));
                rows.push((
                    a - e * pw(q, h + d - 1)? - 1,
                    n * (pw(q, m - 2 * d)? - pw(q, m - 1 - 2 * d)? - e * pw(q, h - d - 1)?) * (q - 1),
                ));
            }
        }
    }
    Ok(rows)
}

fn monomial_params(q: u64, m: u32, ell: u32) -> Result<EllParams> {
    let pr = EllParams::new(q, m, ell)?;
    pr.require_ell_below_half()?;
    pr.require_nondegenerate()?;
    Ok(pr)
}

/// Closed-form minimum distance of the monomial codes.
pub fn monomial_distance(q: u64, m: u32, ell: u32, variant: Variant) -> Result<u64> {
    let pr = EllParams::new(q, m, ell)?;
    let qi = q as i128;
    let (m, d) = (m as i64, pr.delta as i64);
    let h = m / 2;
    let big_d = pr.d()? as i128;
    let even = pr.half_even();
    let top = pw(qi, m - 1)? * (qi - 1);
    let v = match variant {
        Variant::Base => {
            let dp = if even { pw(qi, h)? - 1 } else { pw(qi, h)? - pw(qi, d)? };
            exact_div(pw(qi, h - 1)? * (qi - 1) * dp, big_d)?
        }
        Variant::PlusB => {
            let dbar = if even { pw(qi, h + d - 1)? + 1 } else { pw(qi, h + d - 1)? * (qi - 1) };
            exact_div(top - dbar, big_d)?
        }
        Variant::PlusBeta | Variant::PlusBoth => {
            let dp = if even { pw(qi, h + d - 1)? } else { (qi - 1) * pw(qi, h + d - 1)? };
            top - dp - if variant == Variant::PlusBoth { 1 } else { 0 }
        }
    };
    Ok(v as u64)
}

/// A prediction plus its closed-form parameters.
#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub params: CodeParams,
    pub spectrum: Spectrum,
}

fn finish(q: u64, spectrum: Spectrum, k: u32, d: Option<u64>) -> Result<Prediction> {
    let params = spectrum.params(q)?;
    if params.k != k {
        return Err(Error::Mismatch(format!("dimension {} differs from the claimed {k}", params.k)));
    }
    if let Some(d) = d {
        if params.d != d {
            return Err(Error::Mismatch(format!("minimum weight {} differs from the closed form {d}", params.d)));
        }
    }
    Ok(Prediction { params, spectrum })
}

/// Shortened monomial codes (variants base and 0), lengths `(q^m - 1)/D`.
pub fn predict_monomial(q: u64, m: u32, ell: u32, variant: Variant) -> Result<Prediction> {
    if variant.has_beta() {
        return Err(Error::Invalid("shortened monomial codes have variants base and 0 only".into()));
    }
    let pr = monomial_params(q, m, ell)?;
    let mut s = Spectrum::new(pr.n()?);
    s.add_rows(&monomial_rows(&pr, variant)?)?;
    let general = predict_general(q, m, &rank_distribution_monomial(q, m, ell)?, variant)?;
    if general.divide(pr.d()?)? != s {
        return Err(Error::Mismatch("explicit table differs from the general assembly".into()));
    }
    let k = m + u32::from(variant.has_b());
    finish(q, s, k, Some(monomial_distance(q, m, ell, variant)?))
}

/// Full-length monomial codes: all four variants. Variants 1 and 2 use the
/// explicit long-code tables; base and 0 are the shortened tables scaled by `D`.
pub fn predict_monomial_long(q: u64, m: u32, ell: u32, variant: Variant) -> Result<Prediction> {
    let pr = monomial_params(q, m, ell)?;
    let general = predict_general(q, m, &rank_distribution_monomial(q, m, ell)?, variant)?;
    let k = m * (1 + u32::from(variant.has_beta())) + u32::from(variant.has_b());
    if !variant.has_beta() {
        let short = predict_monomial(q, m, ell, variant)?;
        let long = short.spectrum.multiply(pr.d()?);
        if long != general {
            return Err(Error::Mismatch("scaled shortened table differs from the general assembly".into()));
        }
        return finish(q, long, k, None);
    }
    let mut s = Spectrum::new(ipow(q as i128, m)? as u64 - 1);
    s.add_rows(&monomial_rows(&pr, variant)?)?;
    if s != general {
        return Err(Error::Mismatch("explicit table differs from the general assembly".into()));
    }
    finish(q, s, k, Some(monomial_distance(q, m, ell, variant)?))
}

/// Rows of the `<x^{p^l}, x^{p^{3l}}>` tables. Variant 0 is the nine-weight
/// table, base its first five rows; variant 2 the nineteen-weight table,
/// variant 1 its first ten rows.
fn l3l_rows(pr: &EllParams, f: &[u128; 4], variant: Variant) -> Result<Vec<(i128, i128)>> {
    let p = pr.q as i128;
    let m = pr.m as i64;
    let d = pr.delta as i64;
    let h = m / 2;
    let e = pr.eps_ell as i128;
    let pm = pw(p, m)?;
    let a = pm - pw(p, m - 1)?;
    let fj = |j: usize| f[j] as i128;
    let s = |j: usize| if j % 2 == 0 { 1i128 } else { -1 };
    let mut rows = vec![(0, 1)];
    if !variant.has_beta() {
        for j in 0..4 {
            rows.push((a - e * s(j) * (p - 1) * pw(p, h + j as i64 * d - 1)?, fj(j)));
        }
        if variant == Variant::PlusB {
            rows.push((pm - 1, p - 1));
            for j in 0..4 {
                rows.push((a + e * s(j) * pw(p, h + j as i64 * d - 1)? - 1, (p - 1) * fj(j)));
            }
        }
        return Ok(rows);
    }
    let mut generic = pm - 1;
    for j in 0..4 {
        generic += fj(j) * (pm - pw(p, m - 2 * j as i64 * d)?);
    }
    rows.push((a, generic));
    for j in 0..4 {
        let jd = j as i64 * d;
        rows.push((
            a - e * s(j) * (p - 1) * pw(p, h + jd - 1)?,
            (pw(p, m - 2 * jd - 1)? + e * s(j) * (p - 1) * pw(p, h - jd - 1)?) * fj(j),
        ));
    }
    for j in 0..4 {
        let jd = j as i64 * d;
        rows.push((
            a + e * s(j) * pw(p, h + jd - 1)?,
            (pw(p, m - 2 * jd - 1)? - e * s(j) * pw(p, h - jd - 1)?) * (p - 1) * fj(j),
        ));
    }
    if variant == Variant::PlusBoth {
        rows.push((pm - 1, p - 1));
        rows.push((a - 1, (p - 1) * generic));
        for j in 0..4 {
            let jd = j as i64 * d;
            rows.push((
                a - 1 - e * s(j) * (p - 1) * pw(p, h + jd - 1)?,
                (pw(p, m - 2 * jd - 1)? - e * s(j) * pw(p, h - jd - 1)?) * (p - 1) * fj(j),
            ));
        }
        for j in 0..4 {
            let jd = j as i64 * d;
            rows.push((
                a - 1 + e * s(j) * pw(p, h + jd - 1)?,
                (pw(p, m - 2 * jd)? - pw(p, m - 2 * jd - 1)? + e * s(j) * pw(p, h - jd - 1)?) * (p - 1) * fj(j),
            ));
        }
    }
    Ok(rows)
}

/// Closed-form minimum distances of the `<x^{p^l}, x^{p^{3l}}>` codes with
/// a constant term (variants 0 and 2).
pub fn l3l_distance(p: u32, m: u32, ell: u32, variant: Variant) -> Result<Option<u64>> {
    let pr = l3l_params(p, m, ell)?;
    let pi = p as i128;
    let (mi, d) = (m as i64, pr.delta as i64);
    let even = pr.half_even();
    let top = pw(pi, mi - 1)? * (pi - 1);
    let dp = if even { pw(pi, mi / 2 + 3 * d - 1)? + 1 } else { (pi - 1) * pw(pi, mi / 2 + 3 * d - 1)? };
    let dd = top - dp;
    Ok(match variant {
        Variant::PlusB => Some(dd as u64),
        Variant::PlusBoth => Some(if even { dd } else { dd - 1 } as u64),
        _ => None,
    })
}

pub fn predict_l3l(p: u32, m: u32, ell: u32, variant: Variant) -> Result<Prediction> {
    let pr = l3l_params(p, m, ell)?;
    let f = l3l_f_values(p, m, ell)?;
    let mut s = Spectrum::new(ipow(p as i128, m)? as u64 - 1);
    s.add_rows(&l3l_rows(&pr, &f, variant)?)?;
    let general = predict_general(p as u64, m, &rank_distribution_l3l(p, m, ell)?, variant)?;
    if s != general {
        return Err(Error::Mismatch("explicit table differs from the general assembly".into()));
    }
    let k = m * (2 + u32::from(variant.has_beta())) + u32::from(variant.has_b());
    finish(p as u64, s, k, l3l_distance(p, m, ell, variant)?)
}

/// Prediction for any code spec whose family has closed forms.
pub fn predict(spec: &CodeSpec) -> Result<Prediction> {
    let fam = &spec.family;
    let q = fam.q();
    match fam.exponents.as_slice() {
        [l] if spec.shortened => predict_monomial(q, fam.m, *l, spec.variant),
        [l] => predict_monomial_long(q, fam.m, *l, spec.variant),
        [a, b] if *b == 3 * *a && fam.s == 1 => predict_l3l(fam.p, fam.m, *a, spec.variant),
        _ => Err(Error::Invalid(format!("no closed form for family {}", fam.describe()))),
    }
}

/// Composition `(t_0, ..., t_{q-1})` over subfield indices.
pub fn composition(word: &[u8], q: usize) -> Vec<u64> {
    let mut t = vec![0u64; q];
    for &c in word {
        t[c as usize] += 1;
    }
    t
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompositionEnumerator {
    pub n: u64,
    /// Composition vector (subfield index order) to count.
    pub counts: BTreeMap<Vec<u64>, u128>,
}

/// One term `count * z_0^a (z_1 ... z_{q-1})^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CweTerm {
    pub a: u64,
    pub b: u64,
    pub count: u128,
}

/// A complete weight enumerator in which all nonzero symbols are balanced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompressedCwe {
    pub n: u64,
    pub terms: Vec<CweTerm>,
}

impl CompressedCwe {
    fn from_terms(n: u64, raw: impl IntoIterator<Item = (u64, u64, u128)>) -> CompressedCwe {
        let mut map: BTreeMap<(u64, u64), u128> = BTreeMap::new();
        for (a, b, c) in raw {
            if c > 0 {
                *map.entry((a, b)).or_insert(0) += c;
            }
        }
        let mut terms: Vec<CweTerm> = map.into_iter().map(|((a, b), count)| CweTerm { a, b, count }).collect();
        terms.sort_by(|x, y| y.a.cmp(&x.a).then(x.b.cmp(&y.b)));
        CompressedCwe { n, terms }
    }
}

impl CompositionEnumerator {
    /// Compresses, failing if some word has unequal nonzero-symbol counts.
    pub fn compress(&self) -> Result<CompressedCwe> {
        let mut raw = Vec::new();
        for (t, &c) in &self.counts {
            if t[1..].windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Mismatch(format!("composition {t:?} is not balanced")));
            }
            raw.push((t[0], t.get(1).copied().unwrap_or(0), c));
        }
        Ok(CompressedCwe::from_terms(self.n, raw))
    }
}

/// Composition tally of the base code by enumeration.
pub fn cwe_brute(ctx: &TraceCtx, spec: &CodeSpec, budget: u128) -> Result<CompositionEnumerator> {
    check_ctx(ctx, &spec.family)?;
    if spec.variant != Variant::Base {
        return Err(Error::Invalid("complete weight enumerators are computed for the base code".into()));
    }
    let n = spec.length()?;
    let members = spec.family.size()?;
    require_budget(members.saturating_mul(n as u128), budget)?;
    let q = ctx.q() as usize;
    let counts = (0..members as u64)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<Vec<u64>, u128>, idx| {
            let r = family_member(ctx, &spec.family, idx as u128);
            let word = build_codeword(ctx, spec, &r, Fe::ZERO, 0).expect("base variant");
            *acc.entry(composition(&word, q)).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(CompositionEnumerator { n, counts })
}

/// Compressed enumerator of `C_L` from its rank/type counts.
pub fn cwe_general(q: u64, m: u32, dist: &RankDistribution) -> Result<CompressedCwe> {
    let qi = q as i128;
    let n = ipow(qi, m)? - 1;
    let mut raw = vec![(n as u64, 0u64, 1u128)];
    for (&r, c) in &dist.counts {
        for (i, &count) in c.iter().enumerate() {
            let eps: i128 = if i == 0 { 1 } else { -1 };
            let u = ipow(qi, m - r / 2 - 1)?;
            let a = ipow(qi, m - 1)? + eps * (qi - 1) * u - 1;
            let b = ipow(qi, m - 1)? - eps * u;
            raw.push((a as u64, b as u64, count));
        }
    }
    Ok(CompressedCwe::from_terms(n as u64, raw))
}

fn frac_to_u64(f: Frac, what: &str) -> Result<u64> {
    match frac_int(f) {
        Some(v) if v >= 0 => Ok(v as u64),
        _ => Err(Error::Mismatch(format!("{what} = {f:?} is not a nonnegative integer"))),
    }
}

/// Compressed enumerator of the shortened code `C_l`, from the exponent
/// formulas with rational intermediate values.
pub fn cwe_monomial(q: u64, m: u32, ell: u32) -> Result<CompressedCwe> {
    let pr = monomial_params(q, m, ell)?;
    let qi = q as i128;
    let n = pr.n()? as i128;
    let big_d = pr.d()? as i128;
    let e = pr.eps_ell as i128;
    let (mi, d) = (m as i64, pr.delta as i64);
    let base = Frac::new(ipow(qi, m - 1)?, big_d);
    let one = Frac::from_integer(1);
    let f1 = one + pow_frac(qi, d - mi / 2)? * e;
    let f2 = one - pow_frac(qi, -mi / 2)? * e;
    let a1 = frac_to_u64(base * f1, "a_1")?;
    let a0 = frac_to_u64(Frac::from_integer(n) - base * f1 * (qi - 1), "a_0")?;
    let b1 = frac_to_u64(base * f2, "a'_1")?;
    let b0 = frac_to_u64(Frac::from_integer(n) - base * f2 * (qi - 1), "a'_0")?;
    let qd = ipow(qi, pr.delta)? as u128;
    Ok(CompressedCwe::from_terms(
        n as u64,
        [(n as u64, 0, 1), (a0, a1, n as u128), (b0, b1, n as u128 * qd)],
    ))
}

/// Exponents `(a_j, b_j)` of the enumerator term carried by `F_j`.
fn l3l_cwe_exponents(pr: &EllParams, j: u32) -> Result<(u64, u64)> {
    let pi = pr.q as i128;
    let mi = pr.m as i64;
    let e = pr.eps_ell as i128;
    let s = if j % 2 == 0 { 1 } else { -1 };
    let t = pw(pi, mi / 2 + j as i64 * pr.delta as i64 - 1)?;
    let a = pw(pi, mi - 1)? + s * e * (pi - 1) * t - 1;
    let b = pw(pi, mi - 1)? - s * e * t;
    Ok((a as u64, b as u64))
}

/// Compressed enumerator of `C_L` for `<x^{p^l}, x^{p^{3l}}>`.
pub fn cwe_l3l(p: u32, m: u32, ell: u32) -> Result<CompressedCwe> {
    let pr = l3l_params(p, m, ell)?;
    let f = l3l_f_values(p, m, ell)?;
    let n = ipow(p as i128, m)? as u64 - 1;
    let mut raw = vec![(n, 0u64, 1u128)];
    for (j, &fj) in f.iter().enumerate() {
        let (a, b) = l3l_cwe_exponents(&pr, j as u32)?;
        raw.push((a, b, fj));
    }
    Ok(CompressedCwe::from_terms(n, raw))
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisibilityReport {
    pub divisor: u64,
    pub offending: Vec<u64>,
    pub ok: bool,
}

/// Checks that every nonzero weight is divisible by
/// `q^{m - r_max/2 - 1} (q - 1)` (base) or `q^{m - r_max/2 - 1}` (variant 1).
pub fn divisibility_report(spectrum: &Spectrum, q: u64, m: u32, r_max: u32, variant: Variant) -> Result<DivisibilityReport> {
    let e = (m as i64) - (r_max as i64) / 2 - 1;
    let mut divisor = pw(q as i128, e)? as u64;
    match variant {
        Variant::Base => divisor *= q - 1,
        Variant::PlusBeta => {}
        _ => return Err(Error::Invalid("divisibility is stated for variants base and 1".into())),
    }
    let offending: Vec<u64> = spectrum.nonzero_weights().into_iter().filter(|w| w % divisor != 0).collect();
    Ok(DivisibilityReport { divisor, ok: offending.is_empty(), offending })
}

/// Size of the cyclotomic coset of `u` modulo `q^m - 1`.
pub fn coset_size(q: u64, m: u32, u: u64) -> Result<u32> {
    let modulus = ipow(q as i128, m)? as u128 - 1;
    let u = u as u128 % modulus;
    let mut x = u * q as u128 % modulus;
    let mut k = 1;
    while x != u {
        x = x * q as u128 % modulus;
        k += 1;
    }
    Ok(k)
}

fn coset(q: u64, m: u32, u: u64) -> Result<Vec<u128>> {
    let modulus = ipow(q as i128, m)? as u128 - 1;
    let mut out = Vec::new();
    let mut x = u as u128 % modulus;
    loop {
        out.push(x);
        x = x * q as u128 % modulus;
        if x == u as u128 % modulus {
            break;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Dimension of the trace code whose check polynomial is the product of the
/// minimal polynomials of `alpha^{-u}` (times `x - 1` if `with_ones`).
pub fn dimension_oracle(q: u64, m: u32, exponents: &[u64], with_ones: bool) -> Result<u32> {
    let mut seen: Vec<Vec<u128>> = Vec::new();
    let mut k = 0;
    for &u in exponents {
        let c = coset(q, m, u)?;
        if c.len() != m as usize {
            return Err(Error::Hypothesis(format!("coset of {u} has size {}, not m = {m}", c.len())));
        }
        if seen.iter().any(|s| s == &c) {
            return Err(Error::Hypothesis(format!("exponent {u} is conjugate to an earlier one")));
        }
        seen.push(c);
        k += m;
    }
    Ok(k + u32::from(with_ones))
}

/// Outcome of the sampled codeword check for `<x^{p^l}, x^{p^{3l}}>`.
#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub samples: u64,
    pub mismatches: u64,
    /// Sampled weights that are missing from the predicted table.
    pub off_table: u64,
    /// Sampled base words (`beta = 0`, `b = 0`) whose composition disagreed
    /// with the enumerator term of their rank class.
    pub composition_failures: u64,
    pub ok: bool,
}

/// Measures random codewords of `C_{L,2}` and compares each weight with the
/// one predicted from its form's profile and its `beta` class.
pub fn sample_l3l(ctx: &TraceCtx, ell: u32, samples: u64, seed: u64) -> Result<SampleReport> {
    let p = ctx.p();
    let m = ctx.m();
    let pr = l3l_params(p, m, ell)?;
    if ctx.s() != 1 || !ctx.has_tables() {
        return Err(Error::Invalid("sampling needs a tabulated prime-base field".into()));
    }
    let table = predict_l3l(p, m, ell, Variant::PlusBoth)?.spectrum;
    let f = ctx.field();
    let sub = ctx.sub();
    let order = f.order() as u64;
    let tr = ctx.trace_table();
    let e1 = (p as u64).pow(ell) + 1;
    let e2 = (p as u64).pow(3 * ell) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SampleReport { samples, mismatches: 0, off_table: 0, composition_failures: 0, ok: true };
    for s in 0..samples {
        let g1 = Fe(rng.gen_range(0..ctx.size()));
        let g2 = Fe(rng.gen_range(0..ctx.size()));
        // Every 16th sample is a base word, to spot-check compositions.
        let (beta, b) = if s % 16 == 0 { (Fe::ZERO, 0) } else { (Fe(rng.gen_range(0..ctx.size())), rng.gen_range(0..p) as u8) };
        let logs = [g1, g2, beta].map(|x| f.log(x));
        let mut word = Vec::with_capacity(order as usize);
        for k in 0..order {
            let mut v = b;
            if let Some(l) = logs[0] {
                v = sub.add(v, tr[((l as u64 + k * e1) % order) as usize]);
            }
            if let Some(l) = logs[1] {
                v = sub.add(v, tr[((l as u64 + k * e2) % order) as usize]);
            }
            if let Some(l) = logs[2] {
                v = sub.add(v, tr[((l as u64 + k) % order) as usize]);
            }
            word.push(v);
        }
        let w = weight(&word);
        let r = LinearizedPoly::new(1, vec![ell, 3 * ell], vec![g1, g2])?;
        let form = QuadForm::new(ctx, r);
        let st = form.structure();
        let profile = profile_from_gram(sub, &st.gram, &st.diag, st.m);
        let class = form.beta_class(&st, beta);
        if weight_from_profile(p as u64, m, profile, b, class, sub)? != w {
            report.mismatches += 1;
        }
        if !table.counts.contains_key(&w) {
            report.off_table += 1;
        }
        if b == 0 && beta.is_zero() && !(g1.is_zero() && g2.is_zero()) {
            let t = composition(&word, p as usize);
            let balanced = t[1..].windows(2).all(|x| x[0] == x[1]);
            let term_ok = match (0..4u32).find(|&j| l3l_profile(&pr, j) == profile) {
                Some(j) => l3l_cwe_exponents(&pr, j)? == (t[0], t[1]),
                None => false,
            };
            if !balanced || !term_ok {
                report.composition_failures += 1;
            }
        }
    }
    report.ok = report.mismatches == 0 && report.off_table == 0 && report.composition_failures == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u32, s: u32, m: u32, l: u32, v: Variant, short: bool) -> CodeSpec {
        CodeSpec::new(FamilySpec::monomial(p, s, m, l).unwrap(), v, short).unwrap()
    }

    #[test]
    fn words_for_trivial_arguments() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let sp = spec(2, 1, 4, 1, Variant::PlusB, false);
        let zero = LinearizedPoly::monomial(1, 1, Fe::ZERO);
        assert_eq!(weight(&build_codeword(&ctx, &sp, &zero, Fe::ZERO, 0).unwrap()), 0);
        assert_eq!(weight(&build_codeword(&ctx, &sp, &zero, Fe::ZERO, 1).unwrap()), 15);
        assert!(build_codeword(&ctx, &sp, &zero, Fe::ONE, 0).is_err());
        let short = spec(2, 1, 4, 1, Variant::Base, true);
        let w = build_codeword(&ctx, &short, &LinearizedPoly::monomial(1, 1, Fe::ONE), Fe::ZERO, 0).unwrap();
        assert_eq!(w.len(), 5);
        assert!([2, 4].contains(&weight(&w)));
    }

    #[test]
    fn shortened_word_repeats() {
        let ctx = TraceCtx::new(3, 1, 4).unwrap();
        let short = spec(3, 1, 4, 1, Variant::Base, true);
        let long = spec(3, 1, 4, 1, Variant::Base, false);
        let r = LinearizedPoly::monomial(1, 1, ctx.field().exp(5));
        let s = build_codeword(&ctx, &short, &r, Fe::ZERO, 0).unwrap();
        let l = build_codeword(&ctx, &long, &r, Fe::ZERO, 0).unwrap();
        assert_eq!(l.len(), 4 * s.len());
        for (i, c) in l.iter().enumerate() {
            assert_eq!(*c, s[i % s.len()]);
        }
    }

    #[test]
    fn small_brute_spectrum() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let rep = brute_spectrum(&ctx, &spec(2, 1, 4, 1, Variant::Base, true), DEFAULT_BUDGET).unwrap();
        assert!(rep.injective);
        assert_eq!(rep.spectrum.rows(), vec![(0, 1), (2, 10), (4, 5)]);
        assert_eq!(rep.spectrum.params(2).unwrap(), CodeParams { n: 5, k: 4, d: 2 });
        let err = brute_spectrum(&ctx, &spec(2, 1, 4, 1, Variant::PlusBoth, false), 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn weights_from_profiles() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let sub = ctx.sub();
        let p = QuadFormProfile { rank: 2, eps: Some(-1) };
        assert_eq!(weight_from_profile(2, 4, p, 0, BetaClass::Shift(0), sub).unwrap(), 12);
        assert_eq!(weight_from_profile(2, 4, p, 0, BetaClass::Generic, sub).unwrap(), 8);
        let z = QuadFormProfile { rank: 0, eps: None };
        assert_eq!(weight_from_profile(2, 4, z, 0, BetaClass::Generic, sub).unwrap(), 8);
        let full = QuadFormProfile { rank: 4, eps: Some(1) };
        assert_eq!(weight_from_profile(2, 4, full, 1, BetaClass::Generic, sub).unwrap(), 7);
    }

    #[test]
    fn example_parameters() {
        let p = predict_monomial(2, 8, 1, Variant::Base).unwrap();
        assert_eq!(p.params, CodeParams { n: 85, k: 8, d: 40 });
        assert_eq!(p.spectrum.rows(), vec![(0, 1), (40, 170), (48, 85)]);
        assert_eq!(predict_monomial(2, 8, 1, Variant::PlusB).unwrap().params, CodeParams { n: 85, k: 9, d: 37 });
        let long = predict_monomial_long(2, 8, 1, Variant::PlusBeta).unwrap();
        assert_eq!(long.params, CodeParams { n: 255, k: 16, d: 112 });
        assert_eq!(
            long.spectrum.rows(),
            vec![(0, 1), (112, 3060), (120, 23120), (128, 16575), (136, 20400), (144, 2380)]
        );
        let two = predict_monomial_long(2, 8, 1, Variant::PlusBoth).unwrap();
        assert_eq!(two.params, CodeParams { n: 255, k: 17, d: 111 });
        assert!(two.spectrum.is_symmetric());
        let base = predict_monomial_long(2, 8, 1, Variant::Base).unwrap();
        assert_eq!(base.spectrum.rows(), vec![(0, 1), (120, 170), (144, 85)]);
    }

    #[test]
    fn ternary_shortened_table() {
        let p = predict_monomial(3, 4, 1, Variant::Base).unwrap();
        assert_eq!(p.spectrum.rows(), vec![(0, 1), (12, 60), (18, 20)]);
        assert_eq!(p.params.n, 20);
    }

    #[test]
    fn l3l_frequency_sums() {
        for (v, k) in [(Variant::Base, 16), (Variant::PlusB, 17), (Variant::PlusBeta, 24), (Variant::PlusBoth, 25)] {
            let p = predict_l3l(3, 8, 1, v).unwrap();
            assert_eq!(p.params.k, k);
        }
        assert_eq!(predict_l3l(3, 8, 1, Variant::PlusB).unwrap().spectrum.nonzero_weights().len(), 9);
        assert_eq!(predict_l3l(3, 8, 1, Variant::PlusBoth).unwrap().spectrum.nonzero_weights().len(), 19);
    }

    #[test]
    fn cosets() {
        assert_eq!(dimension_oracle(2, 8, &[1, 3], false).unwrap(), 16);
        assert_eq!(dimension_oracle(2, 8, &[1, 3, 9], false).unwrap(), 24);
        assert_eq!(dimension_oracle(2, 8, &[1], true).unwrap(), 9);
        assert!(dimension_oracle(2, 8, &[1, 2], false).is_err());
        assert_eq!(coset_size(2, 8, 17).unwrap(), 4);
    }

    #[test]
    fn divisibility() {
        let s = predict_monomial_long(2, 8, 1, Variant::Base).unwrap().spectrum;
        let rep = divisibility_report(&s, 2, 8, 8, Variant::Base).unwrap();
        assert_eq!(rep.divisor, 8);
        assert!(rep.ok);
        let zero = Spectrum { n: 5, counts: [(0, 1)].into_iter().collect() };
        assert!(divisibility_report(&zero, 2, 4, 4, Variant::Base).unwrap().ok);
    }

    #[test]
    fn cwe_small() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let c = cwe_brute(&ctx, &spec(2, 1, 4, 1, Variant::Base, true), DEFAULT_BUDGET).unwrap();
        let comp = c.compress().unwrap();
        assert_eq!(comp, cwe_monomial(2, 4, 1).unwrap());
        assert_eq!(
            comp.terms,
            vec![CweTerm { a: 5, b: 0, count: 1 }, CweTerm { a: 3, b: 2, count: 10 }, CweTerm { a: 1, b: 4, count: 5 }]
        );
    }
}

//! Closed-form rank/type classification of `tr(gamma x^{q^l + 1})`, the
//! power-count lemmas, and the rank distributions of the families
//! `<x^{q^l}>` and `<x^{p^l}, x^{p^{3l}}>`.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, ipow};
use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::linalg::sym_rank_disc_in_place;
use crate::linpoly::{enumerate_family, FamilySpec, LinearizedPoly};
use crate::quadform::{QuadForm, QuadFormProfile};
use crate::trace::TraceCtx;

/// Derived parameters of `(q, m, l)`: `delta = gcd(m, l)`, `m_l = m / delta`
/// and `eps_l = (-1)^{m_l / 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllParams {
    pub q: u64,
    pub m: u32,
    pub ell: u32,
    pub delta: u32,
    pub m_ell: u32,
    pub eps_ell: i8,
}

impl EllParams {
    pub fn new(q: u64, m: u32, ell: u32) -> Result<EllParams> {
        if m == 0 || ell == 0 {
            return Err(Error::Invalid("m and l must be positive".into()));
        }
        let delta = gcd(m as u64, ell as u64) as u32;
        let m_ell = m / delta;
        if m_ell % 2 == 1 {
            return Err(Error::Hypothesis(format!(
                "m/(m,l) must be even (m = {m}, l = {ell}, m/(m,l) = {m_ell})"
            )));
        }
        let eps_ell = if (m_ell / 2) % 2 == 0 { 1 } else { -1 };
        Ok(EllParams { q, m, ell, delta, m_ell, eps_ell })
    }

    /// True when `m_l / 2` is even.
    pub fn half_even(&self) -> bool {
        self.eps_ell == 1
    }

    /// `D = q^delta + 1`.
    pub fn d(&self) -> Result<u64> {
        Ok(ipow(self.q as i128, self.delta)? as u64 + 1)
    }

    /// `n = (q^m - 1) / (q^delta + 1)`.
    pub fn n(&self) -> Result<u64> {
        let full = ipow(self.q as i128, self.m)? as u64 - 1;
        Ok(full / self.d()?)
    }

    pub fn require_ell_below_half(&self) -> Result<()> {
        if 2 * self.ell < self.m {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!("l < m/2 required (m = {}, l = {})", self.m, self.ell)))
        }
    }

    /// Excludes the degenerate case where the small rank is 0.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.m > 2 * self.delta {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "m > 2(m,l) required; rank m - 2(m,l) = 0 is degenerate (m = {}, l = {})",
                self.m, self.ell
            )))
        }
    }
}

/// Which case of the classification applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    /// Even `q`, `gamma` a `(q^l + 1)`-th power.
    EvenPower,
    /// Even `q`, `gamma` not a `(q^l + 1)`-th power.
    EvenNonPower,
    /// Odd `q`, `eps_l = 1`, `t = 0 mod L`.
    OddA,
    /// Odd `q`, `eps_l = 1`, `t != 0 mod L`.
    OddB,
    /// Odd `q`, `eps_l = -1`, `t = L/2 mod L`.
    OddC,
    /// Odd `q`, `eps_l = -1`, `t != L/2 mod L`.
    OddD,
}

impl Branch {
    /// Whether the branch has the small rank `m - 2 delta`.
    pub fn is_small_rank(self) -> bool {
        matches!(self, Branch::EvenPower | Branch::OddA | Branch::OddC)
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::EvenPower => "e",
            Branch::EvenNonPower => "f",
            Branch::OddA => "a",
            Branch::OddB => "b",
            Branch::OddC => "c",
            Branch::OddD => "d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonomialClassification {
    pub gamma: Fe,
    pub ell: u32,
    pub rank: u32,
    #[serde(rename = "type")]
    pub eps: Option<i8>,
    pub branch: Branch,
}

impl MonomialClassification {
    pub fn profile(&self) -> QuadFormProfile {
        QuadFormProfile { rank: self.rank, eps: self.eps }
    }
}

/// Branch of `gamma` decided by exponentiation only.
pub fn branch_of(ctx: &TraceCtx, gamma: Fe, ell: u32) -> Result<Branch> {
    if gamma.is_zero() {
        return Err(Error::ZeroElement);
    }
    let q = ctx.q() as u64;
    let pr = EllParams::new(q, ctx.m(), ell)?;
    let f = ctx.field();
    if ctx.p() == 2 {
        let e = ipow(q as i128, ell)? as u64 + 1;
        return Ok(if f.power_residue_test(gamma, e)? { Branch::EvenPower } else { Branch::EvenNonPower });
    }
    let l = pr.d()?;
    let order = f.order() as u64;
    debug_assert_eq!(order % l, 0);
    let g = f.pow(gamma, order / l);
    Ok(match (pr.half_even(), g) {
        (true, g) if g == Fe::ONE => Branch::OddA,
        (true, _) => Branch::OddB,
        (false, g) if g == f.neg(Fe::ONE) => Branch::OddC,
        (false, _) => Branch::OddD,
    })
}

pub fn classify_monomial(ctx: &TraceCtx, gamma: Fe, ell: u32) -> Result<MonomialClassification> {
    let branch = branch_of(ctx, gamma, ell)?;
    let pr = EllParams::new(ctx.q() as u64, ctx.m(), ell)?;
    let m = ctx.m();
    let rank = if branch.is_small_rank() { m - 2 * pr.delta } else { m };
    let eps = match branch {
        Branch::EvenPower => -pr.eps_ell,
        Branch::EvenNonPower => pr.eps_ell,
        Branch::OddA | Branch::OddD => -1,
        Branch::OddB | Branch::OddC => 1,
    };
    Ok(MonomialClassification { gamma, ell, rank, eps: (rank > 0).then_some(eps), branch })
}

/// `(M, M') = ((q^m - 1)/(q^delta + 1), q^delta M)`.
pub fn m_counts(q: u64, m: u32, ell: u32) -> Result<(u64, u64)> {
    let pr = EllParams::new(q, m, ell)?;
    let n = pr.n()?;
    Ok((n, n * (pr.d()? - 1)))
}

/// Rank/type distribution `M_{r,i}` of a family; `i = 1` is type `+1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RankDistribution {
    /// Number of members whose form has rank 0 (the zero polynomial, at least).
    pub zero: u128,
    /// Members with odd rank (never expected in the families studied here).
    pub odd: u128,
    /// `rank -> [M_{r,1}, M_{r,2}]`.
    pub counts: BTreeMap<u32, [u128; 2]>,
}

impl RankDistribution {
    pub fn add(&mut self, p: QuadFormProfile, count: u128) {
        match p.type_index() {
            Some(i) => self.counts.entry(p.rank).or_insert([0, 0])[i as usize - 1] += count,
            None if p.rank == 0 => self.zero += count,
            None => self.odd += count,
        }
    }

    pub fn merge(&mut self, other: &RankDistribution) {
        self.zero += other.zero;
        self.odd += other.odd;
        for (&r, c) in &other.counts {
            let e = self.counts.entry(r).or_insert([0, 0]);
            e[0] += c[0];
            e[1] += c[1];
        }
    }

    /// `M_{r,i}`.
    pub fn get(&self, r: u32, i: u8) -> u128 {
        self.counts.get(&r).map_or(0, |c| c[i as usize - 1])
    }

    /// `M_r = M_{r,1} + M_{r,2}`.
    pub fn m_r(&self, r: u32) -> u128 {
        self.get(r, 1) + self.get(r, 2)
    }

    /// Positive ranks that occur.
    pub fn ranks(&self) -> Vec<u32> {
        self.counts.iter().filter(|(_, c)| c[0] + c[1] > 0).map(|(&r, _)| r).collect()
    }

    pub fn total(&self) -> u128 {
        self.zero + self.odd + self.counts.values().map(|c| c[0] + c[1]).sum::<u128>()
    }

    /// Drops zero entries so equal distributions compare equal.
    pub fn normalized(mut self) -> RankDistribution {
        self.counts.retain(|_, c| c[0] + c[1] > 0);
        self
    }
}

/// `M_{r,i}` for `<x^{q^l}>`, including the zero polynomial.
pub fn rank_distribution_monomial(q: u64, m: u32, ell: u32) -> Result<RankDistribution> {
    let pr = EllParams::new(q, m, ell)?;
    pr.require_ell_below_half()?;
    let n = pr.n()? as u128;
    let big = n * (pr.d()? as u128 - 1);
    let small_rank = m - 2 * pr.delta;
    let mut d = RankDistribution { zero: 1, ..Default::default() };
    if pr.half_even() {
        d.add(QuadFormProfile { rank: m, eps: Some(1) }, big);
        d.add(QuadFormProfile { rank: small_rank, eps: (small_rank > 0).then_some(-1) }, n);
    } else {
        d.add(QuadFormProfile { rank: small_rank, eps: (small_rank > 0).then_some(1) }, n);
        d.add(QuadFormProfile { rank: m, eps: Some(-1) }, big);
    }
    Ok(d.normalized())
}

/// Checks the hypotheses of the `<x^{p^l}, x^{p^{3l}}>` results.
pub fn l3l_params(p: u32, m: u32, ell: u32) -> Result<EllParams> {
    if p == 2 {
        return Err(Error::Hypothesis("p must be an odd prime".into()));
    }
    let pr = EllParams::new(p as u64, m, ell)?;
    if m <= 6 * ell {
        return Err(Error::Hypothesis(format!("m > 6l required (m = {m}, l = {ell})")));
    }
    Ok(pr)
}

/// `F_0..F_3`: numbers of members of rank `m - 2j delta`, `j = 0..3`.
pub fn l3l_f_values(p: u32, m: u32, ell: u32) -> Result<[u128; 4]> {
    let pr = l3l_params(p, m, ell)?;
    let d = pr.delta as i64;
    let m = m as i64;
    let eps = pr.eps_ell as i128;
    let pw = |e: i64| -> Result<i128> {
        if e < 0 {
            return Err(Error::Hypothesis("negative exponent in rank counts".into()));
        }
        ipow(p as i128, e as u32)
    };
    let h = m / 2;
    let alt: i128 = (0..6).map(|i| pw(i * d).map(|v| if i % 2 == 0 { -v } else { v })).sum::<Result<i128>>()?;
    let den = pw(6 * d)? + pw(5 * d)? - pw(4 * d)? + pw(2 * d)? - pw(d)? - 1;
    let nums = [
        pw(2 * m + 6 * d)? - pw(2 * m + 4 * d)? - pw(2 * m + d)? + pw(m + 4 * d)? + pw(m + d)? - pw(6 * d)?
            + eps * (pw(3 * h + 5 * d)? - pw(3 * h + 4 * d)? - pw(h + 5 * d)? + pw(h + 4 * d)?),
        pw(2 * m - 2 * d)? * (pw(7 * d)? - pw(2 * d)? - 1)
            + pw(m - 2 * d)? * (pw(5 * d)? - pw(6 * d)? + pw(2 * d)? + 1)
            - pw(3 * d)? * (pw(2 * d)? - pw(d)? + 1)
            - eps * (pw(3 * h)? - pw(h)?) * alt,
        pw(2 * m - 3 * d)? * (pw(5 * d)? + pw(d)? - 1)
            - pw(m - 3 * d)? * (pw(6 * d)? + pw(4 * d)? + pw(d)? - 1)
            + pw(d)? * (pw(2 * d)? - pw(d)? + 1)
            + eps * (pw(3 * h - 2 * d)? - pw(h - 2 * d)?) * alt,
        pw(2 * m - 3 * d)? - pw(m)? - pw(m - 3 * d)? + 1
            - eps * (pw(3 * h - d)? - pw(3 * h - 2 * d)? - pw(h - d)? + pw(h - 2 * d)?),
    ];
    let mut out = [0u128; 4];
    for (j, num) in nums.iter().enumerate() {
        if num % den != 0 || *num < 0 {
            return Err(Error::Mismatch(format!("F_{j} = {num}/{den} is not a nonnegative integer")));
        }
        out[j] = (num / den) as u128;
    }
    let total: u128 = out.iter().sum();
    let expect = pw(2 * m)? as u128 - 1;
    if total != expect {
        return Err(Error::Mismatch(format!("sum of F_j is {total}, expected {expect}")));
    }
    Ok(out)
}

/// Profile carried by `F_j`: rank `m - 2 j delta`, type `eps_l (-1)^j`.
pub fn l3l_profile(pr: &EllParams, j: u32) -> QuadFormProfile {
    let eps = if j % 2 == 0 { pr.eps_ell } else { -pr.eps_ell };
    QuadFormProfile { rank: pr.m - 2 * j * pr.delta, eps: Some(eps) }
}

/// `M_{r,i}` for `<x^{p^l}, x^{p^{3l}}>`, including the zero polynomial.
pub fn rank_distribution_l3l(p: u32, m: u32, ell: u32) -> Result<RankDistribution> {
    let pr = l3l_params(p, m, ell)?;
    let f = l3l_f_values(p, m, ell)?;
    let mut d = RankDistribution { zero: 1, ..Default::default() };
    for (j, &c) in f.iter().enumerate() {
        d.add(l3l_profile(&pr, j as u32), c);
    }
    Ok(d.normalized())
}

/// Exhaustive rank/type distribution of any enumerable family.
pub fn tally_family(ctx: &TraceCtx, family: &FamilySpec) -> Result<RankDistribution> {
    let mut d = RankDistribution::default();
    for r in enumerate_family(ctx, family)? {
        d.add(QuadForm::new(ctx, r).profile(), 1);
    }
    Ok(d.normalized())
}

/// Gram matrices over `F_p`, in the polynomial basis `t^j`, of the forms
/// `tr(t^k x^{p^e + 1})` for `k = 0..m`.
fn gram_stack(ctx: &TraceCtx, e: u32) -> Vec<Vec<u8>> {
    let f = ctx.field();
    let m = f.n() as usize;
    let sub = ctx.sub();
    let basis: Vec<Fe> = (0..m).map(|j| Fe(f.p().pow(j as u32))).collect();
    (0..m)
        .map(|k| {
            let form = QuadForm::new(ctx, LinearizedPoly::monomial(1, e, basis[k]));
            let mut g = vec![0u8; m * m];
            for i in 0..m {
                let qi = form.eval(basis[i]);
                g[i * m + i] = sub.add(qi, qi);
                for j in i + 1..m {
                    let b = form.polar(basis[i], basis[j]);
                    g[i * m + j] = b;
                    g[j * m + i] = b;
                }
            }
            g
        })
        .collect()
}

/// Exhaustive sweep over `tr(g1 x^{p^{e1}+1} + g2 x^{p^{e2}+1})` for packed
/// `g1` in `g1_range` and every `g2`, calling `visit(g1, g2, profile)`.
///
/// Odd prime base field only (`s = 1`). Pairs are visited in packed order.
pub fn sweep_pairs<V>(ctx: &TraceCtx, e1: u32, e2: u32, g1_range: Range<u32>, visit: V) -> Result<()>
where
    V: Fn(Fe, Fe, QuadFormProfile) + Sync,
{
    if ctx.s() != 1 || ctx.p() == 2 {
        return Err(Error::Invalid("pair sweep needs an odd prime base field".into()));
    }
    let sub = ctx.sub();
    let p = ctx.p() as u8;
    let m = ctx.m() as usize;
    let g1s = gram_stack(ctx, e1);
    let g2s = gram_stack(ctx, e2);
    let size = ctx.size();
    let minus_one = sub.neg(1);
    g1_range.into_par_iter().for_each(|g1| {
        let mut base = vec![0u8; m * m];
        let mut v = g1;
        for g in &g1s {
            let d = (v % p as u32) as u8;
            v /= p as u32;
            for _ in 0..d {
                for (b, &x) in base.iter_mut().zip(g) {
                    *b = sub.add(*b, x);
                }
            }
        }
        let mut cur = base;
        let mut digits = vec![0u8; m];
        let mut scratch = vec![0u8; m * m];
        for g2 in 0..size {
            scratch.copy_from_slice(&cur);
            let (r, disc) = sym_rank_disc_in_place(sub, &mut scratch, m);
            let eps = if r > 0 && r % 2 == 0 {
                let sign = if (r / 2) % 2 == 1 { minus_one } else { 1 };
                Some(sub.eta(sub.mul(sign, disc)) as i8)
            } else {
                None
            };
            visit(Fe(g1), Fe(g2), QuadFormProfile { rank: r as u32, eps });
            // Next g2: bump the packed digits, adding the matching Gram matrix
            // once per digit step (p steps return a digit to 0 and add p G = 0).
            for (k, d) in digits.iter_mut().enumerate() {
                for (c, &x) in cur.iter_mut().zip(&g2s[k]) {
                    *c = sub.add(*c, x);
                }
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
    });
    Ok(())
}

/// Outcome of the exhaustive (or budget-truncated) `<x^{p^l}, x^{p^{3l}}>` tally.
#[derive(Debug, Clone, Serialize)]
pub struct L3lTally {
    pub distribution: RankDistribution,
    pub pairs: u128,
    pub complete: bool,
}

/// Tallies ranks/types over all pairs, or over the first `max_pairs`
/// (rounded down to whole `g1` blocks) in packed order.
pub fn tally_l3l(ctx: &TraceCtx, ell: u32, max_pairs: Option<u128>) -> Result<L3lTally> {
    let size = ctx.size();
    let blocks = match max_pairs {
        None => size,
        Some(mp) => (mp / size as u128).min(size as u128) as u32,
    };
    let counts = std::sync::Mutex::new(BTreeMap::<QuadFormProfile, u128>::new());
    let chunk = 64u32;
    let starts: Vec<u32> = (0..blocks).step_by(chunk as usize).collect();
    starts.into_par_iter().try_for_each(|start| -> Result<()> {
        let end = (start + chunk).min(blocks);
        let local = std::sync::Mutex::new(BTreeMap::<QuadFormProfile, u128>::new());
        // The inner closure runs on this thread only; the mutex is uncontended.
        sweep_pairs(ctx, ell, 3 * ell, start..end, |_, _, prof| {
            *local.lock().unwrap().entry(prof).or_insert(0) += 1;
        })?;
        let mut all = counts.lock().unwrap();
        for (k, v) in local.into_inner().unwrap() {
            *all.entry(k).or_insert(0) += v;
        }
        Ok(())
    })?;
    let mut distribution = RankDistribution::default();
    for (prof, c) in counts.into_inner().unwrap() {
        distribution.add(prof, c);
    }
    let pairs = blocks as u128 * size as u128;
    Ok(L3lTally { distribution: distribution.normalized(), pairs, complete: blocks == size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let c = classify_monomial(&ctx, Fe::ONE, 1).unwrap();
        assert_eq!((c.rank, c.eps, c.branch), (2, Some(-1), Branch::EvenPower));

        let ctx = TraceCtx::new(3, 1, 4).unwrap();
        let c = classify_monomial(&ctx, ctx.field().alpha(), 1).unwrap();
        assert_eq!((c.rank, c.eps, c.branch), (4, Some(1), Branch::OddB));

        let ctx = TraceCtx::new(3, 1, 2).unwrap();
        let c = classify_monomial(&ctx, ctx.field().exp(2), 1).unwrap();
        assert_eq!((c.rank, c.eps, c.branch), (0, None, Branch::OddC));
        assert!(classify_monomial(&ctx, Fe::ZERO, 1).is_err());

        let ctx = TraceCtx::new(2, 1, 5).unwrap();
        assert!(matches!(classify_monomial(&ctx, Fe::ONE, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn counts() {
        assert_eq!(m_counts(2, 8, 1).unwrap(), (85, 170));
        assert_eq!(m_counts(3, 4, 1).unwrap(), (20, 60));
        assert_eq!(m_counts(2, 8, 2).unwrap(), (51, 204));
    }

    #[test]
    fn monomial_distributions() {
        let d = rank_distribution_monomial(2, 8, 1).unwrap();
        assert_eq!((d.get(8, 1), d.get(6, 2)), (170, 85));
        let d = rank_distribution_monomial(2, 4, 1).unwrap();
        assert_eq!((d.get(4, 1), d.get(2, 2)), (10, 5));
        let d = rank_distribution_monomial(3, 4, 1).unwrap();
        assert_eq!((d.get(4, 1), d.get(2, 2)), (60, 20));
        assert_eq!(d.total(), 81);
    }

    #[test]
    fn l3l_values_at_3_8_1() {
        let f = l3l_f_values(3, 8, 1).unwrap();
        assert_eq!(f, [31_084_560, 11_512_800, 447_720, 1_640]);
        assert_eq!(f.iter().sum::<u128>(), 43_046_720);
        assert!(l3l_f_values(3, 6, 1).is_err());
        assert!(l3l_f_values(2, 8, 1).is_err());
    }

    #[test]
    fn pair_sweep_matches_direct_tally() {
        let ctx = TraceCtx::new(3, 1, 4).unwrap();
        let fam = FamilySpec::new(3, 1, 4, vec![1, 3]).unwrap();
        let direct = tally_family(&ctx, &fam).unwrap();
        let swept = tally_l3l(&ctx, 1, None).unwrap();
        assert!(swept.complete);
        assert_eq!(swept.pairs, 81 * 81);
        assert_eq!(swept.distribution, direct);
    }
}

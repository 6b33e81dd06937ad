//! Quadratic forms `Q_R(x) = tr_{q^m/q}(x R(x))`: rank, type, solution
//! counts and exponential sums.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Fe, Subfield};
use crate::linalg;
use crate::linpoly::LinearizedPoly;
use crate::trace::TraceCtx;

/// Counting on a complement of the radical is used for the type when
/// `q^r` is at most this.
pub const COUNT_TYPE_LIMIT: u64 = 1 << 16;

/// Rank and, for even positive rank, type (`+1` for type 1, `-1` for type 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadFormProfile {
    pub rank: u32,
    #[serde(rename = "type")]
    pub eps: Option<i8>,
}

impl QuadFormProfile {
    /// Type index: 1 for `eps = +1`, 2 for `eps = -1`.
    pub fn type_index(&self) -> Option<u8> {
        self.eps.map(|e| if e > 0 { 1 } else { 2 })
    }
}

/// Where `beta` sits in the solution-count distribution of a fixed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaClass {
    /// `N_{Q,beta}(xi) = q^{m-1}` for every `xi`.
    Generic,
    /// `N_{Q,beta}(xi) = N_Q(xi + c)`.
    Shift(u8),
}

/// `nu(0) = q - 1`, `nu(z) = -1` otherwise.
pub fn nu(q: u64, z: u8) -> i128 {
    if z == 0 {
        q as i128 - 1
    } else {
        -1
    }
}

/// Structural data of a form read off its Gram matrix.
#[derive(Debug, Clone)]
pub struct Structure {
    pub m: usize,
    /// Polar Gram matrix `B(e_i, e_j)`.
    pub gram: Vec<u8>,
    /// `Q(e_i)`.
    pub diag: Vec<u8>,
    /// Kernel of the polar form, coordinates over the basis.
    pub polar_kernel: Vec<Vec<u8>>,
    /// Pivot columns: their basis vectors span a complement of the kernel.
    pub pivots: Vec<usize>,
    /// Radical `V`, coordinates over the basis.
    pub radical: Vec<Vec<u8>>,
}

impl Structure {
    pub fn rank(&self) -> u32 {
        (self.m - self.radical.len()) as u32
    }

    /// `Q` at the vector with the given coordinates.
    pub fn eval_coords(&self, f: &Subfield, c: &[u8]) -> u8 {
        q_coords(f, &self.gram, &self.diag, self.m, c)
    }
}

fn q_coords(f: &Subfield, gram: &[u8], diag: &[u8], n: usize, c: &[u8]) -> u8 {
    let mut acc = 0u8;
    for i in 0..n {
        if c[i] == 0 {
            continue;
        }
        acc = f.add(acc, f.mul(f.mul(c[i], c[i]), diag[i]));
        for j in i + 1..n {
            if c[j] != 0 {
                acc = f.add(acc, f.mul(f.mul(c[i], c[j]), gram[i * n + j]));
            }
        }
    }
    acc
}

/// Rank and type from a Gram matrix and diagonal values, using the
/// discriminant (odd characteristic) or the Arf invariant (characteristic 2).
pub fn profile_from_gram(f: &Subfield, gram: &[u8], diag: &[u8], m: usize) -> QuadFormProfile {
    let (kernel, pivots) = linalg::kernel(f, gram, m, m);
    if f.p() != 2 {
        let r = pivots.len();
        let sub = submatrix(gram, m, &pivots);
        let (rk, disc) = linalg::sym_rank_disc(f, &sub, r);
        debug_assert_eq!(rk, r);
        return QuadFormProfile { rank: r as u32, eps: odd_type(f, r, disc) };
    }
    let all_zero = kernel.iter().all(|w| q_coords(f, gram, diag, m, w) == 0);
    if !all_zero {
        return QuadFormProfile { rank: pivots.len() as u32 + 1, eps: None };
    }
    let r = pivots.len();
    let eps = if r == 0 {
        None
    } else {
        let sub = submatrix(gram, m, &pivots);
        let d: Vec<u8> = pivots.iter().map(|&i| diag[i]).collect();
        let arf = linalg::arf_char2(f, &sub, &d, r).expect("polar form is nondegenerate on a complement");
        Some(if f.abs_trace(arf) == 0 { 1 } else { -1 })
    };
    QuadFormProfile { rank: r as u32, eps }
}

fn odd_type(f: &Subfield, r: usize, disc: u8) -> Option<i8> {
    if r == 0 || r % 2 == 1 {
        return None;
    }
    let sign = if (r / 2) % 2 == 1 { f.neg(1) } else { 1 };
    Some(f.eta(f.mul(sign, disc)) as i8)
}

fn submatrix(a: &[u8], n: usize, idx: &[usize]) -> Vec<u8> {
    let mut out = Vec::with_capacity(idx.len() * idx.len());
    for &i in idx {
        for &j in idx {
            out.push(a[i * n + j]);
        }
    }
    out
}

/// `Q_R` over a fixed [`TraceCtx`].
#[derive(Debug, Clone)]
pub struct QuadForm<'a> {
    ctx: &'a TraceCtx,
    r: LinearizedPoly,
}

impl<'a> QuadForm<'a> {
    pub fn new(ctx: &'a TraceCtx, r: LinearizedPoly) -> QuadForm<'a> {
        QuadForm { ctx, r }
    }

    pub fn ctx(&self) -> &'a TraceCtx {
        self.ctx
    }

    pub fn poly(&self) -> &LinearizedPoly {
        &self.r
    }

    #[inline]
    pub fn eval(&self, x: Fe) -> u8 {
        let f = self.ctx.field();
        self.ctx.trace(f.mul(x, self.r.eval(f, x)))
    }

    /// `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn polar(&self, x: Fe, y: Fe) -> u8 {
        let s = self.ctx.sub();
        let xy = self.eval(self.ctx.field().add(x, y));
        s.sub(s.sub(xy, self.eval(x)), self.eval(y))
    }

    pub fn structure(&self) -> Structure {
        let sub = self.ctx.sub();
        let basis = self.ctx.basis();
        let m = basis.len();
        let diag: Vec<u8> = basis.iter().map(|&e| self.eval(e)).collect();
        let mut gram = vec![0u8; m * m];
        for i in 0..m {
            gram[i * m + i] = sub.add(diag[i], diag[i]);
            for j in i + 1..m {
                let b = self.polar(basis[i], basis[j]);
                gram[i * m + j] = b;
                gram[j * m + i] = b;
            }
        }
        let (polar_kernel, pivots) = linalg::kernel(sub, &gram, m, m);
        let radical = if sub.p() != 2 {
            polar_kernel.clone()
        } else {
            char2_radical(sub, &gram, &diag, m, &polar_kernel)
        };
        Structure { m, gram, diag, polar_kernel, pivots, radical }
    }

    /// An `F_q`-basis of the radical `V`.
    pub fn radical(&self) -> Vec<Fe> {
        let basis = self.ctx.basis();
        self.structure().radical.iter().map(|c| self.ctx.combine(&basis, c)).collect()
    }

    pub fn rank(&self) -> u32 {
        self.structure().rank()
    }

    /// Rank and type by the discriminant/Arf route.
    pub fn profile(&self) -> QuadFormProfile {
        let st = self.structure();
        profile_from_gram(self.ctx.sub(), &st.gram, &st.diag, st.m)
    }

    /// Type of an even-rank form by counting zeros on a complement of the
    /// radical, or over the whole field when `q^r` is large but the field
    /// is enumerable.
    pub fn type_of(&self, r: u32) -> Result<i8> {
        if r % 2 == 1 {
            return Err(Error::OddRank(r));
        }
        let st = self.structure();
        if st.rank() != r {
            return Err(Error::Invalid(format!("form has rank {}, not {r}", st.rank())));
        }
        if r == 0 {
            return Err(Error::Invalid("type is undefined for rank 0".into()));
        }
        let q = self.ctx.q() as u64;
        if q.pow(r) <= COUNT_TYPE_LIMIT {
            self.type_by_complement(&st)
        } else if self.ctx.has_tables() {
            self.type_by_field_count(r)
        } else {
            profile_from_gram(self.ctx.sub(), &st.gram, &st.diag, st.m)
                .eps
                .ok_or_else(|| Error::Mismatch("fast type path disagrees on rank".into()))
        }
    }

    fn type_by_complement(&self, st: &Structure) -> Result<i8> {
        let sub = self.ctx.sub();
        let q = sub.q() as u64;
        let piv = &st.pivots;
        let r = piv.len();
        if sub.p() == 2 && st.radical.len() != st.polar_kernel.len() {
            return Err(Error::OddRank(r as u32 + 1));
        }
        let g = submatrix(&st.gram, st.m, piv);
        let d: Vec<u8> = piv.iter().map(|&i| st.diag[i]).collect();
        let mut c = vec![0u8; r];
        let mut zeros = 0u64;
        loop {
            if q_coords(sub, &g, &d, r, &c) == 0 {
                zeros += 1;
            }
            if !odometer(&mut c, q as u8) {
                break;
            }
        }
        solve_eps(zeros, q, r as u32, r as u32)
    }

    /// Type from `N_Q(0)` over all of `F_{q^m}`.
    pub fn type_by_field_count(&self, r: u32) -> Result<i8> {
        let zeros = self.count_n(Fe::ZERO, 0)?;
        solve_eps(zeros, self.ctx.q() as u64, self.ctx.m(), r)
    }

    /// `Q(alpha^k)` for `k = 0..q^m - 1`.
    pub fn log_table(&self) -> Result<Vec<u8>> {
        self.require_tables()?;
        let f = self.ctx.field();
        Ok((0..f.order() as i64).map(|k| self.eval(f.exp(k))).collect())
    }

    fn require_tables(&self) -> Result<()> {
        if self.ctx.has_tables() {
            Ok(())
        } else {
            Err(Error::FieldTooLarge {
                p: self.ctx.p(),
                n: self.ctx.s() * self.ctx.m(),
                limit: crate::gf::DEFAULT_TABLE_LIMIT,
            })
        }
    }

    /// Histogram over `F_q` of `Q(x) + tr(beta x)`, `x` ranging over the field.
    pub fn histogram(&self, qlog: &[u8], beta: Fe) -> Vec<u64> {
        histogram_with(self.ctx, qlog, beta)
    }

    /// `N_{Q,beta}(xi)` by enumeration.
    pub fn count_n(&self, beta: Fe, xi: u8) -> Result<u64> {
        let qlog = self.log_table()?;
        Ok(self.histogram(&qlog, beta)[xi as usize])
    }

    /// `S_{Q,b}(beta) = q N_{Q,beta}(-b) - q^m`.
    pub fn exp_sum(&self, b: u8, beta: Fe) -> Result<i64> {
        let n = self.count_n(beta, self.ctx.sub().neg(b))?;
        Ok(self.ctx.q() as i64 * n as i64 - self.ctx.size() as i64)
    }

    /// The class of `beta`: solve `B(x, y0) = tr(beta x)`; if solvable the
    /// counts are those of `Q` shifted by `Q(y0)`.
    pub fn beta_class(&self, st: &Structure, beta: Fe) -> BetaClass {
        let f = self.ctx.field();
        let basis = self.ctx.basis();
        let rhs: Vec<u8> = basis.iter().map(|&e| self.ctx.trace(f.mul(beta, e))).collect();
        match linalg::solve(self.ctx.sub(), &st.gram, st.m, st.m, &rhs) {
            None => BetaClass::Generic,
            Some(y0) => BetaClass::Shift(st.eval_coords(self.ctx.sub(), &y0)),
        }
    }
}

pub(crate) fn histogram_with(ctx: &TraceCtx, qlog: &[u8], beta: Fe) -> Vec<u64> {
    let sub = ctx.sub();
    let mut h = vec![0u64; sub.q() as usize];
    h[0] += 1; // x = 0
    let order = qlog.len();
    match ctx.field().log(beta) {
        None => {
            for &v in qlog {
                h[v as usize] += 1;
            }
        }
        Some(lb) => {
            let tr = ctx.trace_table();
            let lb = lb as usize;
            for (k, &v) in qlog.iter().enumerate() {
                let mut j = k + lb;
                if j >= order {
                    j -= order;
                }
                h[sub.add(v, tr[j]) as usize] += 1;
            }
        }
    }
    h
}

fn char2_radical(f: &Subfield, gram: &[u8], diag: &[u8], m: usize, w: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let vals: Vec<u8> = w.iter().map(|v| q_coords(f, gram, diag, m, v)).collect();
    let Some(k0) = vals.iter().position(|&v| v != 0) else {
        return w.to_vec();
    };
    let inv0 = f.inv(vals[k0]);
    (0..w.len())
        .filter(|&k| k != k0)
        .map(|k| {
            let lam = f.sqrt_char2(f.mul(vals[k], inv0));
            (0..m).map(|t| f.add(w[k][t], f.mul(lam, w[k0][t]))).collect()
        })
        .collect()
}

/// Advances a base-`q` counter; false on wraparound to all zeros.
pub(crate) fn odometer(c: &mut [u8], q: u8) -> bool {
    for d in c.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Solves `zeros = q^{dim-1} + eps (q-1) q^{dim-r/2-1}` for `eps`.
fn solve_eps(zeros: u64, q: u64, dim: u32, r: u32) -> Result<i8> {
    let base = q.pow(dim - 1) as i128;
    let unit = ((q - 1) * q.pow(dim - r / 2 - 1)) as i128;
    match zeros as i128 - base {
        d if d == unit => Ok(1),
        d if d == -unit => Ok(-1),
        _ => Err(Error::Mismatch(format!(
            "zero count {zeros} fits neither type (dim {dim}, rank {r})"
        ))),
    }
}

fn even_profile(p: QuadFormProfile) -> Result<(u32, i128)> {
    match p.eps {
        Some(e) => Ok((p.rank, e as i128)),
        None if p.rank == 0 => Err(Error::Invalid("rank-0 form has no type".into())),
        None => Err(Error::OddRank(p.rank)),
    }
}

/// Predicted value/frequency table of `N_{Q,beta}(xi)` as `beta` ranges.
pub fn lemma21_table(q: u64, m: u32, profile: QuadFormProfile, xi: u8, sub: &Subfield) -> Result<BTreeMap<u64, u64>> {
    let (r, eps) = even_profile(profile)?;
    let qi = q as i128;
    let mut out = BTreeMap::new();
    let generic = qi.pow(m) - qi.pow(r);
    if generic > 0 {
        *out.entry(qi.pow(m - 1) as u64).or_insert(0) += generic as u64;
    }
    for c in 0..q as u8 {
        let count = qi.pow(r - 1) + eps * nu(q, c) * qi.pow(r / 2 - 1);
        let value = qi.pow(m - 1) + eps * nu(q, sub.add(xi, c)) * qi.pow(m - r / 2 - 1);
        if count > 0 {
            *out.entry(value as u64).or_insert(0) += count as u64;
        }
    }
    Ok(out)
}

/// Predicted distribution of `S_{Q,b}(beta)`: value -> frequency.
pub fn lemma22_table(q: u64, m: u32, profile: QuadFormProfile, b_zero: bool) -> Result<BTreeMap<i64, u64>> {
    let (r, eps) = even_profile(profile)?;
    let qi = q as i128;
    let rows: [(i128, i128); 3] = if b_zero {
        [
            (0, qi.pow(m) - qi.pow(r)),
            (eps * (qi - 1) * qi.pow(m - r / 2), qi.pow(r - 1) + eps * (qi - 1) * qi.pow(r / 2 - 1)),
            (-eps * qi.pow(m - r / 2), (qi.pow(r - 1) - eps * qi.pow(r / 2 - 1)) * (qi - 1)),
        ]
    } else {
        [
            (0, qi.pow(m) - qi.pow(r)),
            (eps * (qi - 1) * qi.pow(m - r / 2), qi.pow(r - 1) - eps * qi.pow(r / 2 - 1)),
            (-eps * qi.pow(m - r / 2), qi.pow(r) - qi.pow(r - 1) + eps * qi.pow(r / 2 - 1)),
        ]
    };
    let mut out = BTreeMap::new();
    for (v, c) in rows {
        if c > 0 {
            *out.entry(v as i64).or_insert(0) += c as u64;
        }
    }
    Ok(out)
}

/// Outcome of sweeping `beta` for one form.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub profile: QuadFormProfile,
    /// Per `xi`: observed multiset of `N_{Q,beta}(xi)`.
    pub counts_observed: Vec<BTreeMap<u64, u64>>,
    pub counts_predicted: Vec<BTreeMap<u64, u64>>,
    /// Observed distribution of `S_{Q,0}` and, merged over all `b != 0`, of `S_{Q,b}`.
    pub sums_observed: [BTreeMap<i64, u64>; 2],
    pub sums_predicted: [BTreeMap<i64, u64>; 2],
    /// Betas whose class prediction disagreed with their counts.
    pub class_failures: Vec<Fe>,
    pub ok: bool,
}

/// Exhaustive check of both lemmas for an even-rank form.
pub fn verify_lemmas(form: &QuadForm) -> Result<LemmaReport> {
    let ctx = form.ctx();
    let sub = ctx.sub();
    let q = ctx.q() as u64;
    let m = ctx.m();
    let st = form.structure();
    let profile = profile_from_gram(sub, &st.gram, &st.diag, st.m);
    let (r, eps) = even_profile(profile)?;
    let qlog = form.log_table()?;
    let qs = q as usize;
    let mut counts_observed = vec![BTreeMap::new(); qs];
    let mut sums_observed = [BTreeMap::new(), BTreeMap::new()];
    let mut class_failures = Vec::new();
    let size = ctx.size() as i64;
    let qi = q as i128;
    for beta in ctx.field().elements() {
        let h = form.histogram(&qlog, beta);
        for xi in 0..qs {
            *counts_observed[xi].entry(h[xi]).or_insert(0u64) += 1;
        }
        for b in 0..qs as u8 {
            let s = q as i64 * h[sub.neg(b) as usize] as i64 - size;
            *sums_observed[(b != 0) as usize].entry(s).or_insert(0u64) += 1;
        }
        let class = form.beta_class(&st, beta);
        let expected = |xi: u8| -> u64 {
            match class {
                BetaClass::Generic => q.pow(m - 1),
                BetaClass::Shift(c) => {
                    (qi.pow(m - 1) + eps * nu(q, sub.add(xi, c)) * qi.pow(m - r / 2 - 1)) as u64
                }
            }
        };
        if (0..qs).any(|xi| h[xi] != expected(xi as u8)) {
            class_failures.push(beta);
        }
    }
    let counts_predicted = (0..qs)
        .map(|xi| lemma21_table(q, m, profile, xi as u8, sub))
        .collect::<Result<Vec<_>>>()?;
    let mut sums_predicted = [lemma22_table(q, m, profile, true)?, BTreeMap::new()];
    for (v, c) in lemma22_table(q, m, profile, false)? {
        sums_predicted[1].insert(v, c * (q - 1));
    }
    let ok = counts_observed == counts_predicted && sums_observed == sums_predicted && class_failures.is_empty();
    Ok(LemmaReport {
        profile,
        counts_observed,
        counts_predicted,
        sums_observed,
        sums_predicted,
        class_failures,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono<'a>(ctx: &'a TraceCtx, ell: u32, gamma: Fe) -> QuadForm<'a> {
        QuadForm::new(ctx, LinearizedPoly::monomial(ctx.s(), ell, gamma))
    }

    #[test]
    fn zero_form() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let q = QuadForm::new(&ctx, LinearizedPoly::zero(1));
        assert_eq!(q.rank(), 0);
        assert_eq!(q.radical().len(), 4);
        assert_eq!(q.count_n(Fe::ZERO, 0).unwrap(), 16);
        assert_eq!(q.exp_sum(0, Fe::ZERO).unwrap(), 16);
    }

    #[test]
    fn cube_form_over_f16() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let q = mono(&ctx, 1, Fe::ONE);
        assert_eq!(q.rank(), 2);
        assert_eq!(q.radical().len(), 2);
        assert_eq!(q.type_of(2).unwrap(), -1);
        assert_eq!(q.profile(), QuadFormProfile { rank: 2, eps: Some(-1) });
        assert_eq!(q.count_n(Fe::ZERO, 0).unwrap(), 4);
        assert_eq!(q.exp_sum(0, Fe::ZERO).unwrap(), -8);
        let mut dist = BTreeMap::new();
        for beta in ctx.field().elements() {
            *dist.entry(q.exp_sum(0, beta).unwrap()).or_insert(0) += 1;
        }
        assert_eq!(dist, BTreeMap::from([(-8, 1), (0, 12), (8, 3)]));

        let g = ctx.field().alpha();
        assert!(!ctx.field().power_residue_test(g, 3).unwrap());
        let q = mono(&ctx, 1, g);
        assert_eq!(q.rank(), 4);
        assert_eq!(q.type_of(4).unwrap(), 1);
    }

    #[test]
    fn quartic_form_over_f81() {
        let ctx = TraceCtx::new(3, 1, 4).unwrap();
        let q = mono(&ctx, 1, Fe::ONE);
        assert_eq!(q.profile(), QuadFormProfile { rank: 2, eps: Some(-1) });
        assert_eq!(q.type_of(2).unwrap(), -1);
        let rep = verify_lemmas(&q).unwrap();
        assert!(rep.ok, "{rep:?}");
    }

    #[test]
    fn odd_rank_is_rejected() {
        let ctx = TraceCtx::new(3, 1, 3).unwrap();
        let q = QuadForm::new(&ctx, LinearizedPoly::monomial(1, 0, Fe::ONE));
        let r = q.rank();
        assert_eq!(r, 3);
        assert_eq!(q.type_of(3), Err(Error::OddRank(3)));
        assert!(verify_lemmas(&q).is_err());
    }

    #[test]
    fn radical_is_invisible() {
        let ctx = TraceCtx::new(2, 2, 4).unwrap();
        let f = ctx.field();
        for t in [0i64, 1, 5, 17] {
            let q = mono(&ctx, 1, f.exp(t));
            let v = q.radical();
            assert_eq!(ctx.q().pow(v.len() as u32), ctx.q().pow(4 - q.rank()));
            for &y in &v {
                assert_eq!(q.eval(y), 0);
                for x in f.elements().step_by(7) {
                    assert_eq!(q.eval(f.add(x, y)), q.eval(x));
                }
            }
        }
    }

    #[test]
    fn lemma_tables_for_full_rank_have_no_generic_row() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let p = QuadFormProfile { rank: 4, eps: Some(1) };
        let t = lemma22_table(2, 4, p, true).unwrap();
        assert!(!t.contains_key(&0));
        let t = lemma21_table(2, 4, p, 0, ctx.sub()).unwrap();
        assert_eq!(t.values().sum::<u64>(), 16);
    }
}

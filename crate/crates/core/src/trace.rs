//! The setting shared by codes, forms and curves: `F_{q^m}` with `q = p^s`,
//! its subfield `F_q`, and a precomputed trace `tr_{q^m/q}`.

use crate::error::{Error, Result};
use crate::gf::{Fe, Field, Subfield};

#[derive(Debug, Clone)]
pub struct TraceCtx {
    field: Field,
    sub: Subfield,
    s: u32,
    m: u32,
    /// `tr_log[k]` = subfield index of `tr(alpha^k)`; empty without tables.
    tr_log: Vec<u8>,
}

impl TraceCtx {
    pub fn new(p: u32, s: u32, m: u32) -> Result<TraceCtx> {
        if s == 0 || m == 0 {
            return Err(Error::Invalid("s and m must be positive".into()));
        }
        let n = s.checked_mul(m).ok_or(Error::Overflow("s*m"))?;
        TraceCtx::from_field(Field::new(p, n)?, s)
    }

    pub fn from_field(field: Field, s: u32) -> Result<TraceCtx> {
        if s == 0 || field.n() % s != 0 {
            return Err(Error::NotDivisor { d: s, n: field.n() });
        }
        let sub = field.subfield(s)?;
        let m = field.n() / s;
        let mut ctx = TraceCtx { field, sub, s, m, tr_log: Vec::new() };
        if ctx.field.has_tables() {
            let tr_log = (0..ctx.field.order() as i64)
                .map(|k| ctx.trace_slow(ctx.field.exp(k)))
                .collect();
            ctx.tr_log = tr_log;
        }
        Ok(ctx)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn sub(&self) -> &Subfield {
        &self.sub
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.sub.q()
    }

    /// `q^m`.
    pub fn size(&self) -> u32 {
        self.field.size()
    }

    pub fn has_tables(&self) -> bool {
        !self.tr_log.is_empty()
    }

    fn trace_slow(&self, x: Fe) -> u8 {
        let t = self.field.rel_trace(x, self.s).expect("s divides n");
        self.sub.index_of(t).expect("trace lies in the subfield")
    }

    /// `tr_{q^m/q}(x)` as a subfield index.
    #[inline]
    pub fn trace(&self, x: Fe) -> u8 {
        if x.is_zero() {
            return 0;
        }
        match self.field.log(x) {
            Some(l) => self.tr_log[l as usize],
            None => self.trace_slow(x),
        }
    }

    /// `tr(alpha^k)`; needs tables.
    #[inline]
    pub fn trace_of_power(&self, k: usize) -> u8 {
        self.tr_log[k]
    }

    /// The full trace table indexed by discrete log (empty without tables).
    pub fn trace_table(&self) -> &[u8] {
        &self.tr_log
    }

    /// `x^{q^k}`.
    pub fn qpow(&self, x: Fe, k: u32) -> Fe {
        self.field.frobenius(x, self.s * k)
    }

    /// Embeds a subfield index into the big field.
    pub fn embed(&self, c: u8) -> Fe {
        self.sub.elem(c)
    }

    /// The `F_q`-basis `1, alpha, ..., alpha^{m-1}` of `F_{q^m}`.
    pub fn basis(&self) -> Vec<Fe> {
        (0..self.m as i64).map(|j| self.field.exp(j)).collect()
    }

    /// `sum_j c_j e_j` for coordinates over [`TraceCtx::basis`].
    pub fn combine(&self, basis: &[Fe], coords: &[u8]) -> Fe {
        basis
            .iter()
            .zip(coords)
            .fold(Fe::ZERO, |acc, (&e, &c)| self.field.add(acc, self.field.mul(self.embed(c), e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_table_matches_definition() {
        for (p, s, m) in [(2u32, 1u32, 4u32), (2, 2, 4), (3, 1, 4), (5, 1, 2)] {
            let ctx = TraceCtx::new(p, s, m).unwrap();
            for x in ctx.field().elements() {
                assert_eq!(ctx.trace(x), ctx.trace_slow(x));
            }
        }
    }

    #[test]
    fn trace_is_linear_over_subfield() {
        let ctx = TraceCtx::new(2, 2, 3).unwrap();
        let f = ctx.field();
        for x in f.elements() {
            for c in 0..4u8 {
                let lhs = ctx.trace(f.mul(ctx.embed(c), x));
                assert_eq!(lhs, ctx.sub().mul(c, ctx.trace(x)));
            }
        }
    }

    #[test]
    fn basis_spans() {
        let ctx = TraceCtx::new(2, 2, 2).unwrap();
        let b = ctx.basis();
        let mut seen = std::collections::BTreeSet::new();
        for c0 in 0..4u8 {
            for c1 in 0..4u8 {
                seen.insert(ctx.combine(&b, &[c0, c1]));
            }
        }
        assert_eq!(seen.len(), 16);
    }
}

//! `q`-linearized polynomials `R(x) = sum_i a_i x^{q^{l_i}}` and the families
//! `<x^{q^{l_1}}, ..., x^{q^{l_s}}>` they range over.

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::trace::TraceCtx;

/// The family `L = <x^{q^{l_1}}, ..., x^{q^{l_s}}>` over `F_{q^m}`, `q = p^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub p: u32,
    pub s: u32,
    pub m: u32,
    pub exponents: Vec<u32>,
}

impl FamilySpec {
    pub fn new(p: u32, s: u32, m: u32, mut exponents: Vec<u32>) -> Result<FamilySpec> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 || m == 0 {
            return Err(Error::Invalid("s and m must be positive".into()));
        }
        exponents.sort_unstable();
        if exponents.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("family exponents must be distinct".into()));
        }
        Ok(FamilySpec { p, s, m, exponents })
    }

    /// `<x^{q^l}>`.
    pub fn monomial(p: u32, s: u32, m: u32, ell: u32) -> Result<FamilySpec> {
        FamilySpec::new(p, s, m, vec![ell])
    }

    /// `<x^{p^l}, x^{p^{3l}}>` over a prime base field.
    pub fn l3l(p: u32, m: u32, ell: u32) -> Result<FamilySpec> {
        FamilySpec::new(p, 1, m, vec![ell, 3 * ell])
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.s)
    }

    /// Number of members, `(q^m)^len`.
    pub fn size(&self) -> Result<u128> {
        let base = (self.q() as u128).checked_pow(self.m).ok_or(Error::Overflow("family size"))?;
        base.checked_pow(self.exponents.len() as u32).ok_or(Error::Overflow("family size"))
    }

    /// Checks `1 <= l_1 < ... < l_s < m/2`.
    pub fn check_theorem_range(&self) -> Result<()> {
        let ok = self.exponents.iter().all(|&l| l >= 1 && 2 * l < self.m);
        if ok {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "family exponents {:?} must satisfy 1 <= l < m/2 = {}/2",
                self.exponents, self.m
            )))
        }
    }

    pub fn describe(&self) -> String {
        match self.exponents.as_slice() {
            [l] => format!("mono:{l}"),
            [a, b] if *b == 3 * *a && self.s == 1 => format!("l3l:{a}"),
            ls => format!(
                "general:{}",
                ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearizedPoly {
    /// `s` such that `q = p^s`.
    pub s: u32,
    pub exponents: Vec<u32>,
    pub coeffs: Vec<Fe>,
}

impl LinearizedPoly {
    pub fn new(s: u32, exponents: Vec<u32>, coeffs: Vec<Fe>) -> Result<LinearizedPoly> {
        if exponents.len() != coeffs.len() {
            return Err(Error::Invalid("exponent and coefficient counts differ".into()));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("exponents must be strictly increasing".into()));
        }
        Ok(LinearizedPoly { s, exponents, coeffs })
    }

    pub fn zero(s: u32) -> LinearizedPoly {
        LinearizedPoly { s, exponents: Vec::new(), coeffs: Vec::new() }
    }

    pub fn monomial(s: u32, ell: u32, gamma: Fe) -> LinearizedPoly {
        LinearizedPoly { s, exponents: vec![ell], coeffs: vec![gamma] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `v` with `deg R = p^v`, over nonzero coefficients.
    pub fn p_degree(&self) -> Option<u32> {
        self.exponents
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, _)| l * self.s)
            .max()
    }

    pub fn eval(&self, field: &Field, x: Fe) -> Fe {
        self.exponents.iter().zip(&self.coeffs).fold(Fe::ZERO, |acc, (&l, &a)| {
            if a.is_zero() {
                acc
            } else {
                field.add(acc, field.mul(a, field.frobenius(x, self.s * l)))
            }
        })
    }
}

/// Member number `index` of the family: coefficient digits in base `q^m`,
/// first coefficient most significant, digit 0 meaning 0 and digit `k + 1`
/// meaning `alpha^k`.
pub fn family_member(ctx: &TraceCtx, family: &FamilySpec, index: u128) -> LinearizedPoly {
    let base = ctx.size() as u128;
    let mut rest = index;
    let mut coeffs = vec![Fe::ZERO; family.exponents.len()];
    for slot in coeffs.iter_mut().rev() {
        *slot = zech_digit(ctx.field(), (rest % base) as u32);
        rest /= base;
    }
    LinearizedPoly { s: family.s, exponents: family.exponents.clone(), coeffs }
}

/// Digit `0` is zero and digit `k + 1` is `alpha^k`.
pub fn zech_digit(field: &Field, d: u32) -> Fe {
    if d == 0 {
        Fe::ZERO
    } else {
        field.exp(d as i64 - 1)
    }
}

/// Enumerates members with index in `range` in order.
pub fn enumerate_range<'a>(
    ctx: &'a TraceCtx,
    family: &'a FamilySpec,
    range: std::ops::Range<u128>,
) -> impl Iterator<Item = LinearizedPoly> + 'a {
    range.map(move |i| family_member(ctx, family, i))
}

/// Enumerates every member of the family exactly once.
pub fn enumerate_family<'a>(
    ctx: &'a TraceCtx,
    family: &'a FamilySpec,
) -> Result<impl Iterator<Item = LinearizedPoly> + 'a> {
    let total = family.size()?;
    Ok(enumerate_range(ctx, family, 0..total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let f = ctx.field();
        assert_eq!(LinearizedPoly::zero(1).eval(f, f.alpha()), Fe::ZERO);
        assert_eq!(LinearizedPoly::monomial(1, 2, Fe::ONE).eval(f, Fe::ONE), Fe::ONE);
        let g = f.exp(7);
        let r = LinearizedPoly::monomial(1, 1, g);
        assert_eq!(r.eval(f, f.alpha()), f.mul(g, f.mul(f.alpha(), f.alpha())));
    }

    #[test]
    fn enumeration_counts() {
        let ctx = TraceCtx::new(2, 1, 4).unwrap();
        let fam = FamilySpec::monomial(2, 1, 4, 1).unwrap();
        let all: Vec<_> = enumerate_family(&ctx, &fam).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert!(all[0].is_zero());
        assert_eq!(all[1].coeffs, vec![Fe::ONE]);
        let distinct: std::collections::BTreeSet<_> = all.iter().map(|r| r.coeffs.clone()).collect();
        assert_eq!(distinct.len(), 16);

        let empty = FamilySpec::new(2, 1, 4, vec![]).unwrap();
        let members: Vec<_> = enumerate_family(&ctx, &empty).unwrap().collect();
        assert_eq!(members.len(), 1);
        assert!(members[0].is_zero());

        assert_eq!(FamilySpec::l3l(3, 8, 1).unwrap().size().unwrap(), 43_046_721);
    }

    #[test]
    fn pair_family_order() {
        let ctx = TraceCtx::new(2, 1, 3).unwrap();
        let fam = FamilySpec::new(2, 1, 3, vec![1, 2]).unwrap();
        let all: Vec<_> = enumerate_family(&ctx, &fam).unwrap().collect();
        assert_eq!(all.len(), 64);
        assert_eq!(all[1].coeffs, vec![Fe::ZERO, Fe::ONE]);
        assert_eq!(all[8].coeffs, vec![Fe::ONE, Fe::ZERO]);
    }

    #[test]
    fn describe_and_range() {
        assert_eq!(FamilySpec::monomial(2, 1, 8, 1).unwrap().describe(), "mono:1");
        assert_eq!(FamilySpec::l3l(3, 8, 1).unwrap().describe(), "l3l:1");
        assert!(FamilySpec::monomial(2, 1, 4, 2).unwrap().check_theorem_range().is_err());
        assert!(FamilySpec::new(4, 1, 4, vec![1]).is_err());
    }
}

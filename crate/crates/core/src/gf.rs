//! Finite fields `F_{p^n}` as `F_p[t]/(f)`.
//!
//! Elements are stored packed: the coefficient vector `(c_0, ..., c_{n-1})`
//! of `c_0 + c_1 t + ... + c_{n-1} t^{n-1}` is the base-`p` integer
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. The modulus `f` is the monic
//! irreducible polynomial whose non-leading coefficients, packed the same
//! way, form the smallest integer; the designated primitive element is the
//! smallest packed element of full multiplicative order. Both choices are
//! therefore reproducible from `(p, n)` alone.
//!
//! Fields with at most [`DEFAULT_TABLE_LIMIT`] elements carry exp/log/Zech
//! tables; larger fields fall back to dense polynomial arithmetic.

use serde::Serialize;

use crate::arith::{gcd, is_prime, prime_factors};
use crate::error::{Error, Result};

/// Largest field size accepted by [`Field::new`].
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 30;
/// Fields up to this size get exp/log/Zech tables.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 22;
/// Subfields used as code alphabets are limited to byte-sized indices.
pub const MAX_SUBFIELD_SIZE: u32 = 256;

const NO_LOG: u32 = u32::MAX;

/// A packed field element (see module docs).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + alpha^k)`, or `NO_LOG` when `1 + alpha^k = 0`.
    zech: Vec<u32>,
}

/// An explicit construction of `F_{p^n}` with a designated primitive element.
///
/// Immutable once built; share it freely between threads.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    n: u32,
    size: u32,
    order: u32,
    modulus: Vec<u32>,
    alpha: Fe,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
}

impl Field {
    /// Builds `F_{p^n}` with the default size bound and table threshold.
    pub fn new(p: u32, n: u32) -> Result<Field> {
        Field::with_limits(p, n, DEFAULT_MAX_FIELD_SIZE, DEFAULT_TABLE_LIMIT)
    }

    pub fn with_limits(p: u32, n: u32, max_size: u64, table_limit: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        let size = (p as u64).checked_pow(n).filter(|s| *s <= max_size.min(u32::MAX as u64));
        let size = size.ok_or(Error::FieldTooLarge { p, n, limit: max_size })? as u32;
        let pow_p: Vec<u32> = (0..=n).map(|i| (p as u64).pow(i).min(u32::MAX as u64) as u32).collect();
        let modulus = first_irreducible(p, n);
        let mut field = Field {
            p,
            n,
            size,
            order: size - 1,
            modulus,
            alpha: Fe::ONE,
            pow_p,
            tables: None,
        };
        field.alpha = field.find_primitive();
        if (size as u64) <= table_limit {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of elements `p^n`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group, `p^n - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic modulus coefficients, constant term first (length `n + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn alpha(&self) -> Fe {
        self.alpha
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The prime-field constant `c mod p`.
    pub fn constant(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        assert!(c.len() <= self.n as usize, "too many coefficients");
        Fe(c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p))
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        if self.p == 2 {
            return Fe(x.0 ^ y.0);
        }
        match &self.tables {
            Some(t) => {
                if x.is_zero() {
                    return y;
                }
                if y.is_zero() {
                    return x;
                }
                let lx = t.log[x.0 as usize];
                let ly = t.log[y.0 as usize];
                let k = if ly >= lx { ly - lx } else { ly + self.order - lx };
                let z = t.zech[k as usize];
                if z == NO_LOG {
                    Fe::ZERO
                } else {
                    Fe(t.exp[((lx as u64 + z as u64) % self.order as u64) as usize])
                }
            }
            None => self.add_dense(x, y),
        }
    }

    fn add_dense(&self, x: Fe, y: Fe) -> Fe {
        if self.p == 2 {
            return Fe(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        for i in 0..self.n as usize {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        if self.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0u32;
        for i in 0..self.n as usize {
            let c = a % self.p;
            out += ((self.p - c) % self.p) * self.pow_p[i];
            a /= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.is_zero() || y.is_zero() {
            return Fe::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let s = t.log[x.0 as usize] as u64 + t.log[y.0 as usize] as u64;
                Fe(t.exp[(s % self.order as u64) as usize])
            }
            None => self.mul_dense(x, y),
        }
    }

    fn mul_dense(&self, x: Fe, y: Fe) -> Fe {
        let a = self.coeffs(x);
        let b = self.coeffs(y);
        let prod = poly_mul(&a, &b, self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r)
    }

    pub fn pow(&self, x: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if x.is_zero() {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let l = t.log[x.0 as usize] as u128 * (e % self.order as u64) as u128;
            return Fe(t.exp[(l % self.order as u128) as usize]);
        }
        let mut base = x;
        let mut acc = Fe::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_dense(acc, base);
            }
            base = self.mul_dense(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(x, self.order as u64 - 1))
    }

    pub fn div(&self, x: Fe, y: Fe) -> Result<Fe> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `alpha^k` for any integer `k`.
    pub fn exp(&self, k: i64) -> Fe {
        let k = k.rem_euclid(self.order as i64) as u64;
        match &self.tables {
            Some(t) => Fe(t.exp[k as usize]),
            None => self.pow(self.alpha, k),
        }
    }

    /// Discrete log to base alpha; tables only (None for zero or without tables).
    pub fn log(&self, x: Fe) -> Option<u32> {
        let t = self.tables.as_ref()?;
        let l = t.log[x.0 as usize];
        (l != NO_LOG).then_some(l)
    }

    /// `x^{p^k}`.
    pub fn frobenius(&self, x: Fe, k: u32) -> Fe {
        let mut y = x;
        for _ in 0..k % self.n {
            y = self.pow(y, self.p as u64);
        }
        y
    }

    fn check_divisor(&self, d: u32) -> Result<()> {
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotDivisor { d, n: self.n });
        }
        Ok(())
    }

    /// Relative trace onto the subfield of size `q = p^sub_deg`:
    /// `sum_{i < n/sub_deg} x^{q^i}`.
    pub fn rel_trace(&self, x: Fe, sub_deg: u32) -> Result<Fe> {
        self.check_divisor(sub_deg)?;
        let q = (self.p as u64).pow(sub_deg);
        let mut y = x;
        let mut acc = x;
        for _ in 1..self.n / sub_deg {
            y = self.pow(y, q);
            acc = self.add(acc, y);
        }
        Ok(acc)
    }

    /// Membership in the subfield of size `p^d`, i.e. `x^{p^d} = x`.
    pub fn in_subfield(&self, x: Fe, d: u32) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(self.pow(x, (self.p as u64).pow(d)) == x)
    }

    /// True iff `gamma` is an `e`-th power, tested as
    /// `gamma^{(p^n-1)/gcd(p^n-1, e)} = 1`.
    pub fn power_residue_test(&self, gamma: Fe, e: u64) -> Result<bool> {
        if gamma.is_zero() {
            return Err(Error::ZeroElement);
        }
        let g = gcd(self.order as u64, e);
        Ok(self.pow(gamma, self.order as u64 / g) == Fe::ONE)
    }

    /// The subfield of size `p^d` with byte-indexed arithmetic tables.
    pub fn subfield(&self, d: u32) -> Result<Subfield> {
        self.check_divisor(d)?;
        Subfield::new(self, d)
    }

    fn find_primitive(&self) -> Fe {
        let order = self.order as u64;
        let primes = prime_factors(order);
        (1..self.size)
            .map(Fe)
            .find(|&x| primes.iter().all(|&r| self.pow(x, order / r) != Fe::ONE))
            .expect("a finite field always has a primitive element")
    }

    fn build_tables(&self) -> Tables {
        let size = self.size as usize;
        let order = self.order as usize;
        let mut exp = vec![0u32; order];
        let mut log = vec![NO_LOG; size];
        let mut x = Fe::ONE;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x.0;
            log[x.0 as usize] = k as u32;
            x = self.mul_dense(x, self.alpha);
        }
        debug_assert_eq!(x, Fe::ONE);
        let zech = exp
            .iter()
            .map(|&e| {
                let s = self.add_dense(Fe(e), Fe::ONE);
                if s.is_zero() {
                    NO_LOG
                } else {
                    log[s.0 as usize]
                }
            })
            .collect();
        Tables { exp, log, zech }
    }
}

/// The subfield `F_q`, `q = p^d`, of a [`Field`], with elements indexed
/// `0..q` in increasing packed order (index 0 is zero, index 1 is one; for
/// `d = 1` the index equals the integer value of the constant).
#[derive(Debug, Clone)]
pub struct Subfield {
    p: u32,
    d: u32,
    q: u32,
    elems: Vec<Fe>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    square: Vec<bool>,
    sqrt: Vec<u8>,
    abs_trace: Vec<u8>,
}

impl Subfield {
    fn new(field: &Field, d: u32) -> Result<Subfield> {
        let q = (field.p as u64).pow(d);
        if q > MAX_SUBFIELD_SIZE as u64 {
            return Err(Error::Invalid(format!("subfield of size {q} exceeds {MAX_SUBFIELD_SIZE}")));
        }
        let q = q as u32;
        let gen = field.pow(field.alpha, (field.order / (q - 1)) as u64);
        let mut elems = vec![Fe::ZERO];
        let mut x = Fe::ONE;
        for _ in 0..q - 1 {
            elems.push(x);
            x = field.mul(x, gen);
        }
        elems.sort();
        elems.dedup();
        assert_eq!(elems.len(), q as usize, "subfield enumeration");
        let idx = |x: Fe| elems.binary_search(&x).expect("closed under field operations") as u8;
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for i in 0..qs {
            for j in 0..qs {
                add[i * qs + j] = idx(field.add(elems[i], elems[j]));
                mul[i * qs + j] = idx(field.mul(elems[i], elems[j]));
            }
        }
        let neg = elems.iter().map(|&x| idx(field.neg(x))).collect();
        let inv = elems
            .iter()
            .map(|&x| if x.is_zero() { 0 } else { idx(field.inv(x).unwrap()) })
            .collect();
        let mut square = vec![false; qs];
        let mut sqrt = vec![0u8; qs];
        for i in 0..qs {
            let s = mul[i * qs + i] as usize;
            square[s] = true;
            sqrt[s] = i as u8;
        }
        let abs_trace = elems
            .iter()
            .map(|&x| {
                let mut y = x;
                let mut acc = x;
                for _ in 1..d {
                    y = field.pow(y, field.p as u64);
                    acc = field.add(acc, y);
                }
                debug_assert!(acc.0 < field.p);
                acc.0 as u8
            })
            .collect();
        Ok(Subfield { p: field.p, d, q, elems, add, mul, neg, inv, square, sqrt, abs_trace })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Elements in index order.
    pub fn elements(&self) -> &[Fe] {
        &self.elems
    }

    pub fn elem(&self, i: u8) -> Fe {
        self.elems[i as usize]
    }

    pub fn index_of(&self, x: Fe) -> Option<u8> {
        self.elems.binary_search(&x).ok().map(|i| i as u8)
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero index (zero maps to zero).
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Quadratic character in odd characteristic: +1, -1, or 0 for zero.
    pub fn eta(&self, a: u8) -> i32 {
        if a == 0 {
            0
        } else if self.square[a as usize] {
            1
        } else {
            -1
        }
    }

    /// Square root in characteristic 2 (squaring is a bijection there).
    pub fn sqrt_char2(&self, a: u8) -> u8 {
        debug_assert_eq!(self.p, 2);
        self.sqrt[a as usize]
    }

    /// Absolute trace `F_q -> F_p`, as an integer in `0..p`.
    pub fn abs_trace(&self, a: u8) -> u8 {
        self.abs_trace[a as usize]
    }
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    poly_trim(out.into_iter().map(|c| c as u32).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo `m` (m nonzero, not necessarily monic).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = poly_trim(m.to_vec());
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = c * mc as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: `gcd(x^{p^k} - x, f) = 1` for `k <= n/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u32];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&poly_trim(diff), f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for packed in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut v = packed;
        for _ in 0..n {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if f[0] == 0 && n > 1 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(f: &Field, x: Fe) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != Fe::ONE {
            y = f.mul(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn small_fields_have_primitive_alpha() {
        let f = Field::new(2, 4).unwrap();
        assert_eq!(f.size(), 16);
        assert_eq!(order_of(&f, f.alpha()), 15);
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);

        let f = Field::new(3, 8).unwrap();
        assert_eq!(f.size(), 6561);
        assert_eq!(order_of(&f, f.alpha()), 6560);

        let f = Field::new(2, 8).unwrap();
        assert_eq!(f.size(), 256);
        assert_eq!(f.pow(f.alpha(), 255), Fe::ONE);
        for k in 1..255 {
            assert_ne!(f.pow(f.alpha(), k), Fe::ONE);
        }
        // x^8 + x^4 + x^3 + x + 1 is the first irreducible octic over F_2
        assert_eq!(f.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(f.alpha(), Fe(3));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            Field::with_limits(2, 20, 1 << 16, 1 << 16),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(Field::new(3, 0).is_err());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Field::new(5, 4).unwrap();
        let b = Field::new(5, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.alpha(), b.alpha());
    }

    #[test]
    fn dense_and_table_arithmetic_agree() {
        for (p, n) in [(2u32, 6u32), (3, 4), (5, 3), (7, 2)] {
            let t = Field::new(p, n).unwrap();
            let d = Field::with_limits(p, n, 1 << 20, 0).unwrap();
            assert!(!d.has_tables());
            assert_eq!(t.alpha(), d.alpha());
            for x in t.elements() {
                for y in t.elements().step_by(3) {
                    assert_eq!(t.add(x, y), d.add(x, y));
                    assert_eq!(t.mul(x, y), d.mul(x, y));
                }
                assert_eq!(t.pow(x, 17), d.pow(x, 17));
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_everything_after_n_steps() {
        for (p, n) in [(2u32, 8u32), (3, 4), (5, 3)] {
            let f = Field::new(p, n).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(x, f.size() as u64), x);
                for y in f.elements() {
                    let lhs = f.pow(f.add(x, y), p as u64);
                    let rhs = f.add(f.pow(x, p as u64), f.pow(y, p as u64));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn subfield_of_f16() {
        let f = Field::new(2, 4).unwrap();
        let s = f.subfield(2).unwrap();
        let mut expect = vec![Fe::ZERO, Fe::ONE, f.exp(5), f.exp(10)];
        expect.sort();
        assert_eq!(s.elements(), &expect[..]);
        for &x in s.elements() {
            assert!(f.in_subfield(x, 2).unwrap());
        }
        assert_eq!(f.subfield(4).unwrap().q(), 16);
        assert!(matches!(f.subfield(3), Err(Error::NotDivisor { .. })));

        let f = Field::new(2, 8).unwrap();
        let s = f.subfield(4).unwrap();
        assert_eq!(s.q(), 16);
        let count = f.elements().filter(|&x| f.pow(x, 16) == x).count();
        assert_eq!(count, 16);
    }

    #[test]
    fn subfield_tables_match_field() {
        let f = Field::new(2, 8).unwrap();
        let s = f.subfield(2).unwrap();
        for a in 0..4u8 {
            for b in 0..4u8 {
                assert_eq!(s.elem(s.add(a, b)), f.add(s.elem(a), s.elem(b)));
                assert_eq!(s.elem(s.mul(a, b)), f.mul(s.elem(a), s.elem(b)));
            }
        }
        let f = Field::new(3, 4).unwrap();
        let s = f.subfield(1).unwrap();
        assert_eq!(s.elements(), &[Fe(0), Fe(1), Fe(2)]);
        assert_eq!(s.eta(1), 1);
        assert_eq!(s.eta(2), -1);
    }

    #[test]
    fn traces() {
        let f = Field::new(2, 4).unwrap();
        assert_eq!(f.rel_trace(Fe::ZERO, 1).unwrap(), Fe::ZERO);
        assert_eq!(f.rel_trace(Fe::ONE, 1).unwrap(), Fe::ZERO);
        assert!(f.rel_trace(Fe::ONE, 3).is_err());

        let f = Field::new(3, 4).unwrap();
        let a = f.alpha();
        let direct = [1u64, 3, 9, 27]
            .iter()
            .fold(Fe::ZERO, |acc, &e| f.add(acc, f.pow(a, e)));
        assert_eq!(f.rel_trace(a, 1).unwrap(), direct);
    }

    #[test]
    fn trace_is_onto_with_equal_fibers() {
        for (p, n, d) in [(2u32, 8u32, 1u32), (2, 8, 2), (2, 8, 4), (3, 4, 1), (3, 4, 2), (5, 2, 1)] {
            let f = Field::new(p, n).unwrap();
            let s = f.subfield(d).unwrap();
            let mut fibers = vec![0u32; s.q() as usize];
            for x in f.elements() {
                let t = f.rel_trace(x, d).unwrap();
                fibers[s.index_of(t).expect("trace lands in subfield") as usize] += 1;
            }
            let expect = p.pow(n - d);
            assert!(fibers.iter().all(|&c| c == expect), "{p} {n} {d}: {fibers:?}");
        }
    }

    #[test]
    fn power_residues() {
        let f = Field::new(2, 4).unwrap();
        assert!(f.power_residue_test(Fe::ONE, 7).unwrap());
        assert!(!f.power_residue_test(f.alpha(), 3).unwrap());
        assert_eq!(f.power_residue_test(Fe::ZERO, 3), Err(Error::ZeroElement));

        let f = Field::new(2, 8).unwrap();
        let cubes: std::collections::BTreeSet<Fe> =
            f.elements().skip(1).map(|x| f.pow(x, 3)).collect();
        let tested: Vec<Fe> = f.elements().skip(1).filter(|&x| f.power_residue_test(x, 3).unwrap()).collect();
        assert_eq!(tested.len(), 85);
        assert!(tested.iter().all(|x| cubes.contains(x)));
    }
}

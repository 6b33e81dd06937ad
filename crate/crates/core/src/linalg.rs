//! Dense linear algebra over a small field `F_q` given by [`Subfield`] tables.
//!
//! Matrices are row-major `Vec<u8>` of subfield indices.

use crate::gf::Subfield;

/// Row-reduces `mat` (`rows x cols`) in place; returns the pivot columns.
pub fn rref(f: &Subfield, mat: &mut [u8], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| mat[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                mat.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(mat[r * cols + c]);
        for j in 0..cols {
            mat[r * cols + j] = f.mul(mat[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r || mat[i * cols + c] == 0 {
                continue;
            }
            let factor = mat[i * cols + c];
            for j in 0..cols {
                let t = f.mul(factor, mat[r * cols + j]);
                mat[i * cols + j] = f.sub(mat[i * cols + j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Subfield, mat: &[u8], rows: usize, cols: usize) -> usize {
    let mut m = mat.to_vec();
    rref(f, &mut m, rows, cols).len()
}

/// Null space `{y : M y = 0}` of a `rows x cols` matrix, plus the pivot columns.
///
/// Each basis vector has a 1 in exactly one non-pivot column and 0 in the
/// others, so the coordinate vectors at pivot columns span a complement.
pub fn kernel(f: &Subfield, mat: &[u8], rows: usize, cols: usize) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut m = mat.to_vec();
    let pivots = rref(f, &mut m, rows, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r * cols + free]);
        }
        basis.push(v);
    }
    (basis, pivots)
}

/// Solves `M y = rhs` for square or rectangular `M`; None if inconsistent.
pub fn solve(f: &Subfield, mat: &[u8], rows: usize, cols: usize, rhs: &[u8]) -> Option<Vec<u8>> {
    let w = cols + 1;
    let mut aug = vec![0u8; rows * w];
    for i in 0..rows {
        aug[i * w..i * w + cols].copy_from_slice(&mat[i * cols..(i + 1) * cols]);
        aug[i * w + cols] = rhs[i];
    }
    let pivots = rref(f, &mut aug, rows, w);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut y = vec![0u8; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        y[pc] = aug[r * w + cols];
    }
    Some(y)
}

/// `x^T M y`.
pub fn bilinear(f: &Subfield, mat: &[u8], n: usize, x: &[u8], y: &[u8]) -> u8 {
    let mut acc = 0u8;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut row = 0u8;
        for j in 0..n {
            row = f.add(row, f.mul(mat[i * n + j], y[j]));
        }
        acc = f.add(acc, f.mul(x[i], row));
    }
    acc
}

/// Congruence diagonalization of a symmetric matrix in odd characteristic.
/// Returns `(rank, product of the nonzero diagonal entries)`.
pub fn sym_rank_disc(f: &Subfield, mat: &[u8], n: usize) -> (usize, u8) {
    let mut a = mat.to_vec();
    sym_rank_disc_in_place(f, &mut a, n)
}

/// As [`sym_rank_disc`], clobbering `a`. Only the trailing block is kept
/// current after each pivot.
pub fn sym_rank_disc_in_place(f: &Subfield, a: &mut [u8], n: usize) -> (usize, u8) {
    let mut disc = 1u8;
    for k in 0..n {
        if a[k * n + k] == 0 {
            if let Some(j) = (k + 1..n).find(|&j| a[j * n + j] != 0) {
                swap_sym(a, n, k, j);
            } else {
                let found = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i * n + j] != 0);
                let Some((i, j)) = found else {
                    return (k, disc);
                };
                // a_ii = a_jj = 0, so adding row/col j into i makes a_ii = 2 a_ij.
                add_sym(f, a, n, i, j, 1);
                swap_sym(a, n, k, i);
            }
        }
        let piv = a[k * n + k];
        disc = f.mul(disc, piv);
        let inv = f.inv(piv);
        // Schur complement of the pivot; row k is left untouched.
        for i in k + 1..n {
            let c = a[i * n + k];
            if c == 0 {
                continue;
            }
            let factor = f.neg(f.mul(c, inv));
            for j in k + 1..n {
                a[i * n + j] = f.add(a[i * n + j], f.mul(factor, a[k * n + j]));
            }
        }
    }
    (n, disc)
}

/// Row/column operation `row_i += c row_j; col_i += c col_j`.
fn add_sym(f: &Subfield, a: &mut [u8], n: usize, i: usize, j: usize, c: u8) {
    for t in 0..n {
        let v = f.add(a[i * n + t], f.mul(c, a[j * n + t]));
        a[i * n + t] = v;
    }
    for t in 0..n {
        let v = f.add(a[t * n + i], f.mul(c, a[t * n + j]));
        a[t * n + i] = v;
    }
}

fn swap_sym(a: &mut [u8], n: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    for t in 0..n {
        a.swap(i * n + t, j * n + t);
    }
    for t in 0..n {
        a.swap(t * n + i, t * n + j);
    }
}

/// Arf invariant of a nondegenerate quadratic form in characteristic 2,
/// given its polar Gram matrix `b` (`n x n`, alternating) and the values
/// `qd[i] = Q(u_i)` on the basis. Returns None if `b` is degenerate.
pub fn arf_char2(f: &Subfield, b: &[u8], qd: &[u8], n: usize) -> Option<u8> {
    let qval = |x: &[u8]| -> u8 {
        let mut acc = 0u8;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            acc = f.add(acc, f.mul(f.mul(x[i], x[i]), qd[i]));
            for j in i + 1..n {
                if x[j] != 0 {
                    acc = f.add(acc, f.mul(f.mul(x[i], x[j]), b[i * n + j]));
                }
            }
        }
        acc
    };
    let mut rest: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut e = vec![0u8; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut arf = 0u8;
    while let Some(a) = rest.pop() {
        let pos = rest.iter().position(|v| bilinear(f, b, n, &a, v) != 0)?;
        let mut bv = rest.swap_remove(pos);
        let inv = f.inv(bilinear(f, b, n, &a, &bv));
        for c in bv.iter_mut() {
            *c = f.mul(*c, inv);
        }
        arf = f.add(arf, f.mul(qval(&a), qval(&bv)));
        for u in rest.iter_mut() {
            let ub = bilinear(f, b, n, u, &bv);
            let ua = bilinear(f, b, n, u, &a);
            for t in 0..n {
                u[t] = f.add(f.add(u[t], f.mul(ub, a[t])), f.mul(ua, bv[t]));
            }
        }
    }
    Some(arf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn kernel_of_rank_one() {
        let fld = Field::new(3, 1).unwrap();
        let f = fld.subfield(1).unwrap();
        // rows (1 2 0), (2 1 0)  -> second is 2 * first
        let m = [1, 2, 0, 2, 1, 0];
        let (ker, piv) = kernel(&f, &m, 2, 3);
        assert_eq!(piv, vec![0]);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in 0..2 {
                let s = (0..3).fold(0u8, |acc, j| f.add(acc, f.mul(m[r * 3 + j], v[j])));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn solve_and_inconsistency() {
        let fld = Field::new(5, 1).unwrap();
        let f = fld.subfield(1).unwrap();
        let m = [1, 1, 1, 4];
        let y = solve(&f, &m, 2, 2, &[2, 0]).unwrap();
        assert_eq!(f.add(y[0], y[1]), 2);
        let sing = [1, 2, 2, 4];
        assert!(solve(&f, &sing, 2, 2, &[1, 0]).is_none());
        assert!(solve(&f, &sing, 2, 2, &[1, 2]).is_some());
    }

    #[test]
    fn hyperbolic_plane_disc() {
        let fld = Field::new(3, 1).unwrap();
        let f = fld.subfield(1).unwrap();
        let (r, d) = sym_rank_disc(&f, &[0, 1, 1, 0], 2);
        assert_eq!(r, 2);
        // -det is a square for a hyperbolic plane
        assert_eq!(f.eta(f.mul(f.neg(1), d)), 1);
        assert_eq!(sym_rank_disc(&f, &[0, 0, 0, 0], 2).0, 0);
    }

    #[test]
    fn arf_of_small_forms() {
        let fld = Field::new(2, 1).unwrap();
        let f = fld.subfield(1).unwrap();
        let b = [0, 1, 1, 0];
        // x y: Arf 0; x^2 + x y + y^2: Arf 1
        assert_eq!(arf_char2(&f, &b, &[0, 0], 2), Some(0));
        assert_eq!(arf_char2(&f, &b, &[1, 1], 2), Some(1));
        assert_eq!(arf_char2(&f, &[0, 0, 0, 0], &[0, 0], 2), None);
    }
}

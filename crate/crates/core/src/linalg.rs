//! Dense linear algebra over `F_q`: row reduction and kernels.

use crate::gf::FieldCtx;

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place, dropping zero rows. Returns the pivot columns.
pub fn rref(f: &FieldCtx, rows: &mut Vec<Vec<u32>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let c = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FieldCtx, rows: &[Vec<u32>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m, ncols).len()
}

/// A basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace(f: &FieldCtx, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply(f: &FieldCtx, rows: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
        rows.iter()
            .map(|r| r.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    #[test]
    fn rank_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = FieldCtx::new(p, e).unwrap();
            for _ in 0..50 {
                let nr = rng.gen_range(0..6);
                let nc = rng.gen_range(1..7);
                let rows: Vec<Vec<u32>> = (0..nr)
                    .map(|_| (0..nc).map(|_| rng.gen_range(0..f.size())).collect())
                    .collect();
                let ker = nullspace(&f, &rows, nc);
                assert_eq!(ker.len() + rank(&f, &rows, nc), nc);
                for v in &ker {
                    assert!(apply(&f, &rows, v).iter().all(|&x| x == 0));
                }
                assert_eq!(rank(&f, &ker, nc), ker.len());
            }
        }
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let f = FieldCtx::new(3, 1).unwrap();
        let id: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| (i == j) as u32).collect()).collect();
        assert!(nullspace(&f, &id, 4).is_empty());
        assert_eq!(nullspace(&f, &[], 3).len(), 3);
    }
}

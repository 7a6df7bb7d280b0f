//! Exact row reduction over a [`Field`].

use crate::scalar::Field;

/// Rows in reduced row-echelon form together with their pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtract row multiples until `v` has zeros at every pivot column.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = o.clone() - &(factor.clone() * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }
}

/// Reduced row-echelon form of `rows` with zero rows dropped. Every row
/// must have length `ncols`.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pick) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pick);
        let inv = F::one() / &rows[r][col];
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * &inv;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let (pivot_row, other) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (o, p) in other.iter_mut().zip(pivot_row) {
                if !p.is_zero() {
                    *o = o.clone() - &(factor.clone() * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// Basis of `{x : row . x = 0 for every row}` (plain bilinear product), in
/// reduced row-echelon form.
pub fn nullspace<F: Field>(rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let ech = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let basis: Vec<Vec<F>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                v[p] = -row[fc].clone();
            }
            v
        })
        .collect();
    rref(basis, ncols)
}

//! Dense linear algebra over `F_p`: incremental echelon forms, ranks,
//! kernels and canonical row-reduced bases.

use crate::arith::PrimeField;

/// `dst += c * src`
#[inline]
pub fn axpy(field: &PrimeField, dst: &mut [u32], c: u32, src: &[u32]) {
    if c == 0 {
        return;
    }
    let p = field.p() as u64;
    for (d, s) in dst.iter_mut().zip(src) {
        if *s != 0 {
            *d = ((*d as u64 + c as u64 * *s as u64) % p) as u32;
        }
    }
}

/// An incrementally built echelon basis of a subspace of `F_p^len`.
///
/// Each stored row is zero at the pivots of all earlier rows, so a single
/// forward pass reduces any vector to a residual that vanishes on every pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    len: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Echelon { field, len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn reduce(&self, v: &mut [u32]) {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                axpy(&self.field, v, self.field.neg(c), row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let inv = self.field.inv(w[piv]);
                for x in w.iter_mut() {
                    *x = self.field.mul(*x, inv);
                }
                self.rows.push((piv, w));
                true
            }
        }
    }
}

pub fn rank(field: PrimeField, vectors: &[Vec<u32>]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut e = Echelon::new(field, first.len());
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// Basis of `{c : sum_i c_i * columns[i] = 0}`.
pub fn kernel(field: PrimeField, columns: &[Vec<u32>], len: usize) -> Vec<Vec<u32>> {
    let m = columns.len();
    // rows are (image part | combination part)
    let mut rows: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
    let mut out = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = vec![0u32; m];
        combo[i] = 1;
        for (piv, r, rc) in &rows {
            let c = v[*piv];
            if c != 0 {
                let nc = field.neg(c);
                axpy(&field, &mut v, nc, r);
                axpy(&field, &mut combo, nc, rc);
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => out.push(combo),
            Some(piv) => {
                let inv = field.inv(v[piv]);
                v.iter_mut().for_each(|x| *x = field.mul(*x, inv));
                combo.iter_mut().for_each(|x| *x = field.mul(*x, inv));
                rows.push((piv, v, combo));
            }
        }
    }
    debug_assert!(columns.iter().all(|c| c.len() == len));
    out
}

/// Reduced row echelon form: zero rows dropped, pivots equal to one,
/// pivot columns cleared above and below, rows sorted by pivot.
pub fn rref(field: PrimeField, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let Some(first) = rows.first() else { return Vec::new() };
    let mut e = Echelon::new(field, first.len());
    for r in rows {
        e.insert(r);
    }
    let mut basis: Vec<(usize, Vec<u32>)> = e.rows;
    basis.sort_by_key(|r| r.0);
    for i in 0..basis.len() {
        let (piv, row) = basis[i].clone();
        for (j, other) in basis.iter_mut().enumerate() {
            if j != i {
                let c = other.1[piv];
                if c != 0 {
                    axpy(&field, &mut other.1, field.neg(c), &row);
                }
            }
        }
    }
    basis.into_iter().map(|r| r.1).collect()
}

/// Pivot column of each row of a matrix already in row echelon form.
pub fn pivots(rows: &[Vec<u32>]) -> Vec<usize> {
    rows.iter().filter_map(|r| r.iter().position(|&x| x != 0)).collect()
}

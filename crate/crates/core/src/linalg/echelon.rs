//! Sparse row echelon form over the integers.
//!
//! Rows are eliminated column by column. Within a column the pivot is the
//! row with the smallest absolute leading entry, ties broken by original row
//! index, and the other rows are reduced against it until one row remains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{nearest_quotient, row_axpy, row_scale, SparseRow};

struct Work {
    id: usize,
    row: SparseRow,
    combo: SparseRow,
}

impl Work {
    fn lead(&self) -> Option<usize> {
        self.row.first().map(|e| e.0)
    }

    fn lead_value(&self) -> &BigInt {
        &self.row[0].1
    }
}

/// Echelon basis of the row lattice of an integer matrix.
///
/// Pivot rows are stored in increasing pivot-column order with positive
/// pivots. When tracking is enabled each pivot row carries its expression
/// in terms of the input rows, and every input combination that reduced to
/// zero is kept as a left-kernel vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    transforms: Option<Vec<SparseRow>>,
    kernel: Option<Vec<SparseRow>>,
}

impl Echelon {
    pub fn new(cols: usize, input: Vec<SparseRow>) -> Self {
        Self::compute(cols, input, false)
    }

    pub fn with_tracking(cols: usize, input: Vec<SparseRow>) -> Self {
        Self::compute(cols, input, true)
    }

    fn compute(cols: usize, input: Vec<SparseRow>, track: bool) -> Self {
        let mut buckets: Vec<Vec<Work>> = (0..cols).map(|_| Vec::new()).collect();
        let mut kernel = Vec::new();
        for (id, row) in input.into_iter().enumerate() {
            let combo = if track { vec![(id, BigInt::one())] } else { Vec::new() };
            let w = Work { id, row, combo };
            match w.lead() {
                Some(c) => {
                    debug_assert!(c < cols);
                    buckets[c].push(w)
                }
                None => {
                    if track {
                        kernel.push(w.combo)
                    }
                }
            }
        }

        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut transforms = Vec::new();
        for c in 0..cols {
            let mut group = std::mem::take(&mut buckets[c]);
            if group.is_empty() {
                continue;
            }
            let pivot = loop {
                let best = group
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| a.lead_value().abs().cmp(&b.lead_value().abs()).then(a.id.cmp(&b.id)))
                    .map(|(i, _)| i)
                    .expect("nonempty group");
                let pivot = group.swap_remove(best);
                if group.is_empty() {
                    break pivot;
                }
                let mut rest = Vec::with_capacity(group.len());
                for mut w in group.drain(..) {
                    let q = nearest_quotient(w.lead_value(), pivot.lead_value());
                    w.row = row_axpy(&w.row, &q, &pivot.row);
                    if track {
                        w.combo = row_axpy(&w.combo, &q, &pivot.combo);
                    }
                    match w.lead() {
                        Some(l) if l == c => rest.push(w),
                        Some(l) => buckets[l].push(w),
                        None => {
                            if track {
                                kernel.push(w.combo)
                            }
                        }
                    }
                }
                rest.push(pivot);
                group = rest;
            };
            let mut pivot = pivot;
            if pivot.lead_value().is_negative() {
                let m1 = -BigInt::one();
                pivot.row = row_scale(&pivot.row, &m1);
                pivot.combo = row_scale(&pivot.combo, &m1);
            }
            pivots.push(c);
            rows.push(pivot.row);
            if track {
                transforms.push(pivot.combo);
            }
        }

        Echelon { cols, rows, pivots, transforms: track.then_some(transforms), kernel: track.then_some(kernel) }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_tracked(&self) -> bool {
        self.transforms.is_some()
    }

    /// Left-kernel vectors of the input matrix (tracked echelons only).
    pub fn kernel(&self) -> Option<&[SparseRow]> {
        self.kernel.as_deref()
    }

    /// Reduces `v` against the pivot rows. Returns the coefficients on the
    /// pivot rows when `v` lies in the row lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        debug_assert_eq!(v.len(), self.cols);
        let mut rem = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rows.len()];
        for (k, (row, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if rem[c].is_zero() {
                continue;
            }
            let d = &row[0].1;
            let (q, r) = rem[c].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            for (j, x) in row {
                rem[*j] -= &q * x;
            }
            coeffs[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    /// Expresses pivot-row coefficients in terms of the original input rows.
    pub fn lift_coefficients(&self, coeffs: &[BigInt], input_rows: usize) -> Option<Vec<BigInt>> {
        let transforms = self.transforms.as_ref()?;
        let mut out = vec![BigInt::zero(); input_rows];
        for (q, t) in coeffs.iter().zip(transforms) {
            if q.is_zero() {
                continue;
            }
            for (i, x) in t {
                out[*i] += q * x;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::dense_to_sparse;

    fn rows(d: &[Vec<i64>]) -> Vec<SparseRow> {
        d.iter().map(|r| dense_to_sparse(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())).collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let e = Echelon::new(3, rows(&[vec![2, 4, 0], vec![0, 3, 3], vec![2, 7, 3]]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&big(&[2, 4, 0])));
        assert!(e.contains(&big(&[4, 11, 3])));
        assert!(!e.contains(&big(&[1, 2, 0])));
        assert!(!e.contains(&big(&[0, 0, 1])));
    }

    #[test]
    fn tracked_kernel_and_witness() {
        let input = rows(&[vec![2, 4, 0], vec![0, 3, 3], vec![2, 7, 3]]);
        let e = Echelon::with_tracking(3, input.clone());
        let ker = e.kernel().unwrap();
        assert_eq!(ker.len(), 1);
        // kernel vector annihilates the matrix from the left
        let mut acc = vec![BigInt::zero(); 3];
        for (i, c) in &ker[0] {
            for (j, x) in &input[*i] {
                acc[*j] += c * x;
            }
        }
        assert!(acc.iter().all(Zero::is_zero));

        let target = big(&[4, 11, 3]);
        let coeffs = e.solve(&target).unwrap();
        let lifted = e.lift_coefficients(&coeffs, 3).unwrap();
        let mut acc = vec![BigInt::zero(); 3];
        for (i, c) in lifted.iter().enumerate() {
            for (j, x) in &input[i] {
                acc[*j] += c * x;
            }
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn pivots_are_positive() {
        let e = Echelon::new(2, rows(&[vec![-3, 1], vec![-5, 0]]));
        for r in e.rows() {
            assert!(r[0].1.is_positive());
        }
    }
}

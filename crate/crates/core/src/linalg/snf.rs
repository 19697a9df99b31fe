//! Dense Smith normal form with optional unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{nearest_quotient, IntMatrix};

pub(crate) struct DenseSnf {
    pub diag: Vec<BigInt>,
    pub u: Option<Vec<Vec<BigInt>>>,
    pub v: Option<Vec<Vec<BigInt>>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Reduces `a` (m x n) in place to Smith form. The returned `u`, `v` satisfy
/// `u * a_in * v = diag`. Pivot: smallest nonzero absolute value in the
/// remaining block, ties by (row, col).
pub(crate) fn snf_dense(mut a: Vec<Vec<BigInt>>, n: usize, track_u: bool, track_v: bool) -> DenseSnf {
    let m = a.len();
    let mut u = track_u.then(|| identity(m));
    let mut v = track_v.then(|| identity(n));
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);

    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(diag, steps, u, v);
            };
            if pi != t {
                a.swap(pi, t);
                if let Some(u) = u.as_mut() {
                    u.swap(pi, t);
                }
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(pj, t);
                }
                if let Some(v) = v.as_mut() {
                    for row in v.iter_mut() {
                        row.swap(pj, t);
                    }
                }
            }

            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[i][t], &a[t][t]);
                let (top, bottom) = a.split_at_mut(i);
                for j in t..n {
                    let d = &q * &top[t][j];
                    bottom[0][j] -= d;
                }
                if let Some(u) = u.as_mut() {
                    let (top, bottom) = u.split_at_mut(i);
                    for j in 0..m {
                        let d = &q * &top[t][j];
                        bottom[0][j] -= d;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[t][j], &a[t][t]);
                for row in a.iter_mut() {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if let Some(v) = v.as_mut() {
                    for row in v.iter_mut() {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // divisibility: fold an offending row into the pivot row
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t])));
            match offending {
                Some(i) => {
                    let (top, bottom) = a.split_at_mut(i);
                    for j in t..n {
                        top[t][j] += &bottom[0][j];
                    }
                    if let Some(u) = u.as_mut() {
                        let (top, bottom) = u.split_at_mut(i);
                        for j in 0..m {
                            top[t][j] += &bottom[0][j];
                        }
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        diag.push(a[t][t].clone());
    }
    finish(diag, steps, u, v)
}

fn finish(mut diag: Vec<BigInt>, steps: usize, u: Option<Vec<Vec<BigInt>>>, v: Option<Vec<Vec<BigInt>>>) -> DenseSnf {
    diag.resize(steps, BigInt::zero());
    DenseSnf { diag, u, v }
}

/// Smith normal form `D = U * M * V` with `U`, `V` unimodular and the
/// diagonal of `D` a divisibility chain of nonnegative integers.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let res = snf_dense(m.to_dense(), m.cols(), true, true);
    let d = IntMatrix::from_diagonal(&res.diag, m.rows(), m.cols());
    let u = IntMatrix::from_dense(&res.u.expect("tracked"), m.rows());
    let v = IntMatrix::from_dense(&res.v.expect("tracked"), m.cols());
    (d, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        IntMatrix::from_rows(rows, cols).unwrap()
    }

    fn check(a: &IntMatrix) -> IntMatrix {
        let (d, u, v) = smith_normal_form(a);
        assert_eq!(u.mul(a).unwrap().mul(&v).unwrap(), d);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
        assert!(d.is_diagonal());
        let k = a.rows().min(a.cols());
        for i in 0..k {
            assert!(!d.get(i, i).is_negative());
            if i + 1 < k && !d.get(i + 1, i + 1).is_zero() {
                assert!(d.get(i + 1, i + 1).is_multiple_of(&d.get(i, i)));
            }
        }
        d
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(d, a);
        assert_eq!(u, a);
        assert_eq!(v, a);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let d = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(d.get(0, 0), BigInt::from(1));
        assert_eq!(d.get(1, 1), BigInt::from(6));
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(d, a);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(3));
    }

    #[test]
    fn needs_divisibility_fix() {
        // pivot 4 does not divide 6: the fold step must kick in
        let d = check(&m(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]));
        assert_eq!(
            (0..3).map(|i| d.get(i, i)).collect::<Vec<_>>(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(60)]
        );
    }

    #[test]
    fn rectangular() {
        check(&m(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9], vec![-3, 0, 5, 1]]));
        check(&m(&[vec![6, 4], vec![4, 6], vec![2, 2]]));
    }
}

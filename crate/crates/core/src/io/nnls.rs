//! Lawson–Hanson active-set non-negative least squares, plus the column
//! independence check it relies on.

use crate::matrix::Matrix;

const TOL: f64 = 1e-12;

/// Indices of columns that are (numerically) linear combinations of the
/// columns before them.
pub fn dependent_columns(a: &Matrix) -> Vec<usize> {
    let (m, n) = a.shape();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dependent = Vec::new();
    for j in 0..n {
        let mut v = a.column(j);
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        // two passes of modified Gram-Schmidt for stability
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = (0..m).map(|i| q[i] * v[i]).sum();
                for i in 0..m {
                    v[i] -= d * q[i];
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm0 == 0.0 || norm <= 1e-10 * norm0 {
            dependent.push(j);
        } else {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    dependent
}

/// Unconstrained least squares on the chosen columns via Householder QR.
fn lstsq(a: &Matrix, cols: &[usize], b: &[f64]) -> Vec<f64> {
    let m = a.rows();
    let k = cols.len();
    let mut r: Vec<Vec<f64>> = cols.iter().map(|&j| a.column(j)).collect();
    let mut y = b.to_vec();
    for c in 0..k {
        let norm = (c..m).map(|i| r[c][i] * r[c][i]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[c][c] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (c..m).map(|i| r[c][i]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let d: f64 = v.iter().zip(&col[c..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * d / vnorm2;
            for (x, vi) in col[c..].iter_mut().zip(&v) {
                *x -= f * vi;
            }
        };
        for col in r.iter_mut().skip(c) {
            reflect(col);
        }
        reflect(&mut y);
    }
    let mut x = vec![0.0; k];
    for c in (0..k).rev() {
        let mut s = y[c];
        for j in c + 1..k {
            s -= r[j][c] * x[j];
        }
        x[c] = if r[c][c] != 0.0 { s / r[c][c] } else { 0.0 };
    }
    x
}

fn gradient(a: &Matrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    let (m, n) = a.shape();
    let resid: Vec<f64> = (0..m)
        .map(|i| b[i] - (0..n).map(|j| a[(i, j)] * x[j]).sum::<f64>())
        .collect();
    (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)] * resid[i]).sum())
        .collect()
}

/// Minimizes `‖A x − b‖₂` subject to `x ≥ 0`.
pub fn nnls(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = a.cols();
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let scale = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let tol = TOL * scale * (a.rows() as f64);
    for _ in 0..3 * n.max(1) * 10 {
        let w = gradient(a, b, &x);
        let next = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&p, &q| w[p].total_cmp(&w[q]).then(q.cmp(&p)));
        let Some(t) = next else { break };
        passive[t] = true;
        loop {
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let z_p = lstsq(a, &cols, b);
            let mut z = vec![0.0; n];
            for (&j, &v) in cols.iter().zip(&z_p) {
                z[j] = v;
            }
            if cols.iter().all(|&j| z[j] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for &j in &cols {
                if z[j] <= 0.0 {
                    alpha = alpha.min(x[j] / (x[j] - z[j]));
                }
            }
            for j in 0..n {
                x[j] += alpha * (z[j] - x[j]);
            }
            for &j in &cols {
                if x[j] <= TOL {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

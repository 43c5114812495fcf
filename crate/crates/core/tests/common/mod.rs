#![allow(dead_code)]

use nalgebra::DMatrix;
use symform::{assignment, build_laplacian, cycle_minus_edge, SymmetryLaplacian};

pub fn path_laplacian(n: usize) -> SymmetryLaplacian {
    build_laplacian(&cycle_minus_edge(n, (n, 1)).unwrap(), &assignment(n).unwrap()).unwrap()
}

/// Cyclic Jacobi sweeps on a symmetric matrix; eigenvalues sorted ascending.
/// Deliberately independent of the library's eigen solver.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Eigenvalues of the path Laplacian on `n` nodes, each repeated `d` times.
pub fn path_eigenvalues(n: usize, d: usize) -> Vec<f64> {
    let mut eig: Vec<f64> = (0..n)
        .flat_map(|k| {
            let l = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos();
            std::iter::repeat_n(l, d)
        })
        .collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

//! Real symmetric eigenvalues: Householder tridiagonalization followed by
//! implicit-shift QL.

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric matrix `a` (row-major, `n × n`), ascending.
/// `a` is overwritten.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(a, n);
    tql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.total_cmp(y));
    Ok(d)
}

/// Householder reduction; returns diagonal and subdiagonal (`e[0] = 0`).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = 0.0;
    (d, e)
}

/// QL with implicit Wilkinson-style shifts on a tridiagonal matrix.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    const CAP: usize = 60;
    // Off-diagonals are negligible against the matrix norm, not only
    // against their neighbors: a cluster of zero eigenvalues leaves
    // rounding-level diagonals that a relative test never splits.
    let norm = d.iter().zip(e.iter()).map(|(a, b)| a.abs() + b.abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd.max(norm) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > CAP {
                return Err(Error::Precondition(format!("eigenvalue {l} did not converge after {CAP} QL sweeps")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let mut a = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        assert_eq!(symmetric_eigenvalues(&mut a, 3).unwrap(), vec![1.0, 2.0, 3.0]);
        let mut x = vec![0.0, 1.0, 1.0, 0.0];
        let ev = symmetric_eigenvalues(&mut x, 2).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        let mut one = vec![4.5];
        assert_eq!(symmetric_eigenvalues(&mut one, 1).unwrap(), vec![4.5]);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let n = 40;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = (((i * 31 + j * 17) % 23) as f64 - 11.0) / 7.0;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let tr: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let fro: f64 = a.iter().map(|v| v * v).sum();
        let ev = symmetric_eigenvalues(&mut a.clone(), n).unwrap();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-10);
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fro).abs() < 1e-9);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn large_null_space() {
        // Rank-one `v vᵀ` on 256 dimensions, rotated so the zero block is dense.
        let n = 256;
        let v: Vec<f64> = (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) / 9.0).collect();
        let mut a: Vec<f64> = (0..n * n).map(|k| v[k / n] * v[k % n]).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let ev = symmetric_eigenvalues(&mut a, n).unwrap();
        assert!((ev[n - 1] - norm2).abs() < 1e-10);
        assert!(ev[..n - 1].iter().all(|x| x.abs() < 1e-12));
    }
}

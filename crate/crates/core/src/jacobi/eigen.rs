use crate::error::{Error, Result};

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off`, by implicit QL with Wilkinson shifts. Sorted ascending.
pub(crate) fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER_PER_EIGENVALUE {
                return Err(Error::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
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
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let e = tridiagonal_eigenvalues(&[3.0, -1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(e, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn discrete_laplacian() {
        let n = 10;
        let e = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, x) in e.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((x - exact).abs() < 1e-13, "{x} vs {exact}");
        }
    }

    #[test]
    fn wilkinson_matrix() {
        // W21+: known largest pair agrees to ~1e-14
        let d: Vec<f64> = (0..21).map(|i| (10i32 - i).abs() as f64).collect();
        let e = tridiagonal_eigenvalues(&d, &[1.0; 20]).unwrap();
        assert!((e[20] - 10.746194182903393).abs() < 1e-12);
        assert!((e[19] - 10.746194182903322).abs() < 1e-12);
    }
}

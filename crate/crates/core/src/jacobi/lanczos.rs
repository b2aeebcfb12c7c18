use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::JacobiMatrix;
use crate::error::{Error, Result};

/// Relative size of the next off-diagonal below which the Krylov space is
/// considered exhausted.
pub const LANCZOS_BREAKDOWN_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianRepr")]
pub struct HermitianMatrix {
    entries: Vec<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct HermitianRepr {
    entries: Vec<Vec<Complex64>>,
}

impl TryFrom<HermitianRepr> for HermitianMatrix {
    type Error = Error;

    fn try_from(r: HermitianRepr) -> Result<Self> {
        HermitianMatrix::new(r.entries)
    }
}

impl HermitianMatrix {
    pub fn new(entries: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::LengthMismatch {
                what: "Hermitian matrix rows",
                expected: 1,
                found: 0,
            });
        }
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                what: "Hermitian matrix row",
                expected: n,
                found: row.len(),
            });
        }
        if entries.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("Hermitian matrix"));
        }
        let scale = entries.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        let mut asym: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                asym = asym.max((entries[i][j] - entries[j][i].conj()).norm());
            }
        }
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn frobenius(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(h, x)| h * x).sum())
            .collect()
    }
}

/// Output of [`lanczos_reduce`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanczosReduction {
    /// `k x k` Jacobi matrix `S H S*`.
    pub jacobi: JacobiMatrix,
    /// `k x n` matrix `S` with orthonormal rows; `S v = |v| e_1`.
    pub basis: Vec<Vec<Complex64>>,
    /// Dimension of the Krylov space of `v`; `k = n` iff `v` is cyclic.
    pub k: usize,
}

/// `sum conj(x_i) y_i`.
fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduces `H` on the Krylov space of `v` to Jacobi form.
///
/// Stops early, with `k < n`, once the next off-diagonal entry drops below
/// [`LANCZOS_BREAKDOWN_TOL`] times the Frobenius norm of `H`.
pub fn lanczos_reduce(h: &HermitianMatrix, v: &[Complex64]) -> Result<LanczosReduction> {
    let n = h.n();
    if v.len() != n {
        return Err(Error::LengthMismatch {
            what: "lanczos_reduce: starting vector",
            expected: n,
            found: v.len(),
        });
    }
    if v.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("starting vector"));
    }
    let vnorm = norm(v);
    if vnorm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let threshold = LANCZOS_BREAKDOWN_TOL * h.frobenius();

    let mut q: Vec<Complex64> = v.iter().map(|z| z / vnorm).collect();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut b = Vec::new();
    let mut a: Vec<f64> = Vec::new();
    loop {
        let mut w = h.apply(&q);
        let bk = inner(&q, &w).re;
        b.push(bk);
        basis.push(q);
        if basis.len() == n {
            break;
        }
        for _ in 0..2 {
            for u in &basis {
                let c = inner(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
        let ak = norm(&w);
        if ak <= threshold {
            break;
        }
        a.push(ak);
        q = w.iter().map(|z| z / ak).collect();
    }
    let k = basis.len();
    let rows = basis
        .into_iter()
        .map(|q| q.into_iter().map(|z| z.conj()).collect())
        .collect();
    Ok(LanczosReduction {
        jacobi: JacobiMatrix::new(b, a)?,
        basis: rows,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(m: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::new(m.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect()).unwrap()
    }

    #[test]
    fn two_step_example() {
        let h = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let s = 0.5f64.sqrt();
        let r = lanczos_reduce(&h, &[c(s, 0.0), c(s, 0.0)]).unwrap();
        assert_eq!(r.k, 2);
        assert_abs_diff_eq!(r.jacobi.b()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.jacobi.b()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.jacobi.a()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eigenvector_stops_at_one() {
        let h = real(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let r = lanczos_reduce(&h, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.jacobi.b(), &[1.0]);
        assert_eq!(r.basis.len(), 1);
    }

    #[test]
    fn tridiagonal_input_is_fixed() {
        let h = real(&[&[1.0, 2.0, 0.0], &[2.0, -1.0, 0.5], &[0.0, 0.5, 3.0]]);
        let r = lanczos_reduce(&h, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r.k, 3);
        assert!(r.jacobi.max_abs_diff(&JacobiMatrix::new(vec![1.0, -1.0, 3.0], vec![2.0, 0.5]).unwrap()) < 1e-14);
        for (i, row) in r.basis.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((z - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn non_cyclic_vector() {
        let h = real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let r = lanczos_reduce(&h, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.k, 2);
    }

    #[test]
    fn rejects_bad_input() {
        let h = real(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(lanczos_reduce(&h, &[c(0.0, 0.0), c(0.0, 0.0)]), Err(Error::ZeroVector));
        assert!(HermitianMatrix::new(vec![vec![c(0.0, 0.0), c(1.0, 1.0)], vec![c(1.0, 1.0), c(0.0, 0.0)]]).is_err());
        assert!(HermitianMatrix::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]]).is_err());
    }

    #[test]
    fn json_form() {
        let h: HermitianMatrix =
            serde_json::from_str(r#"{"entries":[[[1,0],[0,2]],[[0,-2],[3,0]]]}"#).unwrap();
        assert_eq!(h.entries()[0][1], c(0.0, 2.0));
        assert!(serde_json::from_str::<HermitianMatrix>(r#"{"entries":[[[1,0],[0,2]],[[0,2],[3,0]]]}"#).is_err());
    }
}

use std::io::Read;
use std::path::Path;

use hermite_biehler::{ComplexPoly, JacobiMatrix, PerturbationSpec, ZeroSet};
use num_complex::Complex64;
use serde::Deserialize;

use crate::Failure;

/// Reads the whole input document from `path`, or stdin for `None` / `-`.
pub fn read(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Invalid(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("invalid input: {e}")))
}

/// `"re,im"` (or a bare real number).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub jacobi: JacobiMatrix,
    pub perturbation: PerturbationSpec,
}

/// A polynomial given either by coefficients or by its zeros.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Zeros(ZeroSet),
    Coeffs(ComplexPoly),
}

impl PolyInput {
    pub fn zeros(&self) -> Result<ZeroSet, Failure> {
        match self {
            PolyInput::Zeros(z) => Ok(z.clone()),
            PolyInput::Coeffs(p) => Ok(p.roots()?),
        }
    }
}

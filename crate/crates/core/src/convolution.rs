//! c-free additive and multiplicative convolution, and the three-way check.
//!
//! The transform path adds `R` and `cR` (or multiplies `T` and `cT`); the
//! axiomatic path expands words directly; the operator path realizes both
//! laws on disjoint letters of the two-level space and reads off moments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::axioms::{convolve_axiomatic, ConvolutionKind};
use crate::error::{Error, Result};
use crate::fock::{haagerup_operator, Letter, ModelKind};
use crate::law::TwoStateLaw;
use crate::series::{Poly, TruncatedSeries};
use crate::transform::{moments_from_transform, transform_from_moments, TransformKind};
use crate::two_level::{construct_model, simulate_law, EOperator};

fn check_mul_psi(law: &TwoStateLaw, name: &str) -> Result<()> {
    if law.psi().first().is_none_or(|v| v.is_zero()) {
        return Err(Error::Domain(format!("multiplicative convolution needs psi({name}) != 0")));
    }
    Ok(())
}

fn check_mul_phi(law: &TwoStateLaw, name: &str) -> Result<()> {
    if law.phi().first().is_none_or(|v| v.is_zero()) {
        return Err(Error::Domain(format!("operator realization needs phi({name}) != 0")));
    }
    Ok(())
}

/// Convolution through the transforms: `R`, `cR` add; `T`, `cT` multiply.
pub fn cfree_convolve(
    kind: ConvolutionKind,
    x: &TwoStateLaw,
    y: &TwoStateLaw,
    n_max: usize,
) -> Result<TwoStateLaw> {
    let x = x.truncate(n_max)?;
    let y = y.truncate(n_max)?;
    let (free, conditional) = match kind {
        ConvolutionKind::Add => (TransformKind::R, TransformKind::CR),
        ConvolutionKind::Mul => {
            check_mul_psi(&x, "X")?;
            check_mul_psi(&y, "Y")?;
            (TransformKind::T, TransformKind::CT)
        }
    };
    if n_max == 0 {
        return Ok(TwoStateLaw::zero(0));
    }
    let combine = |a: TruncatedSeries, b: TruncatedSeries| match kind {
        ConvolutionKind::Add => a.add(&b),
        ConvolutionKind::Mul => a.mul(&b),
    };
    let free_sum = combine(transform_from_moments(free, &x)?, transform_from_moments(free, &y)?)?;
    let psi = moments_from_transform(free, &free_sum, None)?;
    let cond_sum = combine(
        transform_from_moments(conditional, &x)?,
        transform_from_moments(conditional, &y)?,
    )?;
    let phi = moments_from_transform(conditional, &cond_sum, Some(&psi))?;
    TwoStateLaw::new(psi, phi)
}

/// An operator on the two-level space whose `(ψ, φ)` moments through
/// `n_max` equal the given law.
///
/// Additive: `π(a* + f(a)) + A* + A_{F⊗}` with `f = R/z`, `F = cR/z`.
/// Multiplicative: `d + d A* + A_{F⊗}` with `d = π((1 + a*) f(a))`,
/// `f = T`, `F = cT`.
pub fn realize_law(
    kind: ConvolutionKind,
    law: &TwoStateLaw,
    h_letter: Letter,
    k_letter: Letter,
    n_max: usize,
) -> Result<EOperator> {
    let law = law.truncate(n_max)?;
    match kind {
        ConvolutionKind::Add => {
            let over_z = |t: TransformKind| -> Result<Poly> {
                let series = transform_from_moments(t, &law)?;
                Ok(if series.order() == 0 { Poly::zero() } else { Poly::from_series(&series.shift_down()?) })
            };
            let f = over_z(TransformKind::R)?;
            let big_f = over_z(TransformKind::CR)?;
            let base = EOperator::pi(haagerup_operator(ModelKind::Additive, &f, h_letter)?);
            construct_model(ModelKind::Additive, &base, k_letter, &big_f)
        }
        ConvolutionKind::Mul => {
            check_mul_psi(&law, "X")?;
            check_mul_phi(&law, "X")?;
            let f = Poly::from_series(&transform_from_moments(TransformKind::T, &law)?);
            let big_f = Poly::from_series(&transform_from_moments(TransformKind::CT, &law)?);
            let base = EOperator::pi(haagerup_operator(ModelKind::Multiplicative, &f, h_letter)?);
            construct_model(ModelKind::Multiplicative, &base, k_letter, &big_f)
        }
    }
}

/// Convolution by simulating `α₁ + α₂` or `β₁β₂` on letters 0 and 1.
pub fn convolve_operator(
    kind: ConvolutionKind,
    x: &TwoStateLaw,
    y: &TwoStateLaw,
    n_max: usize,
) -> Result<TwoStateLaw> {
    let first = realize_law(kind, x, 0, 0, n_max)?;
    let second = realize_law(kind, y, 1, 1, n_max)?;
    let op = match kind {
        ConvolutionKind::Add => first + second,
        ConvolutionKind::Mul => first * second,
    };
    simulate_law(&op, n_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvolutionPath {
    Transform,
    Axiomatic,
    Operator,
}

impl ConvolutionPath {
    pub const ALL: [ConvolutionPath; 3] =
        [ConvolutionPath::Transform, ConvolutionPath::Axiomatic, ConvolutionPath::Operator];

    pub fn convolve(
        self,
        kind: ConvolutionKind,
        x: &TwoStateLaw,
        y: &TwoStateLaw,
        n_max: usize,
    ) -> Result<TwoStateLaw> {
        match self {
            ConvolutionPath::Transform => cfree_convolve(kind, x, y, n_max),
            ConvolutionPath::Axiomatic => {
                if kind == ConvolutionKind::Mul {
                    check_mul_psi(x, "X")?;
                    check_mul_psi(y, "Y")?;
                }
                convolve_axiomatic(kind, x, y, n_max)
            }
            ConvolutionPath::Operator => convolve_operator(kind, x, y, n_max),
        }
    }
}

impl fmt::Display for ConvolutionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvolutionPath::Transform => "transform",
            ConvolutionPath::Axiomatic => "axiomatic",
            ConvolutionPath::Operator => "operator",
        })
    }
}

impl FromStr for ConvolutionPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transform" => Ok(ConvolutionPath::Transform),
            "axiomatic" => Ok(ConvolutionPath::Axiomatic),
            "operator" => Ok(ConvolutionPath::Operator),
            other => Err(Error::Parse(format!("unknown convolution path {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paths {
    pub transform: TwoStateLaw,
    pub axiomatic: TwoStateLaw,
    pub operator: TwoStateLaw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// The path that disagrees with the transform path.
    pub path: ConvolutionPath,
    /// First moment order (1-based) where it differs.
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub kind: ConvolutionKind,
    pub agree: bool,
    pub paths: Option<Paths>,
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precondition_failure: Option<String>,
}

/// Runs all three convolution paths and compares them exactly.
pub fn cross_check(
    kind: ConvolutionKind,
    x: &TwoStateLaw,
    y: &TwoStateLaw,
    n_max: usize,
) -> CrossCheckReport {
    let failed = |e: Error| CrossCheckReport {
        kind,
        agree: false,
        paths: None,
        first_mismatch: None,
        precondition_failure: Some(e.to_string()),
    };
    if kind == ConvolutionKind::Mul {
        let pre = check_mul_psi(x, "X")
            .and(check_mul_psi(y, "Y"))
            .and(check_mul_phi(x, "X"))
            .and(check_mul_phi(y, "Y"));
        if let Err(e) = pre {
            return failed(e);
        }
    }
    let run = |path: ConvolutionPath| path.convolve(kind, x, y, n_max);
    let paths = match (run(ConvolutionPath::Transform), run(ConvolutionPath::Axiomatic), run(ConvolutionPath::Operator)) {
        (Ok(transform), Ok(axiomatic), Ok(operator)) => Paths { transform, axiomatic, operator },
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return failed(e),
    };
    let first_mismatch = [
        (ConvolutionPath::Axiomatic, &paths.axiomatic),
        (ConvolutionPath::Operator, &paths.operator),
    ]
    .into_iter()
    .find_map(|(path, law)| paths.transform.first_mismatch(law).map(|order| Mismatch { path, order }));
    CrossCheckReport {
        kind,
        agree: first_mismatch.is_none(),
        paths: Some(paths),
        first_mismatch,
        precondition_failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn geo(c: &Scalar, n: usize) -> Vec<Scalar> {
        (1..=n as u32).map(|k| c.pow(k)).collect()
    }

    #[test]
    fn additive_closed_form() {
        let (a, c) = (Scalar::ratio(1, 2), Scalar::ratio(-2, 3));
        let x = TwoStateLaw::new(vec![Scalar::zero(); 6], geo(&a, 6)).unwrap();
        let y = TwoStateLaw::new(vec![Scalar::zero(); 6], geo(&c, 6)).unwrap();
        let out = cfree_convolve(ConvolutionKind::Add, &x, &y, 6).unwrap();
        assert_eq!(out.phi(), geo(&(&a + &c), 6).as_slice());
        assert!(out.psi().iter().all(Scalar::is_zero));
        let report = cross_check(ConvolutionKind::Add, &x, &y, 6);
        assert!(report.agree, "{report:?}");
    }

    #[test]
    fn multiplicative_closed_form() {
        let (a, c) = (Scalar::from_int(2), Scalar::ratio(1, 3));
        let ones = vec![Scalar::one(); 6];
        let x = TwoStateLaw::new(ones.clone(), geo(&a, 6)).unwrap();
        let y = TwoStateLaw::new(ones.clone(), geo(&c, 6)).unwrap();
        let out = cfree_convolve(ConvolutionKind::Mul, &x, &y, 6).unwrap();
        assert_eq!(out.phi(), geo(&(&a * &c), 6).as_slice());
        assert_eq!(out.psi(), ones.as_slice());
        let report = cross_check(ConvolutionKind::Mul, &x, &y, 6);
        assert!(report.agree, "{report:?}");
    }

    #[test]
    fn zero_law_is_additive_identity() {
        let x = TwoStateLaw::new(
            vec![Scalar::from_int(1), Scalar::ratio(1, 2), Scalar::from_int(-3)],
            vec![Scalar::from_int(2), Scalar::from_int(0), Scalar::ratio(5, 7)],
        )
        .unwrap();
        let out = cfree_convolve(ConvolutionKind::Add, &x, &TwoStateLaw::zero(3), 3).unwrap();
        assert_eq!(out, x);
    }

    #[test]
    fn realize_zero_law() {
        let op = realize_law(ConvolutionKind::Add, &TwoStateLaw::zero(5), 0, 0, 5).unwrap();
        assert_eq!(simulate_law(&op, 5).unwrap(), TwoStateLaw::zero(5));
    }

    #[test]
    fn realize_reproduces_law() {
        let law = TwoStateLaw::new(
            vec![Scalar::from_int(1), Scalar::ratio(3, 2), Scalar::from_int(-1), Scalar::from_int(4)],
            vec![Scalar::ratio(-1, 2), Scalar::from_int(2), Scalar::from_int(0), Scalar::ratio(1, 3)],
        )
        .unwrap();
        for kind in [ConvolutionKind::Add, ConvolutionKind::Mul] {
            let op = realize_law(kind, &law, 0, 0, 4).unwrap();
            assert_eq!(simulate_law(&op, 4).unwrap(), law, "{kind}");
        }
    }

    #[test]
    fn mul_precondition_report() {
        let x = TwoStateLaw::new(vec![Scalar::zero(); 3], vec![Scalar::one(); 3]).unwrap();
        let y = TwoStateLaw::point(&Scalar::one(), 3);
        let report = cross_check(ConvolutionKind::Mul, &x, &y, 3);
        assert!(!report.agree);
        assert!(report.paths.is_none());
        assert!(report.precondition_failure.unwrap().contains("psi(X)"));
        assert!(cfree_convolve(ConvolutionKind::Mul, &x, &y, 3).is_err());
    }
}

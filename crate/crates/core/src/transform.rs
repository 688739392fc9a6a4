//! Moment <-> transform calculus for a two-state law.
//!
//! With `m(z) = sum ψ(X^k) z^k` and `M(z) = sum φ(X^k) z^k` the transforms are
//! the formal solutions of
//!
//! ```text
//!   m(z)                          = R(z(1 + m(z)))
//!   m(z) / z                      = T(m(z)) · (1 + m(z))
//!   cR(z(1 + m(z))) · (1 + M(z))  = M(z) · (1 + m(z))
//!   cT(m(z)) · (1 + M(z))         = M(z) / z
//! ```
//!
//! and `S = 1/T`, `cS = 1/cT`. From `N` moments, `R` and `cR` are determined
//! through order `N`; the multiplicative transforms only through order `N - 1`,
//! since the right-hand sides divide by `z`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::TwoStateLaw;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    R,
    T,
    S,
    #[serde(rename = "cR")]
    CR,
    #[serde(rename = "cT")]
    CT,
    #[serde(rename = "cS")]
    CS,
}

impl TransformKind {
    pub const ALL: [TransformKind; 6] = [
        TransformKind::R,
        TransformKind::T,
        TransformKind::S,
        TransformKind::CR,
        TransformKind::CT,
        TransformKind::CS,
    ];

    /// True for the transforms that describe `φ`-moments.
    pub fn is_conditional(self) -> bool {
        matches!(self, TransformKind::CR | TransformKind::CT | TransformKind::CS)
    }

    pub fn is_additive(self) -> bool {
        matches!(self, TransformKind::R | TransformKind::CR)
    }

    /// Order of the transform computed from a law of order `n`.
    pub fn transform_order(self, n: usize) -> usize {
        if self.is_additive() {
            n
        } else {
            n.saturating_sub(1)
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TransformKind::R => "R",
            TransformKind::T => "T",
            TransformKind::S => "S",
            TransformKind::CR => "cR",
            TransformKind::CT => "cT",
            TransformKind::CS => "cS",
        };
        f.write_str(s)
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(TransformKind::R),
            "T" => Ok(TransformKind::T),
            "S" => Ok(TransformKind::S),
            "cR" => Ok(TransformKind::CR),
            "cT" => Ok(TransformKind::CT),
            "cS" => Ok(TransformKind::CS),
            other => Err(Error::Parse(format!("unknown transform kind {other:?}"))),
        }
    }
}

fn require_nonzero_first(moments: &[Scalar], name: &str) -> Result<()> {
    match moments.first() {
        Some(x) if !x.is_zero() => Ok(()),
        Some(_) => Err(Error::Domain(format!("{name}(X) = 0"))),
        None => Err(Error::Domain(format!("{name}(X) is unavailable in an order-0 law"))),
    }
}

/// `z (1 + m(z))`, the substitution series of the additive transforms.
fn additive_substitution(m: &TruncatedSeries) -> TruncatedSeries {
    m.add_constant(&Scalar::one()).shift_up()
}

/// `(s/z) / (1 + s)` at order `N - 1`, for a generating series `s` of order `N`.
fn multiplicative_ratio(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    let over_z = s.shift_down()?;
    let one_plus = s.add_constant(&Scalar::one()).with_order(over_z.order());
    over_z.mul(&one_plus.reciprocal()?)
}

/// Computes the requested transform of a law.
pub fn transform_from_moments(kind: TransformKind, law: &TwoStateLaw) -> Result<TruncatedSeries> {
    let m = law.psi_series();
    let big_m = law.phi_series();
    match kind {
        TransformKind::R => TruncatedSeries::solve_against(&m, &additive_substitution(&m)),
        TransformKind::CR => {
            let one = Scalar::one();
            let target = big_m
                .mul(&m.add_constant(&one))?
                .mul(&big_m.add_constant(&one).reciprocal()?)?;
            TruncatedSeries::solve_against(&target, &additive_substitution(&m))
        }
        TransformKind::T | TransformKind::CT => {
            require_nonzero_first(law.psi(), "psi")?;
            let source = if kind == TransformKind::T { &m } else { &big_m };
            let ratio = multiplicative_ratio(source)?;
            let inverse = m.with_order(ratio.order()).reversion()?;
            ratio.compose(&inverse)
        }
        TransformKind::S => transform_from_moments(TransformKind::T, law)?.reciprocal(),
        TransformKind::CS => {
            require_nonzero_first(law.phi(), "phi")?;
            transform_from_moments(TransformKind::CT, law)?.reciprocal()
        }
    }
}

/// Recovers moments from a transform.
///
/// `R`/`T`/`S` give `ψ`-moments; `cR`/`cT`/`cS` give `φ`-moments and need
/// the `ψ`-moments as well. Additive transforms of order `N` yield `N`
/// moments, multiplicative ones `N + 1`.
pub fn moments_from_transform(
    kind: TransformKind,
    transform: &TruncatedSeries,
    psi_moments: Option<&[Scalar]>,
) -> Result<Vec<Scalar>> {
    let n_out = match kind {
        TransformKind::R | TransformKind::CR => transform.order(),
        _ => transform.order() + 1,
    };
    let psi = if kind.is_conditional() {
        let psi = psi_moments.ok_or_else(|| {
            Error::Domain(format!("{kind} inversion needs the psi-moments"))
        })?;
        if psi.len() < n_out {
            return Err(Error::InsufficientData { needed: n_out, available: psi.len() });
        }
        Some(&psi[..n_out])
    } else {
        None
    };

    match kind {
        TransformKind::R => {
            if !transform.constant_term().is_zero() {
                return Err(Error::Domain("R must have zero constant term".into()));
            }
            // m <- R(z(1+m)); pass i fixes the z^(i+1) coefficient, so it
            // runs at order i + 1.
            let mut m = TruncatedSeries::zero(0);
            for ord in 1..=n_out {
                m = transform.with_order(ord).compose(&additive_substitution(&m.with_order(ord)))?;
            }
            Ok(m.tail())
        }
        TransformKind::CR => {
            if !transform.constant_term().is_zero() {
                return Err(Error::Domain("cR must have zero constant term".into()));
            }
            let m = TruncatedSeries::from_moments(psi.unwrap());
            let one = Scalar::one();
            // G = cR(z(1+m)) and M(1 + m) = G(1 + M)  =>  M = G / (1 + m - G).
            let g = transform.compose(&additive_substitution(&m))?;
            let denom = m.add_constant(&one).sub(&g)?;
            Ok(g.mul(&denom.reciprocal()?)?.tail())
        }
        TransformKind::T => {
            if transform.constant_term().is_zero() {
                return Err(Error::Domain(
                    "T(0) = psi(X) must be nonzero for the T-transform".into(),
                ));
            }
            let t = transform.with_order(n_out);
            let one = Scalar::one();
            // m <- z · T(m) · (1 + m), growing the order by one per pass.
            let mut m = TruncatedSeries::zero(0);
            for ord in 1..=n_out {
                let prev = m.with_order(ord);
                m = t.with_order(ord).compose(&prev)?.mul(&prev.add_constant(&one))?.shift_up();
            }
            Ok(m.tail())
        }
        TransformKind::CT => {
            let psi = psi.unwrap();
            require_nonzero_first(psi, "psi")?;
            let m = TruncatedSeries::from_moments(&psi[..transform.order()]);
            // c = cT(m);  M = z c (1 + M)  =>  M = zc / (1 - zc).
            let zc = transform.compose(&m)?.with_order(n_out).shift_up();
            let denom = TruncatedSeries::one(n_out).sub(&zc)?;
            Ok(zc.mul(&denom.reciprocal()?)?.tail())
        }
        TransformKind::S => moments_from_transform(TransformKind::T, &transform.reciprocal()?, None),
        TransformKind::CS => {
            moments_from_transform(TransformKind::CT, &transform.reciprocal()?, psi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    fn geometric(c: &Scalar, n: usize) -> Vec<Scalar> {
        (1..=n as u32).map(|k| c.pow(k)).collect()
    }

    #[test]
    fn r_of_semicircle_is_z_squared() {
        let law = TwoStateLaw::single_state(ints(&[0, 1, 0, 2, 0, 5]));
        let r = transform_from_moments(TransformKind::R, &law).unwrap();
        assert_eq!(r.coeffs(), ints(&[0, 0, 1, 0, 0, 0, 0]).as_slice());
        let back = moments_from_transform(TransformKind::R, &r, None).unwrap();
        assert_eq!(back, ints(&[0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn zero_law_has_zero_r() {
        let r = transform_from_moments(TransformKind::R, &TwoStateLaw::zero(5)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn cr_with_vanishing_psi() {
        let a = Scalar::ratio(1, 2);
        let law = TwoStateLaw::new(vec![Scalar::zero(); 6], geometric(&a, 6)).unwrap();
        let cr = transform_from_moments(TransformKind::CR, &law).unwrap();
        assert_eq!(cr, TruncatedSeries::from_prefix(&[Scalar::zero(), a.clone()], 6));
        // Inverse direction with cR = (a + c) z.
        let c = Scalar::ratio(1, 3);
        let sum = &a + &c;
        let target = TruncatedSeries::from_prefix(&[Scalar::zero(), sum.clone()], 6);
        let phi = moments_from_transform(TransformKind::CR, &target, Some(law.psi())).unwrap();
        assert_eq!(phi, geometric(&sum, 6));
    }

    #[test]
    fn t_of_constant_one_law() {
        let law = TwoStateLaw::single_state(ints(&[1; 6]));
        let t = transform_from_moments(TransformKind::T, &law).unwrap();
        assert_eq!(t, TruncatedSeries::one(5));
        assert_eq!(moments_from_transform(TransformKind::T, &t, None).unwrap(), ints(&[1; 6]));
    }

    #[test]
    fn ct_of_geometric_phi() {
        let c = Scalar::from_int(3);
        let law = TwoStateLaw::new(ints(&[1; 6]), geometric(&c, 6)).unwrap();
        let ct = transform_from_moments(TransformKind::CT, &law).unwrap();
        assert_eq!(ct, TruncatedSeries::constant(c.clone(), 5));
        let s = transform_from_moments(TransformKind::CS, &law).unwrap();
        assert_eq!(s, TruncatedSeries::constant(Scalar::ratio(1, 3), 5));
    }

    #[test]
    fn multiplicative_kinds_need_nonzero_first_moment() {
        let law = TwoStateLaw::new(ints(&[0, 1, 0]), ints(&[1, 1, 1])).unwrap();
        for kind in [TransformKind::T, TransformKind::S, TransformKind::CT, TransformKind::CS] {
            assert!(matches!(transform_from_moments(kind, &law), Err(Error::Domain(_))), "{kind}");
        }
        let law = TwoStateLaw::new(ints(&[1, 1, 1]), ints(&[0, 1, 0])).unwrap();
        assert!(transform_from_moments(TransformKind::CT, &law).is_ok());
        let err = transform_from_moments(TransformKind::CS, &law).unwrap_err();
        assert!(err.to_string().contains("phi"));
    }

    #[test]
    fn inversion_preconditions() {
        let t = TruncatedSeries::zero(3);
        assert!(matches!(moments_from_transform(TransformKind::T, &t, None), Err(Error::Domain(_))));
        assert!(matches!(moments_from_transform(TransformKind::CR, &t, None), Err(Error::Domain(_))));
        let r = TruncatedSeries::one(3);
        assert!(matches!(moments_from_transform(TransformKind::R, &r, None), Err(Error::Domain(_))));
    }

    #[test]
    fn two_state_collapse() {
        let law = TwoStateLaw::single_state(vec![
            Scalar::from_int(2),
            Scalar::ratio(-1, 3),
            Scalar::from_int(5),
            Scalar::ratio(7, 2),
        ]);
        assert_eq!(
            transform_from_moments(TransformKind::R, &law).unwrap(),
            transform_from_moments(TransformKind::CR, &law).unwrap()
        );
        assert_eq!(
            transform_from_moments(TransformKind::T, &law).unwrap(),
            transform_from_moments(TransformKind::CT, &law).unwrap()
        );
    }
}

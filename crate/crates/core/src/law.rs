use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

/// Moments `ψ(X^1..X^N)` and `φ(X^1..X^N)` of a single variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TwoStateLaw {
    order: usize,
    psi: Vec<Scalar>,
    phi: Vec<Scalar>,
}

impl TwoStateLaw {
    pub fn new(psi: Vec<Scalar>, phi: Vec<Scalar>) -> Result<Self> {
        if psi.len() != phi.len() {
            return Err(Error::OrderMismatch(format!(
                "psi has {} moments but phi has {}",
                psi.len(),
                phi.len()
            )));
        }
        Ok(TwoStateLaw { order: psi.len(), psi, phi })
    }

    /// The law with `φ = ψ`.
    pub fn single_state(moments: Vec<Scalar>) -> Self {
        TwoStateLaw { order: moments.len(), phi: moments.clone(), psi: moments }
    }

    /// All moments zero: the law of `X = 0`.
    pub fn zero(order: usize) -> Self {
        Self::single_state(vec![Scalar::zero(); order])
    }

    /// Every moment equal to `c^n` in both states: the law of `X = c·1`.
    pub fn point(c: &Scalar, order: usize) -> Self {
        Self::single_state((1..=order as u32).map(|n| c.pow(n)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn psi(&self) -> &[Scalar] {
        &self.psi
    }

    pub fn phi(&self) -> &[Scalar] {
        &self.phi
    }

    /// `ψ(X^n)` with the convention `ψ(X^0) = 1`.
    pub fn psi_moment(&self, n: usize) -> Scalar {
        if n == 0 {
            Scalar::one()
        } else {
            self.psi[n - 1].clone()
        }
    }

    /// `φ(X^n)` with `φ(X^0) = 1`.
    pub fn phi_moment(&self, n: usize) -> Scalar {
        if n == 0 {
            Scalar::one()
        } else {
            self.phi[n - 1].clone()
        }
    }

    /// `m(z) = sum ψ(X^k) z^k`.
    pub fn psi_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_moments(&self.psi)
    }

    /// `M(z) = sum φ(X^k) z^k`.
    pub fn phi_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_moments(&self.phi)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientData { needed: order, available: self.order });
        }
        Ok(TwoStateLaw {
            order,
            psi: self.psi[..order].to_vec(),
            phi: self.phi[..order].to_vec(),
        })
    }

    /// Index of the first order at which the two laws differ, 1-based.
    pub fn first_mismatch(&self, other: &TwoStateLaw) -> Option<usize> {
        let n = self.order.min(other.order);
        (0..n)
            .find(|&k| self.psi[k] != other.psi[k] || self.phi[k] != other.phi[k])
            .map(|k| k + 1)
            .or(if self.order != other.order { Some(n + 1) } else { None })
    }
}

impl<'de> Deserialize<'de> for TwoStateLaw {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            order: Option<usize>,
            psi: Vec<Scalar>,
            phi: Vec<Scalar>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let law = TwoStateLaw::new(repr.psi, repr.phi).map_err(serde::de::Error::custom)?;
        if let Some(order) = repr.order {
            if order != law.order {
                return Err(serde::de::Error::custom(format!(
                    "declared order {order} but {} moments given",
                    law.order
                )));
            }
        }
        Ok(law)
    }
}

//! Truncated formal power series and finite polynomials over [`Scalar`].
//!
//! A [`TruncatedSeries`] of order `N` stores exactly `N + 1` coefficients and
//! represents `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`. Binary operations
//! require equal orders; nothing is ever read or written past index `N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`, truncated at `order`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Scalar::one();
        }
        s
    }

    /// Builds a series of the given order from a coefficient prefix; missing
    /// entries are zero and extra entries are dropped.
    pub fn from_prefix(coeffs: &[Scalar], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = src.clone();
        }
        s
    }

    /// `coeffs.len() - 1` becomes the order. Empty input is rejected.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OrderMismatch("series needs at least one coefficient".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// `1 + x_1 z + ... + x_N z^N` style generating series with zero constant
    /// term: `sum_k moments[k-1] z^k`, order `moments.len()`.
    pub fn from_moments(moments: &[Scalar]) -> Self {
        let mut coeffs = Vec::with_capacity(moments.len() + 1);
        coeffs.push(Scalar::zero());
        coeffs.extend(moments.iter().cloned());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, value: Scalar) {
        self.coeffs[k] = value;
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Coefficients `1..=N`, the moment sequence when this is a generating series.
    pub fn tail(&self) -> Vec<Scalar> {
        self.coeffs[1..].to_vec()
    }

    /// Re-truncates (or zero-pads) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_prefix(&self.coeffs, order)
    }

    fn check_order(&self, other: &Self, op: &str) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(format!(
                "{op}: orders {} and {} differ",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other, "add")?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other, "sub")?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add_constant(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other, "mul")?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Scalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Multiplies by `z`; the top coefficient falls off, order is unchanged.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Scalar::zero());
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// Divides by `z`. The result has order `N - 1` because the `z^N`
    /// coefficient of the quotient is unknown.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("division by z needs a zero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::OrderMismatch("cannot divide an order-0 series by z".into()));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// `f∘g` truncated at the common order (Horner scheme).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner, "compose")?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionUndefined(inner.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(inner).add_constant(c);
        }
        Ok(acc)
    }

    /// Compositional inverse `h` with `g∘h = h∘g = z` through order `N`.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible(format!(
                "reversion needs g(0) = 0, got {}",
                self.coeffs[0]
            )));
        }
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let lead = match self.coeffs.get(1).and_then(Scalar::recip) {
            Some(inv) => inv,
            None => return Err(Error::NotInvertible("reversion needs g'(0) != 0".into())),
        };
        // h∘g = z. Writing g = g_1 ĝ with ĝ = z + O(z^2), k∘ĝ = z gives
        // h(u) = k(u / g_1).
        let normalized = self.scale(&lead);
        let k = Self::solve_against(&Self::identity(n), &normalized)?;
        let mut scale = Scalar::one();
        let coeffs = k
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &scale;
                scale *= &lead;
                out
            })
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Multiplicative inverse through order `N`.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].recip().ok_or_else(|| {
            Error::NotInvertible("reciprocal needs a nonzero constant term".into())
        })?;
        let n = self.order();
        let mut out = vec![Scalar::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let acc: Scalar = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out[k] = -(acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Finds `h` with `h∘w = target` when `w = z + O(z^2)`.
    ///
    /// Triangular elimination: `h_n = target_n - sum_{k<n} h_k [z^n] w^k`,
    /// which needs no reversion and no condition beyond `w_1 = 1`.
    pub fn solve_against(target: &Self, w: &Self) -> Result<Self> {
        target.check_order(w, "solve_against")?;
        if !w.coeffs[0].is_zero() || w.order() >= 1 && !w.coeffs[1].is_one() {
            return Err(Error::Domain("substitution series must be z + O(z^2)".into()));
        }
        if !target.coeffs[0].is_zero() {
            return Err(Error::Domain("target must have zero constant term".into()));
        }
        let n = target.order();
        let mut h = Self::zero(n);
        let mut powers = Vec::with_capacity(n + 1);
        let mut p = Self::one(n);
        for _ in 0..=n {
            powers.push(p.clone());
            p = p.mul_unchecked(w);
        }
        for k in 1..=n {
            let lower: Scalar = (1..k).map(|j| &h.coeffs[j] * &powers[j].coeffs[k]).sum();
            h.coeffs[k] = &target.coeffs[k] - lower;
        }
        Ok(h)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr { order: self.order(), coeffs: self.coeffs.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "series of order {} needs {} coefficients, got {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        Ok(TruncatedSeries { coeffs: repr.coeffs })
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<Scalar>,
}

/// A polynomial `f_0 + f_1 X + ... + f_d X^d`, kept without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `X^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add_constant(&self, c: &Scalar) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        coeffs[0] += c;
        Poly::new(coeffs)
    }

    /// Views the polynomial as a series of the given order (dropping higher terms).
    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_prefix(&self.coeffs, order)
    }

    /// All coefficients of a series as a polynomial.
    pub fn from_series(s: &TruncatedSeries) -> Poly {
        Poly::new(s.coeffs().to_vec())
    }

    /// `z * self`.
    pub fn shift_up(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }
}

//! Truncated full Fock space over an orthonormal family of letters.
//!
//! Basis vectors are words `e_{i_1} ⊗ ... ⊗ e_{i_k}`; the empty word is the
//! vacuum `ω`. Operators are expression trees evaluated lazily against sparse
//! vectors, so only the part of the space reachable from the input is ever
//! materialized.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Poly;

pub type Letter = u16;

/// A tensor word over letter indices. The empty word is the vacuum.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }

    /// `letter^{⊗n}`.
    pub fn repeat(letter: Letter, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    pub fn strip_first(&self) -> Word {
        Word(self.0[1..].to_vec())
    }

    /// True if every letter equals `letter` and there are exactly `n` of them.
    pub fn is_power_of(&self, letter: Letter, n: usize) -> bool {
        self.0.len() == n && self.0.iter().all(|&l| l == letter)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ω")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// Sparse vector indexed by `K`, with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVector<K: Ord> {
    entries: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> Default for SparseVector<K> {
    fn default() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        let mut v = Self::zero();
        v.entries.insert(key, Scalar::one());
        v
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.entries.get(key).cloned().unwrap_or_default()
    }

    pub fn remove(&mut self, key: &K) -> Scalar {
        self.entries.remove(key).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVector { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for SparseVector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

pub type FockVector = SparseVector<Word>;

impl FockVector {
    pub fn vacuum() -> Self {
        Self::basis(Word::empty())
    }

    pub fn vacuum_coeff(&self) -> Scalar {
        self.coeff(&Word::empty())
    }
}

/// Operator expressions on the full Fock space.
///
/// `Product` factors compose like written operators: the last factor acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum FockOperator {
    Identity,
    Zero,
    Create { letter: Letter },
    Annihilate { letter: Letter },
    Sum { terms: Vec<FockOperator> },
    Product { factors: Vec<FockOperator> },
    Scale { by: Scalar, of: Box<FockOperator> },
    /// `sum_k coeffs_k · of^k`.
    Poly { coeffs: Poly, of: Box<FockOperator> },
}

/// Upper bounds for how a word's length can move under an operator.
///
/// `net` bounds the final change for surviving components, `peak` the largest
/// excursion above the starting length at any intermediate step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub net: i64,
    pub peak: i64,
}

impl RankProfile {
    pub const NEUTRAL: RankProfile = RankProfile { net: 0, peak: 0 };

    /// Profile of `self` applied after `first`.
    pub fn then(self, first: RankProfile) -> RankProfile {
        RankProfile { net: first.net + self.net, peak: first.peak.max(first.net + self.peak) }
    }

    pub fn join(self, other: RankProfile) -> RankProfile {
        RankProfile { net: self.net.max(other.net), peak: self.peak.max(other.peak) }
    }

    pub fn power(self, n: usize) -> RankProfile {
        (0..n).fold(RankProfile::NEUTRAL, |acc, _| self.then(acc))
    }

    /// Rank sufficient to apply the operator `n` times starting from the vacuum.
    pub fn demand(self, n: usize) -> usize {
        self.power(n).peak.max(0) as usize
    }
}

impl FockOperator {
    pub fn create(letter: Letter) -> Self {
        FockOperator::Create { letter }
    }

    pub fn annihilate(letter: Letter) -> Self {
        FockOperator::Annihilate { letter }
    }

    pub fn sum(terms: Vec<FockOperator>) -> Self {
        FockOperator::Sum { terms }
    }

    pub fn product(factors: Vec<FockOperator>) -> Self {
        FockOperator::Product { factors }
    }

    pub fn scaled(self, by: Scalar) -> Self {
        FockOperator::Scale { by, of: Box::new(self) }
    }

    /// `f(self)`.
    pub fn poly(f: Poly, of: FockOperator) -> Self {
        FockOperator::Poly { coeffs: f, of: Box::new(of) }
    }

    pub fn pow(&self, n: usize) -> Self {
        FockOperator::product(vec![self.clone(); n])
    }

    pub fn rank_profile(&self) -> RankProfile {
        match self {
            FockOperator::Identity | FockOperator::Zero => RankProfile::NEUTRAL,
            FockOperator::Create { .. } => RankProfile { net: 1, peak: 1 },
            FockOperator::Annihilate { .. } => RankProfile { net: -1, peak: 0 },
            FockOperator::Sum { terms } => terms
                .iter()
                .map(FockOperator::rank_profile)
                .reduce(RankProfile::join)
                .unwrap_or(RankProfile::NEUTRAL),
            FockOperator::Product { factors } => factors
                .iter()
                .rev()
                .fold(RankProfile::NEUTRAL, |acc, f| f.rank_profile().then(acc)),
            FockOperator::Scale { of, .. } => of.rank_profile(),
            FockOperator::Poly { coeffs, of } => {
                let base = of.rank_profile();
                coeffs
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, _)| base.power(k))
                    .reduce(RankProfile::join)
                    .unwrap_or(RankProfile::NEUTRAL)
            }
        }
    }

    /// Largest letter index mentioned, if any.
    pub fn max_letter(&self) -> Option<Letter> {
        match self {
            FockOperator::Identity | FockOperator::Zero => None,
            FockOperator::Create { letter } | FockOperator::Annihilate { letter } => Some(*letter),
            FockOperator::Sum { terms } => terms.iter().filter_map(FockOperator::max_letter).max(),
            FockOperator::Product { factors } => {
                factors.iter().filter_map(FockOperator::max_letter).max()
            }
            FockOperator::Scale { of, .. } | FockOperator::Poly { of, .. } => of.max_letter(),
        }
    }
}

impl Add for FockOperator {
    type Output = FockOperator;

    fn add(self, rhs: FockOperator) -> FockOperator {
        let mut terms = match self {
            FockOperator::Sum { terms } => terms,
            other => vec![other],
        };
        match rhs {
            FockOperator::Sum { terms: more } => terms.extend(more),
            other => terms.push(other),
        }
        FockOperator::Sum { terms }
    }
}

impl Mul for FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: FockOperator) -> FockOperator {
        let mut factors = match self {
            FockOperator::Product { factors } => factors,
            other => vec![other],
        };
        match rhs {
            FockOperator::Product { factors: more } => factors.extend(more),
            other => factors.push(other),
        }
        FockOperator::Product { factors }
    }
}

/// The Fock space truncated at word length `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    pub rank: usize,
}

impl FockSpace {
    pub fn new(rank: usize) -> Self {
        FockSpace { rank }
    }

    /// Applies `op` to `v`. A creation that would exceed the rank is an error,
    /// never a silent drop.
    pub fn apply(&self, op: &FockOperator, v: &FockVector) -> Result<FockVector> {
        match op {
            FockOperator::Identity => Ok(v.clone()),
            FockOperator::Zero => Ok(FockVector::zero()),
            FockOperator::Create { letter } => {
                let mut out = FockVector::zero();
                for (w, c) in v.iter() {
                    if w.len() >= self.rank {
                        return Err(Error::Overflow { space: "T(H)", limit: self.rank });
                    }
                    out.add_term(w.prepend(*letter), c.clone());
                }
                Ok(out)
            }
            FockOperator::Annihilate { letter } => Ok(v
                .iter()
                .filter(|(w, _)| w.first() == Some(*letter))
                .map(|(w, c)| (w.strip_first(), c.clone()))
                .collect()),
            FockOperator::Sum { terms } => {
                let mut out = FockVector::zero();
                for t in terms {
                    out.add_scaled(&self.apply(t, v)?, &Scalar::one());
                }
                Ok(out)
            }
            FockOperator::Product { factors } => {
                let mut cur = v.clone();
                for f in factors.iter().rev() {
                    if cur.is_zero() {
                        break;
                    }
                    cur = self.apply(f, &cur)?;
                }
                Ok(cur)
            }
            FockOperator::Scale { by, of } => Ok(self.apply(of, v)?.scale(by)),
            FockOperator::Poly { coeffs, of } => {
                // Horner: c_0 v + op(c_1 v + op(c_2 v + ...)).
                let mut acc = FockVector::zero();
                for c in coeffs.coeffs().iter().rev() {
                    if !acc.is_zero() {
                        acc = self.apply(of, &acc)?;
                    }
                    acc.add_scaled(v, c);
                }
                Ok(acc)
            }
        }
    }

    /// `⟨op^n ω, ω⟩` for `n = 1..=n_max`.
    pub fn vacuum_moments(&self, op: &FockOperator, n_max: usize) -> Result<Vec<Scalar>> {
        let mut v = FockVector::vacuum();
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            v = self.apply(op, &v)?;
            out.push(v.vacuum_coeff());
        }
        Ok(out)
    }

    /// `⟨op ω, ω⟩`.
    pub fn vacuum_state(&self, op: &FockOperator) -> Result<Scalar> {
        Ok(self.apply(op, &FockVector::vacuum())?.vacuum_coeff())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Additive,
    Multiplicative,
}

/// `a*_i + f(a_i)` (additive) or `(1 + a*_i) f(a_i)` (multiplicative).
///
/// The additive operator has `R(z) = z f(z)`, the multiplicative one
/// `T(z) = f(z)`; the latter needs `f(0) != 0`.
pub fn haagerup_operator(kind: ModelKind, f: &Poly, letter: Letter) -> Result<FockOperator> {
    let f_of_a = FockOperator::poly(f.clone(), FockOperator::annihilate(letter));
    match kind {
        ModelKind::Additive => Ok(FockOperator::create(letter) + f_of_a),
        ModelKind::Multiplicative => {
            if f.constant_term().is_zero() {
                return Err(Error::Domain("multiplicative model needs f(0) != 0".into()));
            }
            Ok((FockOperator::Identity + FockOperator::create(letter)) * f_of_a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    #[test]
    fn annihilation_basics() {
        let space = FockSpace::new(4);
        let a0 = FockOperator::annihilate(0);
        assert!(space.apply(&a0, &FockVector::vacuum()).unwrap().is_zero());
        let round = FockOperator::annihilate(0) * FockOperator::create(0);
        assert_eq!(space.apply(&round, &FockVector::vacuum()).unwrap(), FockVector::vacuum());
        let v = FockVector::basis(Word::new(&[0]));
        assert!(space.apply(&FockOperator::annihilate(1), &v).unwrap().is_zero());
    }

    #[test]
    fn semicircle_moments_match_catalan() {
        let op = FockOperator::create(0) + FockOperator::annihilate(0);
        let moments = FockSpace::new(6).vacuum_moments(&op, 6).unwrap();
        // Catalan recursion as an independent check.
        let mut cat = vec![1i64];
        for n in 1..=3usize {
            cat.push((0..n).map(|k| cat[k] * cat[n - 1 - k]).sum());
        }
        let expected: Vec<i64> = (1..=6).map(|n| if n % 2 == 1 { 0 } else { cat[n / 2] }).collect();
        assert_eq!(moments, ints(&expected));
        assert_eq!(moments, ints(&[0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn trivial_moments() {
        let space = FockSpace::new(5);
        assert_eq!(space.vacuum_moments(&FockOperator::Identity, 4).unwrap(), ints(&[1; 4]));
        assert_eq!(space.vacuum_moments(&FockOperator::create(0), 4).unwrap(), ints(&[0; 4]));
    }

    #[test]
    fn overflow_is_reported() {
        let op = FockOperator::create(0) + FockOperator::annihilate(0);
        let err = FockSpace::new(3).vacuum_moments(&op, 6).unwrap_err();
        assert_eq!(err, Error::Overflow { space: "T(H)", limit: 3 });
    }

    #[test]
    fn haagerup_examples() {
        let space = FockSpace::new(6);
        let add = haagerup_operator(ModelKind::Additive, &Poly::x(), 0).unwrap();
        assert_eq!(space.vacuum_moments(&add, 6).unwrap(), ints(&[0, 1, 0, 2, 0, 5]));
        let mul = haagerup_operator(ModelKind::Multiplicative, &Poly::from_ints(&[1]), 0).unwrap();
        assert_eq!(space.vacuum_moments(&mul, 6).unwrap(), ints(&[1; 6]));
        let free = haagerup_operator(ModelKind::Additive, &Poly::zero(), 0).unwrap();
        assert_eq!(space.vacuum_moments(&free, 6).unwrap(), ints(&[0; 6]));
        assert!(matches!(
            haagerup_operator(ModelKind::Multiplicative, &Poly::x(), 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rank_profile_bounds() {
        let add = haagerup_operator(ModelKind::Additive, &Poly::from_ints(&[1, 2, 3]), 0).unwrap();
        assert_eq!(add.rank_profile(), RankProfile { net: 1, peak: 1 });
        assert_eq!(add.rank_profile().demand(6), 6);
        let lower = FockOperator::create(0) * FockOperator::annihilate(0).pow(2);
        assert_eq!(lower.rank_profile(), RankProfile { net: -1, peak: 0 });
        assert_eq!(lower.rank_profile().demand(4), 0);
    }
}

//! The two-level space `E = T(H) ⊕ (T(H) ⊗ T(K))` with its two vector states.
//!
//! `Left(h)` spans the first summand, whose vacuum `Left(ω)` carries `ψ`.
//! `Right(h, u)` spans the tensor summand; `Right(ω, ω)` is `Ω`, which carries
//! `φ`. The embedding `π(a)` acts as `a` on the first summand and as
//! `(a ⊗ Id)∘(Id - P_Ω)` on the second, so `π(Id)` is the identity of `E ⊖ ℂΩ`
//! and `π(a)Ω = 0`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockSpace, FockVector, Letter, ModelKind, RankProfile, SparseVector, Word};
use crate::law::TwoStateLaw;
use crate::scalar::Scalar;
use crate::series::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EBasis {
    Left(Word),
    Right(Word, Word),
}

impl EBasis {
    /// `Left(ω)`, the vector defining `ψ`.
    pub fn psi_vacuum() -> Self {
        EBasis::Left(Word::empty())
    }

    /// `Ω = ω ⊗ ω₁`, the vector defining `φ`.
    pub fn omega() -> Self {
        EBasis::Right(Word::empty(), Word::empty())
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, EBasis::Right(h, u) if h.is_empty() && u.is_empty())
    }
}

pub type EVector = SparseVector<EBasis>;

/// Operator expressions on `E`.
///
/// `Product` factors compose like written operators: the last factor acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EOperator {
    Identity,
    Zero,
    /// `π(of)`.
    Pi { of: FockOperator },
    /// Creation `A*_η` on the `K` factor, for `η` the `k`-th basis letter.
    AStar { k: Letter },
    /// `A_{η,n}`: sends `ω ⊗ η^{⊗n}` to `Ω` and kills everything else;
    /// `A_{η,0}` is the projection onto `ℂΩ`.
    #[serde(rename = "a_n")]
    ANum { k: Letter, n: usize },
    /// `A_{η,F⊗} = sum_p F_p A_{η,p}`.
    #[serde(rename = "a_f")]
    AF { k: Letter, coeffs: Poly },
    Sum { terms: Vec<EOperator> },
    Product { factors: Vec<EOperator> },
    Scale { by: Scalar, of: Box<EOperator> },
}

/// Rank bounds on the `H` and `K` word components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EProfile {
    pub h: RankProfile,
    pub k: RankProfile,
}

impl EProfile {
    const NEUTRAL: EProfile = EProfile { h: RankProfile::NEUTRAL, k: RankProfile::NEUTRAL };

    fn then(self, first: EProfile) -> EProfile {
        EProfile { h: self.h.then(first.h), k: self.k.then(first.k) }
    }

    fn join(self, other: EProfile) -> EProfile {
        EProfile { h: self.h.join(other.h), k: self.k.join(other.k) }
    }

    /// A space large enough to apply the operator `n` times from `Ω` or `Left(ω)`.
    pub fn demand(self, n: usize) -> TwoLevelSpace {
        TwoLevelSpace { lh: self.h.demand(n), lk: self.k.demand(n) }
    }
}

impl EOperator {
    pub fn pi(of: FockOperator) -> Self {
        EOperator::Pi { of }
    }

    pub fn a_star(k: Letter) -> Self {
        EOperator::AStar { k }
    }

    pub fn a_n(k: Letter, n: usize) -> Self {
        EOperator::ANum { k, n }
    }

    pub fn a_f(k: Letter, coeffs: Poly) -> Self {
        EOperator::AF { k, coeffs }
    }

    /// Projection onto `ℂΩ`.
    pub fn proj_omega() -> Self {
        EOperator::ANum { k: 0, n: 0 }
    }

    /// `π(Id)`, the identity on `E ⊖ ℂΩ`.
    pub fn id_e0() -> Self {
        EOperator::Pi { of: FockOperator::Identity }
    }

    pub fn sum(terms: Vec<EOperator>) -> Self {
        EOperator::Sum { terms }
    }

    pub fn product(factors: Vec<EOperator>) -> Self {
        EOperator::Product { factors }
    }

    pub fn scaled(self, by: Scalar) -> Self {
        EOperator::Scale { by, of: Box::new(self) }
    }

    pub fn pow(&self, n: usize) -> Self {
        EOperator::product(vec![self.clone(); n])
    }

    /// True if the expression only combines `π`-images.
    pub fn is_pi_image(&self) -> bool {
        match self {
            EOperator::Pi { .. } | EOperator::Zero => true,
            EOperator::Sum { terms } => terms.iter().all(EOperator::is_pi_image),
            EOperator::Product { factors } => {
                !factors.is_empty() && factors.iter().all(EOperator::is_pi_image)
            }
            EOperator::Scale { of, .. } => of.is_pi_image(),
            _ => false,
        }
    }

    pub fn rank_profile(&self) -> EProfile {
        match self {
            EOperator::Identity | EOperator::Zero => EProfile::NEUTRAL,
            EOperator::Pi { of } => EProfile { h: of.rank_profile(), k: RankProfile::NEUTRAL },
            EOperator::AStar { .. } => {
                EProfile { h: RankProfile::NEUTRAL, k: RankProfile { net: 1, peak: 1 } }
            }
            EOperator::ANum { n, .. } => EProfile {
                h: RankProfile::NEUTRAL,
                k: RankProfile { net: -(*n as i64), peak: 0 },
            },
            EOperator::AF { coeffs, .. } => {
                let k = coeffs
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(p, _)| RankProfile { net: -(p as i64), peak: 0 })
                    .reduce(RankProfile::join)
                    .unwrap_or(RankProfile::NEUTRAL);
                EProfile { h: RankProfile::NEUTRAL, k }
            }
            EOperator::Sum { terms } => terms
                .iter()
                .map(EOperator::rank_profile)
                .reduce(EProfile::join)
                .unwrap_or(EProfile::NEUTRAL),
            EOperator::Product { factors } => factors
                .iter()
                .rev()
                .fold(EProfile::NEUTRAL, |acc, f| f.rank_profile().then(acc)),
            EOperator::Scale { of, .. } => of.rank_profile(),
        }
    }
}

impl Add for EOperator {
    type Output = EOperator;

    fn add(self, rhs: EOperator) -> EOperator {
        let mut terms = match self {
            EOperator::Sum { terms } => terms,
            other => vec![other],
        };
        match rhs {
            EOperator::Sum { terms: more } => terms.extend(more),
            other => terms.push(other),
        }
        EOperator::Sum { terms }
    }
}

impl Mul for EOperator {
    type Output = EOperator;

    fn mul(self, rhs: EOperator) -> EOperator {
        let mut factors = match self {
            EOperator::Product { factors } => factors,
            other => vec![other],
        };
        match rhs {
            EOperator::Product { factors: more } => factors.extend(more),
            other => factors.push(other),
        }
        EOperator::Product { factors }
    }
}

/// `E` with `H`-words truncated at `lh` letters and `K`-words at `lk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoLevelSpace {
    pub lh: usize,
    pub lk: usize,
}

impl TwoLevelSpace {
    pub fn new(lh: usize, lk: usize) -> Self {
        TwoLevelSpace { lh, lk }
    }

    pub fn max(self, other: TwoLevelSpace) -> TwoLevelSpace {
        TwoLevelSpace { lh: self.lh.max(other.lh), lk: self.lk.max(other.lk) }
    }

    pub fn apply(&self, op: &EOperator, v: &EVector) -> Result<EVector> {
        match op {
            EOperator::Identity => Ok(v.clone()),
            EOperator::Zero => Ok(EVector::zero()),
            EOperator::Pi { of } => self.apply_pi(of, v),
            EOperator::AStar { k } => {
                let mut out = EVector::zero();
                for (b, c) in v.iter() {
                    if let EBasis::Right(h, u) = b {
                        if h.is_empty() {
                            if u.len() >= self.lk {
                                return Err(Error::Overflow { space: "T(K)", limit: self.lk });
                            }
                            out.add_term(EBasis::Right(Word::empty(), u.prepend(*k)), c.clone());
                        }
                    }
                }
                Ok(out)
            }
            EOperator::ANum { k, n } => {
                let c = v.coeff(&EBasis::Right(Word::empty(), Word::repeat(*k, *n)));
                Ok(EVector::basis(EBasis::omega()).scale(&c))
            }
            EOperator::AF { k, coeffs } => {
                let c: Scalar = coeffs
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(p, f)| f * v.coeff(&EBasis::Right(Word::empty(), Word::repeat(*k, p))))
                    .sum();
                Ok(EVector::basis(EBasis::omega()).scale(&c))
            }
            EOperator::Sum { terms } => {
                let mut out = EVector::zero();
                for t in terms {
                    out.add_scaled(&self.apply(t, v)?, &Scalar::one());
                }
                Ok(out)
            }
            EOperator::Product { factors } => {
                let mut cur = v.clone();
                for f in factors.iter().rev() {
                    if cur.is_zero() {
                        break;
                    }
                    cur = self.apply(f, &cur)?;
                }
                Ok(cur)
            }
            EOperator::Scale { by, of } => Ok(self.apply(of, v)?.scale(by)),
        }
    }

    fn apply_pi(&self, a: &FockOperator, v: &EVector) -> Result<EVector> {
        // Group by the K-component (None for the Left summand); Ω is projected out.
        let mut sectors: BTreeMap<Option<Word>, FockVector> = BTreeMap::new();
        for (b, c) in v.iter() {
            match b {
                EBasis::Left(h) => sectors.entry(None).or_default().add_term(h.clone(), c.clone()),
                EBasis::Right(h, u) => {
                    if b.is_omega() {
                        continue;
                    }
                    sectors.entry(Some(u.clone())).or_default().add_term(h.clone(), c.clone())
                }
            }
        }
        let fock = FockSpace::new(self.lh);
        let mut out = EVector::zero();
        for (sector, hv) in sectors {
            let image = fock.apply(a, &hv)?;
            for (h, c) in image.iter() {
                let key = match &sector {
                    None => EBasis::Left(h.clone()),
                    Some(u) => EBasis::Right(h.clone(), u.clone()),
                };
                out.add_term(key, c.clone());
            }
        }
        Ok(out)
    }

    /// `φ(op) = ⟨op Ω, Ω⟩`.
    pub fn phi(&self, op: &EOperator) -> Result<Scalar> {
        Ok(self.apply(op, &EVector::basis(EBasis::omega()))?.coeff(&EBasis::omega()))
    }

    /// `ψ(op) = ⟨op Left(ω), Left(ω)⟩`.
    pub fn psi(&self, op: &EOperator) -> Result<Scalar> {
        let vac = EBasis::psi_vacuum();
        Ok(self.apply(op, &EVector::basis(vac.clone()))?.coeff(&vac))
    }

    /// `(ψ(op^n), φ(op^n))` for `n = 1..=n_max`.
    pub fn state_pair_moments(&self, op: &EOperator, n_max: usize) -> Result<TwoStateLaw> {
        let omega = EBasis::omega();
        let vac = EBasis::psi_vacuum();
        let mut phi_vec = EVector::basis(omega.clone());
        let mut psi_vec = EVector::basis(vac.clone());
        let mut phi = Vec::with_capacity(n_max);
        let mut psi = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            phi_vec = self.apply(op, &phi_vec)?;
            psi_vec = self.apply(op, &psi_vec)?;
            phi.push(phi_vec.coeff(&omega));
            psi.push(psi_vec.coeff(&vac));
        }
        TwoStateLaw::new(psi, phi)
    }
}

/// Moments with the truncation sized from the operator's rank profile.
pub fn simulate_law(op: &EOperator, n_max: usize) -> Result<TwoStateLaw> {
    op.rank_profile().demand(n_max).state_pair_moments(op, n_max)
}

/// `b + A*_η + A_{η,F⊗}` (additive) or `d + d A*_η + A_{η,F⊗}` (multiplicative).
///
/// The additive model has `cR(z) = z F(z)` and the multiplicative one
/// `cT(z) = F(z)`; `ψ`-moments are those of the base.
pub fn construct_model(kind: ModelKind, base: &EOperator, k: Letter, f: &Poly) -> Result<EOperator> {
    if !base.is_pi_image() {
        return Err(Error::Domain("model base must lie in the image of pi".into()));
    }
    let tail = EOperator::a_f(k, f.clone());
    match kind {
        ModelKind::Additive => Ok(EOperator::sum(vec![base.clone(), EOperator::a_star(k), tail])),
        ModelKind::Multiplicative => {
            let psi = base.rank_profile().demand(1).psi(base)?;
            if psi.is_zero() {
                return Err(Error::Domain("multiplicative model needs psi(d) != 0".into()));
            }
            if f.constant_term().is_zero() {
                return Err(Error::Domain("multiplicative model needs F(0) != 0".into()));
            }
            Ok(EOperator::sum(vec![
                base.clone(),
                base.clone() * EOperator::a_star(k),
                tail,
            ]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::haagerup_operator;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    fn omega() -> EVector {
        EVector::basis(EBasis::omega())
    }

    #[test]
    fn a_star_creates_from_omega() {
        let space = TwoLevelSpace::new(3, 3);
        let out = space.apply(&EOperator::a_star(0), &omega()).unwrap();
        assert_eq!(out, EVector::basis(EBasis::Right(Word::empty(), Word::new(&[0]))));
        let left = EVector::basis(EBasis::Left(Word::empty()));
        assert!(space.apply(&EOperator::a_star(0), &left).unwrap().is_zero());
        let busy = EVector::basis(EBasis::Right(Word::new(&[1]), Word::empty()));
        assert!(space.apply(&EOperator::a_star(0), &busy).unwrap().is_zero());
    }

    #[test]
    fn a_n_undoes_creation() {
        let space = TwoLevelSpace::new(3, 3);
        let op = EOperator::a_n(0, 2) * EOperator::a_star(0).pow(2);
        assert_eq!(space.apply(&op, &omega()).unwrap(), omega());
        let short = EOperator::a_n(0, 2) * EOperator::a_star(0);
        assert!(space.apply(&short, &omega()).unwrap().is_zero());
    }

    #[test]
    fn pi_identity_is_identity_off_omega() {
        let space = TwoLevelSpace::new(3, 3);
        assert!(space.apply(&EOperator::id_e0(), &omega()).unwrap().is_zero());
        let v = EVector::basis(EBasis::Left(Word::new(&[1])));
        assert_eq!(space.apply(&EOperator::id_e0(), &v).unwrap(), v);
        let w = EVector::basis(EBasis::Right(Word::new(&[1]), Word::empty()));
        assert_eq!(space.apply(&EOperator::id_e0(), &w).unwrap(), w);
    }

    #[test]
    fn a_f_reads_the_k_power() {
        let space = TwoLevelSpace::new(2, 4);
        let f = Poly::from_ints(&[5, -2, 7]);
        assert_eq!(space.phi(&EOperator::a_f(0, f.clone())).unwrap(), Scalar::from_int(5));
        for n in 0..4 {
            let op = EOperator::a_f(0, f.clone()) * EOperator::a_star(0).pow(n);
            assert_eq!(space.phi(&op).unwrap(), f.coeff(n));
        }
    }

    #[test]
    fn additive_model_with_constant_f() {
        let c = Scalar::ratio(2, 3);
        let model =
            construct_model(ModelKind::Additive, &EOperator::Zero, 0, &Poly::constant(c.clone())).unwrap();
        let law = simulate_law(&model, 5).unwrap();
        assert_eq!(law.psi(), ints(&[0; 5]).as_slice());
        let expected: Vec<Scalar> = (1..=5).map(|n| c.pow(n)).collect();
        assert_eq!(law.phi(), expected.as_slice());
    }

    #[test]
    fn multiplicative_model_with_constant_f() {
        let d = EOperator::pi(haagerup_operator(ModelKind::Multiplicative, &Poly::from_ints(&[1]), 0).unwrap());
        let model = construct_model(ModelKind::Multiplicative, &d, 0, &Poly::from_ints(&[3])).unwrap();
        let law = simulate_law(&model, 5).unwrap();
        assert_eq!(law.psi(), ints(&[1; 5]).as_slice());
        assert_eq!(law.phi(), ints(&[3, 9, 27, 81, 243]).as_slice());
    }

    #[test]
    fn pi_image_has_fock_psi_moments() {
        let x = haagerup_operator(ModelKind::Additive, &Poly::from_ints(&[1, 0, 2]), 0).unwrap();
        let fock = FockSpace::new(6).vacuum_moments(&x, 6).unwrap();
        let law = TwoLevelSpace::new(6, 6).state_pair_moments(&EOperator::pi(x), 6).unwrap();
        assert_eq!(law.psi(), fock.as_slice());
        assert_eq!(law.phi(), ints(&[0; 6]).as_slice());
    }

    #[test]
    fn model_preconditions() {
        let not_pi = EOperator::a_star(0);
        assert!(construct_model(ModelKind::Additive, &not_pi, 0, &Poly::zero()).is_err());
        let centered = EOperator::pi(FockOperator::create(0));
        assert!(construct_model(ModelKind::Multiplicative, &centered, 0, &Poly::from_ints(&[1])).is_err());
        let d = EOperator::id_e0();
        assert!(construct_model(ModelKind::Multiplicative, &d, 0, &Poly::x()).is_err());
        assert!(construct_model(ModelKind::Multiplicative, &d, 0, &Poly::from_ints(&[1])).is_ok());
    }

    #[test]
    fn k_overflow_is_reported() {
        let err = TwoLevelSpace::new(2, 1)
            .apply(&EOperator::a_star(0).pow(2), &omega())
            .unwrap_err();
        assert_eq!(err, Error::Overflow { space: "T(K)", limit: 1 });
    }

    #[test]
    fn json_expression_format() {
        let op = EOperator::sum(vec![
            EOperator::pi(FockOperator::create(0) + FockOperator::annihilate(0)),
            EOperator::a_star(1),
            EOperator::a_f(1, Poly::from_ints(&[1, 2])),
            EOperator::a_n(0, 2).scaled(Scalar::ratio(1, 2)),
        ]);
        let text = serde_json::to_string(&op).unwrap();
        assert!(text.contains(r#""op":"a_star""#) && text.contains(r#""op":"a_n""#));
        let back: EOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, op);
    }
}

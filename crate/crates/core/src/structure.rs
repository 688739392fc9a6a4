//! Randomized check that `π(A(e_1)) ∨ D(η_1)` and `π(A(e_2)) ∨ D(η_2)` are
//! c-free: on alternating products of `ψ`-centered elements, `ψ` vanishes and
//! `φ` factors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::State;
use crate::fock::{FockOperator, Letter};
use crate::random::{nonzero_small_rational, rng, small_rational, TestRng};
use crate::scalar::Scalar;
use crate::two_level::{EBasis, EOperator, EVector};

/// Generators of `π(A(e_h)) ∨ D(η_k)`, with `A_{η,n}` for `n <= max_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraGenerators {
    pub h_letter: Letter,
    pub k_letter: Letter,
    pub max_n: usize,
}

impl AlgebraGenerators {
    pub fn new(h_letter: Letter, k_letter: Letter, max_n: usize) -> Self {
        AlgebraGenerators { h_letter, k_letter, max_n }
    }

    pub fn generators(&self) -> Vec<EOperator> {
        let mut out = vec![
            EOperator::pi(FockOperator::create(self.h_letter)),
            EOperator::pi(FockOperator::annihilate(self.h_letter)),
            EOperator::id_e0(),
            EOperator::a_star(self.k_letter),
        ];
        out.extend((0..=self.max_n).map(|n| EOperator::a_n(self.k_letter, n)));
        out
    }

    /// Random combination of monomials in the generators plus a multiple of `Id_E`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> EOperator {
        let gens = self.generators();
        let mut terms = vec![EOperator::Identity.scaled(small_rational(rng))];
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(1..=3);
            let factors = (0..len).map(|_| gens[rng.gen_range(0..gens.len())].clone()).collect();
            terms.push(EOperator::product(factors).scaled(nonzero_small_rational(rng)));
        }
        EOperator::sum(terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub state: State,
    /// Factors in written order: the last one acts first.
    pub word: Vec<EOperator>,
    pub expected: Scalar,
    pub actual: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub trials: usize,
    pub words_checked: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

fn center(x: EOperator) -> crate::error::Result<EOperator> {
    let psi = x.rank_profile().demand(1).psi(&x)?;
    Ok(EOperator::sum(vec![x, EOperator::Identity.scaled(-psi)]))
}

/// Draws `trials` alternating sequences of centered elements for each starting
/// algebra and checks every prefix of length `<= max_len`.
pub fn verify_cfree_structure(
    first: &AlgebraGenerators,
    second: &AlgebraGenerators,
    max_len: usize,
    trials: usize,
    seed: u64,
) -> StructureReport {
    let mut rng = rng(seed);
    let mut report = StructureReport { trials, words_checked: 0, passed: true, counterexample: None, error: None };
    for _ in 0..trials {
        for start in 0..2 {
            if let Err(e) = check_sequence(&mut rng, [first, second], start, max_len, &mut report) {
                report.passed = false;
                report.error = Some(e.to_string());
            }
            if !report.passed {
                return report;
            }
        }
    }
    report
}

fn check_sequence(
    rng: &mut TestRng,
    algebras: [&AlgebraGenerators; 2],
    start: usize,
    max_len: usize,
    report: &mut StructureReport,
) -> crate::error::Result<()> {
    let elements = (0..max_len)
        .map(|j| center(algebras[(start + j) % 2].random_element(rng)))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let written: Vec<EOperator> = elements.iter().rev().cloned().collect();
    let space = elements
        .iter()
        .map(|x| x.rank_profile().demand(1))
        .fold(EOperator::product(written).rank_profile().demand(1), |a, b| a.max(b));

    let omega = EBasis::omega();
    let vac = EBasis::psi_vacuum();
    let mut phi_vec = EVector::basis(omega.clone());
    let mut psi_vec = EVector::basis(vac.clone());
    let mut phi_product = Scalar::one();
    for (j, x) in elements.iter().enumerate() {
        phi_vec = space.apply(x, &phi_vec)?;
        psi_vec = space.apply(x, &psi_vec)?;
        phi_product = phi_product * space.phi(x)?;
        report.words_checked += 1;
        let checks = [
            (State::Psi, Scalar::zero(), psi_vec.coeff(&vac)),
            (State::Phi, phi_product.clone(), phi_vec.coeff(&omega)),
        ];
        for (state, expected, actual) in checks {
            if expected != actual {
                report.passed = false;
                report.counterexample = Some(Counterexample {
                    state,
                    word: elements[..=j].iter().rev().cloned().collect(),
                    expected,
                    actual,
                });
                return Ok(());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_level::TwoLevelSpace;

    #[test]
    fn single_centered_element() {
        let mut r = rng(7);
        let x = center(AlgebraGenerators::new(0, 0, 2).random_element(&mut r)).unwrap();
        let space = x.rank_profile().demand(1);
        assert!(space.psi(&x).unwrap().is_zero());
    }

    #[test]
    fn two_letter_words_factor() {
        let report = verify_cfree_structure(
            &AlgebraGenerators::new(0, 0, 2),
            &AlgebraGenerators::new(1, 1, 2),
            2,
            10,
            3,
        );
        assert!(report.passed, "{report:?}");
        assert_eq!(report.words_checked, 10 * 2 * 2);
    }

    #[test]
    fn shared_letters_break_freeness() {
        // Same H- and K-letters on both sides: the algebras are not c-free.
        let report = verify_cfree_structure(
            &AlgebraGenerators::new(0, 0, 2),
            &AlgebraGenerators::new(0, 0, 2),
            4,
            20,
            11,
        );
        assert!(!report.passed);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn remark2_instance() {
        let space = TwoLevelSpace::new(3, 6);
        for n in 0..4 {
            for p in 0..3 {
                let op = EOperator::a_n(0, n) * EOperator::a_star(0).pow(p) * EOperator::a_star(1);
                for b in [EBasis::omega(), EBasis::Right(Default::default(), crate::fock::Word::new(&[1, 0]))] {
                    assert!(space.apply(&op, &EVector::basis(b)).unwrap().is_zero());
                }
            }
        }
    }
}

//! Seeded generators for small exact test data.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fock::{FockOperator, Letter};
use crate::law::TwoStateLaw;
use crate::scalar::Scalar;
use crate::series::Poly;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 3`, `1 <= q <= 3`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn nonzero_small_rational<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let s = small_rational(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Degree `<= max_degree`; the constant term is nonzero when asked.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: usize, nonzero_constant: bool) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    let mut coeffs: Vec<Scalar> = (0..=degree).map(|_| small_rational(rng)).collect();
    if nonzero_constant {
        coeffs[0] = nonzero_small_rational(rng);
    }
    Poly::new(coeffs)
}

/// Random moments; the first `ψ`/`φ` moment is forced nonzero on request.
pub fn random_law<R: Rng>(rng: &mut R, order: usize, psi_nonzero: bool, phi_nonzero: bool) -> TwoStateLaw {
    let mut psi: Vec<Scalar> = (0..order).map(|_| small_rational(rng)).collect();
    let mut phi: Vec<Scalar> = (0..order).map(|_| small_rational(rng)).collect();
    if order > 0 {
        if psi_nonzero {
            psi[0] = nonzero_small_rational(rng);
        }
        if phi_nonzero {
            phi[0] = nonzero_small_rational(rng);
        }
    }
    TwoStateLaw::new(psi, phi).expect("equal lengths")
}

/// A random element of the algebra generated by `a*_l`, `a_l` for `l` in
/// `letters`: a combination of up to `max_terms` monomials of length up to
/// `max_len`, plus a scalar part.
pub fn random_fock_expr<R: Rng>(rng: &mut R, letters: &[Letter], max_terms: usize, max_len: usize) -> FockOperator {
    let mut terms = vec![FockOperator::Identity.scaled(small_rational(rng))];
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(1..=max_len);
        let factors = (0..len)
            .map(|_| {
                let l = letters[rng.gen_range(0..letters.len())];
                if rng.gen_bool(0.5) {
                    FockOperator::create(l)
                } else {
                    FockOperator::annihilate(l)
                }
            })
            .collect();
        terms.push(FockOperator::product(factors).scaled(nonzero_small_rational(rng)));
    }
    FockOperator::sum(terms)
}

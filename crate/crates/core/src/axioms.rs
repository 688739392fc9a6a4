//! Mixed moments of a c-free pair computed straight from the defining axioms.
//!
//! A letter `p(X)` is split as `(p(X) - ψ(p(X))) + ψ(p(X))·1`. Expanding the
//! scalar part merges the neighbouring letters, so repeated splitting ends in
//! fully `ψ`-centered alternating words, where `ψ` vanishes and `φ` factors.
//! No Fock space or transform is involved.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::TwoStateLaw;
use crate::scalar::Scalar;
use crate::series::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Phi,
    Psi,
}

/// `coefficient · p_1(Z_1) p_2(Z_2) ... p_n(Z_n)` with alternating sides and
/// no constant letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlternatingWord {
    coefficient: Scalar,
    letters: Vec<(Side, Poly)>,
}

impl AlternatingWord {
    /// Normalizes: merges equal-side neighbours and pulls constant letters
    /// into the coefficient.
    pub fn new(letters: impl IntoIterator<Item = (Side, Poly)>) -> Self {
        let mut coefficient = Scalar::one();
        let mut stack: Vec<(Side, Poly)> = Vec::new();
        for (side, poly) in letters {
            if poly.is_zero() {
                return AlternatingWord { coefficient: Scalar::zero(), letters: Vec::new() };
            }
            let merged = match stack.last() {
                Some((top, p)) if *top == side => {
                    let product = p.mul(&poly);
                    stack.pop();
                    product
                }
                _ => poly,
            };
            if merged.degree() == Some(0) {
                coefficient *= &merged.constant_term();
            } else {
                stack.push((side, merged));
            }
        }
        AlternatingWord { coefficient, letters: stack }
    }

    pub fn unit() -> Self {
        AlternatingWord { coefficient: Scalar::one(), letters: Vec::new() }
    }

    pub fn coefficient(&self) -> &Scalar {
        &self.coefficient
    }

    pub fn letters(&self) -> &[(Side, Poly)] {
        &self.letters
    }

    /// Total degree carried by each side.
    pub fn degrees(&self) -> (usize, usize) {
        let mut d = (0, 0);
        for (side, p) in &self.letters {
            let deg = p.degree().unwrap_or(0);
            match side {
                Side::First => d.0 += deg,
                Side::Second => d.1 += deg,
            }
        }
        d
    }
}

/// Evaluates `φ` and `ψ` on alternating words over two c-free variables with
/// the given marginal laws. Results are memoized on the normalized word.
pub struct AxiomEvaluator<'a> {
    first: &'a TwoStateLaw,
    second: &'a TwoStateLaw,
    memo: HashMap<(State, Vec<(Side, Poly)>), Scalar>,
}

impl<'a> AxiomEvaluator<'a> {
    pub fn new(first: &'a TwoStateLaw, second: &'a TwoStateLaw) -> Self {
        AxiomEvaluator { first, second, memo: HashMap::new() }
    }

    fn law(&self, side: Side) -> &TwoStateLaw {
        match side {
            Side::First => self.first,
            Side::Second => self.second,
        }
    }

    fn letter_state(&self, state: State, side: Side, p: &Poly) -> Scalar {
        let law = self.law(side);
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| match state {
                State::Psi => c * law.psi_moment(k),
                State::Phi => c * law.phi_moment(k),
            })
            .sum()
    }

    pub fn expectation(&mut self, state: State, word: &AlternatingWord) -> Result<Scalar> {
        let (d1, d2) = word.degrees();
        for (needed, law) in [(d1, self.first), (d2, self.second)] {
            if needed > law.order() {
                return Err(Error::InsufficientData { needed, available: law.order() });
            }
        }
        if word.coefficient.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(&word.coefficient * self.eval(state, word.letters.clone()))
    }

    fn eval(&mut self, state: State, letters: Vec<(Side, Poly)>) -> Scalar {
        if letters.is_empty() {
            return Scalar::one();
        }
        let key = (state, letters);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let letters = key.1.clone();
        let split = letters.iter().enumerate().find_map(|(i, (side, p))| {
            let mean = self.letter_state(State::Psi, *side, p);
            (!mean.is_zero()).then_some((i, mean))
        });
        let value = match split {
            None => match state {
                State::Psi => Scalar::zero(),
                State::Phi => {
                    letters.iter().map(|(side, p)| self.letter_state(State::Phi, *side, p)).product()
                }
            },
            Some((i, mean)) => {
                let mut centered = letters.clone();
                centered[i].1 = letters[i].1.add_constant(&-&mean);
                let with_centered = self.eval(state, centered);

                let dropped = AlternatingWord::new(
                    letters.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()),
                );
                let with_scalar = &dropped.coefficient * self.eval(state, dropped.letters);
                with_centered + mean * with_scalar
            }
        };
        self.memo.insert(key, value.clone());
        value
    }
}

/// One-shot evaluation of `φ` or `ψ` on a word.
pub fn expectation_of_word(
    state: State,
    word: &AlternatingWord,
    first: &TwoStateLaw,
    second: &TwoStateLaw,
) -> Result<Scalar> {
    AxiomEvaluator::new(first, second).expectation(state, word)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvolutionKind {
    Add,
    Mul,
}

impl std::fmt::Display for ConvolutionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConvolutionKind::Add => "add",
            ConvolutionKind::Mul => "mul",
        })
    }
}

impl std::str::FromStr for ConvolutionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(ConvolutionKind::Add),
            "mul" => Ok(ConvolutionKind::Mul),
            other => Err(Error::Parse(format!("unknown convolution kind {other:?}"))),
        }
    }
}

/// Law of `X + Y` or `XY` for c-free `X`, `Y`, by expanding words.
pub fn convolve_axiomatic(
    kind: ConvolutionKind,
    x: &TwoStateLaw,
    y: &TwoStateLaw,
    n_max: usize,
) -> Result<TwoStateLaw> {
    let available = x.order().min(y.order());
    if n_max > available {
        return Err(Error::InsufficientData { needed: n_max, available });
    }
    let mut eval = AxiomEvaluator::new(x, y);
    let mut psi = Vec::with_capacity(n_max);
    let mut phi = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let words: Vec<AlternatingWord> = match kind {
            ConvolutionKind::Add => {
                // Group the 2^n expansions of (X + Y)^n by normalized word.
                let mut counts: HashMap<AlternatingWord, i64> = HashMap::new();
                for mask in 0u64..(1 << n) {
                    let word = AlternatingWord::new((0..n).map(|bit| {
                        let side = if mask >> bit & 1 == 0 { Side::First } else { Side::Second };
                        (side, Poly::x())
                    }));
                    *counts.entry(word).or_default() += 1;
                }
                let mut grouped: Vec<_> = counts.into_iter().collect();
                grouped.sort_by_key(|g| g.0.letters.len());
                grouped
                    .into_iter()
                    .map(|(w, count)| AlternatingWord {
                        coefficient: w.coefficient * Scalar::from_int(count),
                        letters: w.letters,
                    })
                    .collect()
            }
            ConvolutionKind::Mul => vec![AlternatingWord::new(
                (0..n).flat_map(|_| [(Side::First, Poly::x()), (Side::Second, Poly::x())]),
            )],
        };
        let mut total_psi = Scalar::zero();
        let mut total_phi = Scalar::zero();
        for w in &words {
            total_psi += eval.expectation(State::Psi, w)?;
            total_phi += eval.expectation(State::Phi, w)?;
        }
        psi.push(total_psi);
        phi.push(total_phi);
    }
    TwoStateLaw::new(psi, phi)
}

//! Seeded property suites over random exact data.
//!
//! Each suite returns a [`SuiteReport`] listing every failed check; the CLI
//! `verify` command and the acceptance tests both run through here.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::ConvolutionKind;
use crate::convolution::{cfree_convolve, cross_check};
use crate::error::{Error, Result};
use crate::fock::{haagerup_operator, FockOperator, FockSpace, FockVector, Letter, ModelKind, Word};
use crate::law::TwoStateLaw;
use crate::random::{random_fock_expr, random_law, random_poly, rng, TestRng};
use crate::scalar::Scalar;
use crate::series::{Poly, TruncatedSeries};
use crate::structure::{verify_cfree_structure, AlgebraGenerators};
use crate::transform::{moments_from_transform, transform_from_moments, TransformKind};
use crate::two_level::{construct_model, simulate_law, EBasis, EOperator, EVector, TwoLevelSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "remark1")]
    Remark1,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "eqiii")]
    EqIii,
    #[serde(rename = "crthm")]
    Crthm,
    #[serde(rename = "ct")]
    Ct,
    #[serde(rename = "algcfree")]
    Algcfree,
    #[serde(rename = "mainthm-add")]
    MainthmAdd,
    #[serde(rename = "mainthm-mul")]
    MainthmMul,
    #[serde(rename = "crosscheck")]
    Crosscheck,
    #[serde(rename = "collapse")]
    Collapse,
    #[serde(rename = "freeprob")]
    Freeprob,
    #[serde(rename = "truncation")]
    Truncation,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Remark1,
        Suite::Lemma1,
        Suite::EqIii,
        Suite::Crthm,
        Suite::Ct,
        Suite::Algcfree,
        Suite::MainthmAdd,
        Suite::MainthmMul,
        Suite::Crosscheck,
        Suite::Collapse,
        Suite::Freeprob,
        Suite::Truncation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Remark1 => "remark1",
            Suite::Lemma1 => "lemma1",
            Suite::EqIii => "eqiii",
            Suite::Crthm => "crthm",
            Suite::Ct => "ct",
            Suite::Algcfree => "algcfree",
            Suite::MainthmAdd => "mainthm-add",
            Suite::MainthmMul => "mainthm-mul",
            Suite::Crosscheck => "crosscheck",
            Suite::Collapse => "collapse",
            Suite::Freeprob => "freeprob",
            Suite::Truncation => "truncation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub order: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: 20, seed: 42, order: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub order: usize,
    pub checks: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(msg);
        }
    }

    fn record<T>(&mut self, context: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{context}: {e}"));
                None
            }
        }
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let mut tally = Tally::default();
    let mut rng = rng(config.seed);
    for trial in 0..config.trials {
        match suite {
            Suite::Remark1 => remark1_trial(&mut rng, &mut tally, trial),
            Suite::Lemma1 => lemma1_trial(&mut rng, &mut tally, trial),
            Suite::EqIii => eqiii_trial(&mut rng, &mut tally, trial),
            Suite::Crthm => crthm_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Ct => ct_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Algcfree => algcfree_trial(&mut rng, &mut tally, trial),
            Suite::MainthmAdd => mainthm_add_trial(&mut rng, &mut tally, trial, config.order),
            Suite::MainthmMul => mainthm_mul_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Crosscheck => crosscheck_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Collapse => collapse_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Freeprob => freeprob_trial(&mut rng, &mut tally, trial, config.order),
            Suite::Truncation => truncation_trial(&mut rng, &mut tally, trial, config.order),
        }
    }
    SuiteReport {
        suite,
        trials: config.trials,
        seed: config.seed,
        order: config.order,
        checks: tally.checks,
        passed: tally.failed == 0,
        failures: tally.failures,
    }
}

fn all_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| letters.iter().map(move |&l| w.prepend(l)))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Every basis vector of `E` with `H`-words of length `<= h_len` and
/// `K`-words of length `<= k_len` over letters `{0, 1}`.
pub fn basis_vectors(h_len: usize, k_len: usize) -> Vec<EBasis> {
    let hs = all_words(&[0, 1], h_len);
    let ks = all_words(&[0, 1], k_len);
    let mut out: Vec<EBasis> = hs.iter().cloned().map(EBasis::Left).collect();
    for h in &hs {
        for u in &ks {
            out.push(EBasis::Right(h.clone(), u.clone()));
        }
    }
    out
}

const BASIS_H: usize = 2;
const BASIS_K: usize = 3;

/// Compares two operators on every tracked basis vector.
fn operator_eq(tally: &mut Tally, label: &str, lhs: &EOperator, rhs: &EOperator, basis: &[EBasis]) {
    let need = lhs.rank_profile().demand(1).max(rhs.rank_profile().demand(1));
    let space = TwoLevelSpace::new(BASIS_H + need.lh, BASIS_K + need.lk);
    for b in basis {
        let v = EVector::basis(b.clone());
        let (l, r) = match (space.apply(lhs, &v), space.apply(rhs, &v)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                tally.record::<()>(label, Err(e));
                return;
            }
        };
        tally.check(l == r, || format!("{label}: differs on {b:?}"));
    }
}

fn remark1_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize) {
    let basis = basis_vectors(BASIS_H, BASIS_K);
    let k: Letter = rng.gen_range(0..2);
    let other: Letter = 1 - k;
    let n = rng.gen_range(0..=3usize);
    let p = rng.gen_range(0..=3usize);
    let m = rng.gen_range(1..=3usize);
    let n_pos = n.max(1);
    let x = EOperator::pi(random_fock_expr(rng, &[0, 1], 2, 2));
    let tag = |s: &str| format!("trial {trial}: {s}");

    let expected = if n >= p { EOperator::a_n(k, n - p) } else { EOperator::Zero };
    operator_eq(tally, &tag(&format!("A_{{k,{n}}} A*^{p}")), &(EOperator::a_n(k, n) * EOperator::a_star(k).pow(p)), &expected, &basis);
    operator_eq(tally, &tag("x A_{k,n} = 0"), &(x.clone() * EOperator::a_n(k, n)), &EOperator::Zero, &basis);
    for k2 in [k, other] {
        operator_eq(tally, &tag("A_{k,n} A_{k',m} = 0"), &(EOperator::a_n(k, n_pos) * EOperator::a_n(k2, m)), &EOperator::Zero, &basis);
    }
    operator_eq(tally, &tag("P_Ω A_n = A_n"), &(EOperator::proj_omega() * EOperator::a_n(k, n_pos)), &EOperator::a_n(k, n_pos), &basis);
    operator_eq(tally, &tag("A_n P_Ω = 0"), &(EOperator::a_n(k, n_pos) * EOperator::proj_omega()), &EOperator::Zero, &basis);
    operator_eq(tally, &tag("Id_E0 A* = A*"), &(EOperator::id_e0() * EOperator::a_star(k)), &EOperator::a_star(k), &basis);
    // A* Id_E0 agrees with A* on E0 only; at Ω it loses the A*Ω term.
    let off_omega: Vec<EBasis> = basis.iter().filter(|b| !b.is_omega()).cloned().collect();
    operator_eq(tally, &tag("A* Id_E0 = A* on E0"), &(EOperator::a_star(k) * EOperator::id_e0()), &EOperator::a_star(k), &off_omega);
    operator_eq(
        tally,
        &tag("A* Id_E0 + A* P_Ω = A*"),
        &((EOperator::a_star(k) * EOperator::id_e0()) + (EOperator::a_star(k) * EOperator::proj_omega())),
        &EOperator::a_star(k),
        &basis,
    );
    operator_eq(
        tally,
        &tag("A_{k,n} A*_k^p A*_k' = 0"),
        &(EOperator::a_n(k, n) * EOperator::a_star(k).pow(p) * EOperator::a_star(other)),
        &EOperator::Zero,
        &basis,
    );
}

fn lemma1_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize) {
    let basis = basis_vectors(BASIS_H, BASIS_K);
    let k1: Letter = rng.gen_range(0..2);
    let k2: Letter = rng.gen_range(0..2);
    let n = rng.gen_range(0..=3usize);
    let x = EOperator::pi(random_fock_expr(rng, &[0, 1], 2, 2));
    for q in 1..=2 {
        let xq = x.pow(q);
        let Some(psi) = tally.record("lemma1 psi", xq.rank_profile().demand(1).psi(&xq)) else {
            return;
        };
        operator_eq(
            tally,
            &format!("trial {trial}: A*_k1 x^{q} A*_k2"),
            &(EOperator::a_star(k1) * xq.clone() * EOperator::a_star(k2)),
            &(EOperator::a_star(k1) * EOperator::a_star(k2)).scaled(psi.clone()),
            &basis,
        );
        operator_eq(
            tally,
            &format!("trial {trial}: A_{{k1,{n}}} x^{q} A*_k2"),
            &(EOperator::a_n(k1, n) * xq.clone() * EOperator::a_star(k2)),
            &(EOperator::a_n(k1, n) * EOperator::a_star(k2)).scaled(psi),
            &basis,
        );
    }
}

fn eqiii_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize) {
    let basis = basis_vectors(BASIS_H, BASIS_K);
    let k: Letter = rng.gen_range(0..2);
    let f = random_poly(rng, 3, false);
    let b = EOperator::a_f(k, f.clone());
    let top = f.degree().unwrap_or(0) + 2;
    let space = TwoLevelSpace::new(1, top);
    for n in 0..=top {
        let op = b.clone() * EOperator::a_star(k).pow(n);
        if let Some(v) = tally.record("eqiii phi", space.phi(&op)) {
            tally.check(v == f.coeff(n), || format!("trial {trial}: phi(B A^{n}) = {v}, want {}", f.coeff(n)));
        }
    }
    // bΩ = 0 for b in the image of pi, and B maps everything into ℂΩ.
    let x = EOperator::pi(random_fock_expr(rng, &[0, 1], 2, 2));
    let need = x.rank_profile().demand(1);
    if let Some(v) = tally.record("pi(x) Ω", need.apply(&x, &EVector::basis(EBasis::omega()))) {
        tally.check(v.is_zero(), || format!("trial {trial}: pi(x) Ω != 0"));
    }
    let space = TwoLevelSpace::new(BASIS_H, BASIS_K);
    for basis_vec in &basis {
        if let Some(v) = tally.record("range B", space.apply(&b, &EVector::basis(basis_vec.clone()))) {
            tally.check(v.iter().all(|(key, _)| key.is_omega()), || {
                format!("trial {trial}: B {basis_vec:?} leaves ℂΩ")
            });
        }
    }
}

/// `sum over (q_1..q_p)` with `q_i >= min_part`, `sum q_i <= budget`, of
/// `prod ψ_{q_i}`, bucketed by `sum q_i`. Plain enumeration.
fn tuple_sums(p: usize, min_part: usize, budget: usize, law: &TwoStateLaw) -> Vec<Scalar> {
    fn walk(p: usize, min_part: usize, budget: usize, sum: usize, prod: Scalar, law: &TwoStateLaw, out: &mut [Scalar]) {
        if p == 0 {
            out[sum] += prod;
            return;
        }
        for q in min_part..=budget.saturating_sub(sum) {
            if sum + q > budget {
                break;
            }
            walk(p - 1, min_part, budget, sum + q, &prod * law.psi_moment(q), law, out);
        }
    }
    let mut out = vec![Scalar::zero(); budget + 1];
    walk(p, min_part, budget, 0, Scalar::one(), law, &mut out);
    out
}

/// Right-hand side of the additive-model recurrence
/// `φ_n = sum_{p, q_i >= 0} φ_{n-1-p-Σq} F_p ψ_{q_1}...ψ_{q_p}`.
pub fn additive_recurrence(law: &TwoStateLaw, f: &Poly, n: usize) -> Scalar {
    let mut total = Scalar::zero();
    for p in 0..n {
        let fp = f.coeff(p);
        if fp.is_zero() {
            continue;
        }
        let budget = n - 1 - p;
        for (s, w) in tuple_sums(p, 0, budget, law).iter().enumerate() {
            total += &fp * w * law.phi_moment(budget - s);
        }
    }
    total
}

/// Right-hand side of the multiplicative-model recurrence
/// `φ_n = sum_{p, q_i >= 1} φ_{n-1-Σq} g_p ψ_{q_1}...ψ_{q_p}`.
pub fn multiplicative_recurrence(law: &TwoStateLaw, g: &Poly, n: usize) -> Scalar {
    let mut total = Scalar::zero();
    for p in 0..n {
        let gp = g.coeff(p);
        if gp.is_zero() {
            continue;
        }
        for (s, w) in tuple_sums(p, 1, n - 1, law).iter().enumerate() {
            total += &gp * w * law.phi_moment(n - 1 - s);
        }
    }
    total
}

fn expect_series(tally: &mut Tally, label: String, got: Result<TruncatedSeries>, want: TruncatedSeries) {
    if let Some(got) = tally.record(&label, got) {
        tally.check(got == want, || format!("{label}: got {:?}, want {:?}", got.coeffs(), want.coeffs()));
    }
}

fn crthm_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let b = EOperator::pi(random_fock_expr(rng, &[0], 2, 2));
    let f = random_poly(rng, 3, false);
    let Some(alpha) = tally.record("crthm model", construct_model(ModelKind::Additive, &b, 0, &f)) else {
        return;
    };
    let Some(law) = tally.record("crthm simulate", simulate_law(&alpha, order)) else {
        return;
    };
    expect_series(tally, format!("trial {trial}: cR"), transform_from_moments(TransformKind::CR, &law), f.shift_up().to_series(order));
    for n in 1..=order {
        let rhs = additive_recurrence(&law, &f, n);
        tally.check(law.phi_moment(n) == rhs, || format!("trial {trial}: recurrence fails at n={n}"));
    }
    if let Some(base) = tally.record("crthm base", simulate_law(&b, order)) {
        tally.check(base.psi() == law.psi(), || format!("trial {trial}: psi(alpha^q) != psi(b^q)"));
    }
}

fn ct_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let d = loop {
        let d = EOperator::pi(random_fock_expr(rng, &[0], 2, 2));
        if d.rank_profile().demand(1).psi(&d).is_ok_and(|v| !v.is_zero()) {
            break d;
        }
    };
    let f = random_poly(rng, 3, true);
    let Some(beta) = tally.record("ct model", construct_model(ModelKind::Multiplicative, &d, 0, &f)) else {
        return;
    };
    // cT through order N needs N + 1 moments.
    let Some(law) = tally.record("ct simulate", simulate_law(&beta, order + 1)) else {
        return;
    };
    expect_series(tally, format!("trial {trial}: cT"), transform_from_moments(TransformKind::CT, &law), f.to_series(order));
    for n in 1..=order + 1 {
        let rhs = multiplicative_recurrence(&law, &f, n);
        tally.check(law.phi_moment(n) == rhs, || format!("trial {trial}: recurrence fails at n={n}"));
    }
    if let Some(base) = tally.record("ct base", simulate_law(&d, order + 1)) {
        tally.check(base.psi() == law.psi(), || format!("trial {trial}: psi(beta^q) != psi(d^q)"));
    }
}

fn algcfree_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize) {
    let seed = rng.gen();
    let report = verify_cfree_structure(
        &AlgebraGenerators::new(0, 0, 3),
        &AlgebraGenerators::new(1, 1, 3),
        5,
        1,
        seed,
    );
    tally.check(report.passed, || {
        format!("trial {trial} (seed {seed}): {}", serde_json::to_string(&report).unwrap_or_default())
    });
}

fn additive_pair(rng: &mut TestRng) -> Result<(Poly, Poly, Poly, Poly, EOperator)> {
    let (f1, f2) = (random_poly(rng, 3, false), random_poly(rng, 3, false));
    let (g1, g2) = (random_poly(rng, 3, false), random_poly(rng, 3, false));
    let a1 = construct_model(ModelKind::Additive, &EOperator::pi(haagerup_operator(ModelKind::Additive, &f1, 0)?), 0, &g1)?;
    let a2 = construct_model(ModelKind::Additive, &EOperator::pi(haagerup_operator(ModelKind::Additive, &f2, 1)?), 1, &g2)?;
    Ok((f1, f2, g1, g2, a1 + a2))
}

fn mainthm_add_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let Some((f1, f2, g1, g2, alpha)) = tally.record("mainthm-add model", additive_pair(rng)) else {
        return;
    };
    let Some(law) = tally.record("mainthm-add simulate", simulate_law(&alpha, order)) else {
        return;
    };
    let g = g1.add(&g2);
    expect_series(tally, format!("trial {trial}: R"), transform_from_moments(TransformKind::R, &law), f1.add(&f2).shift_up().to_series(order));
    expect_series(tally, format!("trial {trial}: cR"), transform_from_moments(TransformKind::CR, &law), g.shift_up().to_series(order));
    for n in 1..=order {
        tally.check(law.phi_moment(n) == additive_recurrence(&law, &g, n), || {
            format!("trial {trial}: additive recurrence fails at n={n}")
        });
    }
}

fn multiplicative_pair(rng: &mut TestRng) -> Result<(Poly, Poly, Poly, Poly, EOperator)> {
    let (f1, f2) = (random_poly(rng, 3, true), random_poly(rng, 3, true));
    let (g1, g2) = (random_poly(rng, 3, true), random_poly(rng, 3, true));
    let d1 = EOperator::pi(haagerup_operator(ModelKind::Multiplicative, &f1, 0)?);
    let d2 = EOperator::pi(haagerup_operator(ModelKind::Multiplicative, &f2, 1)?);
    let b1 = construct_model(ModelKind::Multiplicative, &d1, 0, &g1)?;
    let b2 = construct_model(ModelKind::Multiplicative, &d2, 1, &g2)?;
    Ok((f1, f2, g1, g2, b1 * b2))
}

fn mainthm_mul_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let Some((f1, f2, g1, g2, beta)) = tally.record("mainthm-mul model", multiplicative_pair(rng)) else {
        return;
    };
    let Some(law) = tally.record("mainthm-mul simulate", simulate_law(&beta, order + 1)) else {
        return;
    };
    let g = g1.mul(&g2);
    expect_series(tally, format!("trial {trial}: T"), transform_from_moments(TransformKind::T, &law), f1.mul(&f2).to_series(order));
    expect_series(tally, format!("trial {trial}: cT"), transform_from_moments(TransformKind::CT, &law), g.to_series(order));
    for n in 1..=order + 1 {
        tally.check(law.phi_moment(n) == multiplicative_recurrence(&law, &g, n), || {
            format!("trial {trial}: multiplicative recurrence fails at n={n}")
        });
    }
}

fn crosscheck_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    for kind in [ConvolutionKind::Add, ConvolutionKind::Mul] {
        let nonzero = kind == ConvolutionKind::Mul;
        let x = random_law(rng, order, nonzero, nonzero);
        let y = random_law(rng, order, nonzero, nonzero);
        let report = cross_check(kind, &x, &y, order);
        tally.check(report.agree, || {
            format!("trial {trial} {kind}: {}", serde_json::to_string(&report).unwrap_or_default())
        });
    }
}

fn collapse_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let single = |rng: &mut TestRng| {
        let law = random_law(rng, order, true, false);
        TwoStateLaw::single_state(law.psi().to_vec())
    };
    let (x, y) = (single(rng), single(rng));
    for (free, cond) in [(TransformKind::R, TransformKind::CR), (TransformKind::T, TransformKind::CT)] {
        if let (Some(a), Some(b)) = (
            tally.record("collapse", transform_from_moments(free, &x)),
            tally.record("collapse", transform_from_moments(cond, &x)),
        ) {
            tally.check(a == b, || format!("trial {trial}: {cond} != {free}"));
        }
    }
    for (kind, free) in [(ConvolutionKind::Add, TransformKind::R), (ConvolutionKind::Mul, TransformKind::T)] {
        let free_moments = transform_from_moments(free, &x)
            .and_then(|a| {
                let b = transform_from_moments(free, &y)?;
                if kind == ConvolutionKind::Add { a.add(&b) } else { a.mul(&b) }
            })
            .and_then(|s| moments_from_transform(free, &s, None));
        let (Some(free_moments), Some(cfree)) = (
            tally.record("free convolution", free_moments),
            tally.record("c-free convolution", cfree_convolve(kind, &x, &y, order)),
        ) else {
            continue;
        };
        tally.check(cfree.psi() == free_moments.as_slice() && cfree.phi() == free_moments.as_slice(), || {
            format!("trial {trial} {kind}: c-free convolution differs from free convolution")
        });
    }
}

fn fock_moments(op: &FockOperator, n: usize) -> Result<Vec<Scalar>> {
    FockSpace::new(op.rank_profile().demand(n)).vacuum_moments(op, n)
}

fn freeprob_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    let single = |m: Result<Vec<Scalar>>| m.map(TwoStateLaw::single_state);
    let (f1, f2) = (random_poly(rng, 3, false), random_poly(rng, 3, false));
    let ops = haagerup_operator(ModelKind::Additive, &f1, 0)
        .and_then(|a1| Ok((a1, haagerup_operator(ModelKind::Additive, &f2, 1)?)));
    if let Some((a1, a2)) = tally.record("freeprob additive", ops) {
        for (label, op, f) in [("R_a1", a1.clone(), f1.clone()), ("R_a2", a2.clone(), f2.clone()), ("R_a1+a2", a1 + a2, f1.add(&f2))] {
            let r = single(fock_moments(&op, order)).and_then(|law| transform_from_moments(TransformKind::R, &law));
            expect_series(tally, format!("trial {trial}: {label}"), r, f.shift_up().to_series(order));
        }
    }
    let (f1, f2) = (random_poly(rng, 3, true), random_poly(rng, 3, true));
    let ops = haagerup_operator(ModelKind::Multiplicative, &f1, 0)
        .and_then(|b1| Ok((b1, haagerup_operator(ModelKind::Multiplicative, &f2, 1)?)));
    if let Some((b1, b2)) = tally.record("freeprob multiplicative", ops) {
        for (label, op, f) in [("T_b1", b1.clone(), f1.clone()), ("T_b2", b2.clone(), f2.clone()), ("T_b1b2", b1 * b2, f1.mul(&f2))] {
            let t = single(fock_moments(&op, order + 1)).and_then(|law| transform_from_moments(TransformKind::T, &law));
            expect_series(tally, format!("trial {trial}: {label}"), t, f.to_series(order));
        }
    }
    // Vacuum state vanishes on alternating products of centered elements.
    let mut elements = Vec::new();
    for j in 0..5u16 {
        let x = random_fock_expr(rng, &[j % 2], 2, 2);
        let Some(mean) = tally.record("freeness centering", FockSpace::new(2).vacuum_state(&x)) else {
            return;
        };
        elements.push(x + FockOperator::Identity.scaled(-mean));
        let written = FockOperator::product(elements.iter().rev().cloned().collect());
        let space = FockSpace::new(written.rank_profile().demand(1));
        if let Some(v) = tally.record("freeness", space.apply(&written, &FockVector::vacuum())) {
            tally.check(v.vacuum_coeff().is_zero(), || {
                format!("trial {trial}: vacuum state of centered alternating word of length {} is nonzero", j + 1)
            });
        }
    }
}

/// Moments of order `n` computed at the demanded rank and with three extra
/// letters of headroom in both factors.
fn truncation_stable(tally: &mut Tally, label: &str, op: &EOperator, order: usize) {
    for n in 1..=order {
        let base = op.rank_profile().demand(n);
        let roomy = TwoLevelSpace::new(base.lh + 3, base.lk + 3);
        if let (Some(a), Some(b)) = (
            tally.record(label, base.state_pair_moments(op, n)),
            tally.record(label, roomy.state_pair_moments(op, n)),
        ) {
            tally.check(a == b, || format!("{label}: order {n} moments change with more headroom"));
        }
    }
}

fn truncation_trial(rng: &mut TestRng, tally: &mut Tally, trial: usize, order: usize) {
    if let Some((_, _, _, _, alpha)) = tally.record("truncation additive", additive_pair(rng)) {
        if let EOperator::Sum { terms } = &alpha {
            let single = EOperator::sum(terms[..3].to_vec());
            truncation_stable(tally, &format!("trial {trial}: alpha_1"), &single, order);
        }
        truncation_stable(tally, &format!("trial {trial}: alpha_1 + alpha_2"), &alpha, order);
    }
    if let Some((_, _, _, _, beta)) = tally.record("truncation multiplicative", multiplicative_pair(rng)) {
        if let EOperator::Product { factors } = &beta {
            truncation_stable(tally, &format!("trial {trial}: beta_1"), &factors[0], order);
        }
        truncation_stable(tally, &format!("trial {trial}: beta_1 beta_2"), &beta, order);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
            assert_eq!(serde_json::to_string(&suite).unwrap(), format!("\"{}\"", suite.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn basis_counts() {
        // 7 H-words, 15 K-words.
        assert_eq!(basis_vectors(2, 3).len(), 7 + 7 * 15);
    }

    #[test]
    fn recurrences_on_closed_forms() {
        // Additive model with b = 0, F = c: φ_n = c^n, ψ = 0.
        let c = Scalar::ratio(2, 3);
        let law = TwoStateLaw::new(vec![Scalar::zero(); 5], (1..=5).map(|k| c.pow(k)).collect()).unwrap();
        let f = Poly::constant(c.clone());
        for n in 1..=5 {
            assert_eq!(additive_recurrence(&law, &f, n), law.phi_moment(n));
        }
        // Multiplicative model with ψ ≡ 1, F = c.
        let law = TwoStateLaw::new(vec![Scalar::one(); 5], (1..=5).map(|k| c.pow(k)).collect()).unwrap();
        for n in 1..=5 {
            assert_eq!(multiplicative_recurrence(&law, &f, n), law.phi_moment(n));
        }
    }

    #[test]
    fn quick_suites_pass() {
        let config = SuiteConfig { trials: 3, seed: 5, order: 4 };
        for suite in Suite::ALL {
            let report = run_suite(suite, &config);
            assert!(report.passed, "{suite}: {:?}", report.failures);
            assert!(report.checks > 0);
        }
    }
}

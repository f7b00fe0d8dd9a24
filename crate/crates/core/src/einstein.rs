//! Sasaki-Einstein existence verdicts, local moduli counts and the
//! Sylvester-family numerators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, ExactRational};
use crate::error::{Error, Result};
use crate::homology::middle_betti;
use crate::invariants::{mean_euler_breakdown, principal_index};
use crate::linkmodel::{
    make_link, sylvester_admissible, sylvester_base, ExponentVector, LinkProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoprimeVerdict {
    Yes,
    No,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Exists,
    Obstructed,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Exists => "Exists",
            Verdict::Obstructed => "Obstructed",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Exists" => Ok(Verdict::Exists),
            "Obstructed" => Ok(Verdict::Obstructed),
            "Unknown" => Ok(Verdict::Unknown),
            _ => Err(Error::Parse(format!("unknown verdict {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SEReport {
    pub positivity: bool,
    pub sufficient1: bool,
    pub sufficient2: bool,
    pub coprime_iff: CoprimeVerdict,
    pub lichnerowicz_obstructed: bool,
    pub verdict: Verdict,
}

fn recip(a: u64) -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::from(a))
}

/// `n/(n-1)` for a link with `n + 1` exponents.
fn dimension_factor(link: &LinkProfile) -> ExactRational {
    let n = link.arity() as i64 - 1;
    arith::ratio(n, n - 1)
}

/// `b_i = gcd(lcm_{j != i} a_j, a_i)`.
pub fn overlap_factors(link: &LinkProfile) -> Result<Vec<u64>> {
    let a = link.entries();
    (0..a.len())
        .map(|i| {
            let others: Vec<u64> = a
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            Ok(arith::gcd(arith::lcm_all(&others)?, a[i]))
        })
        .collect()
}

/// The two sufficient inequalities for a Sasaki-Einstein metric.
pub fn se_sufficient(link: &LinkProfile) -> Result<(bool, bool)> {
    let sum = &link.recip_sum;
    let one = ExactRational::one();
    if *sum <= one {
        return Ok((false, false));
    }
    let factor = dimension_factor(link);
    let a = link.entries();
    let b = overlap_factors(link)?;

    let mut min1 = a.iter().map(|&x| recip(x)).min().expect("nonempty");
    for i in 0..b.len() {
        for j in 0..b.len() {
            if i != j {
                min1 = min1.min(recip(b[i] * b[j]));
            }
        }
    }
    let first = *sum < &one + &factor * min1;

    let min_recip = recip(*a.iter().max().expect("nonempty"));
    let max_recip = recip(*a.iter().min().expect("nonempty"));
    let second = *sum < &one + factor * min_recip * max_recip;
    Ok((first, second))
}

pub fn pairwise_coprime(a: &[u64]) -> bool {
    (0..a.len()).all(|i| (0..i).all(|j| arith::gcd(a[i], a[j]) == 1))
}

/// Sharp criterion for pairwise coprime exponents: `1 < sum 1/a_i < 1 + n min 1/a_i`.
pub fn se_coprime_iff(link: &LinkProfile) -> CoprimeVerdict {
    let a = link.entries();
    if !pairwise_coprime(a) {
        return CoprimeVerdict::NotApplicable;
    }
    let n = link.arity() as i64 - 1;
    let min_recip = recip(*a.iter().max().expect("nonempty"));
    let bound = ExactRational::one() + arith::ratio(n, 1) * min_recip;
    let sum = &link.recip_sum;
    if *sum > ExactRational::one() && *sum < bound {
        CoprimeVerdict::Yes
    } else {
        CoprimeVerdict::No
    }
}

/// `|w| - d > n min w_i` rules out a Sasaki-Einstein metric.
pub fn lichnerowicz_obstructed(link: &LinkProfile) -> bool {
    let total: i128 = link.weights.iter().map(|&w| w as i128).sum();
    let n = link.arity() as i128 - 1;
    let min_w = *link.weights.iter().min().expect("nonempty") as i128;
    total - link.degree as i128 > n * min_w
}

pub fn se_status(link: &LinkProfile) -> Result<SEReport> {
    let positivity = link.recip_sum > ExactRational::one();
    let (sufficient1, sufficient2) = se_sufficient(link)?;
    let coprime_iff = se_coprime_iff(link);
    let lich = lichnerowicz_obstructed(link);
    let exists = sufficient1 || sufficient2 || coprime_iff == CoprimeVerdict::Yes;
    let obstructed = lich || coprime_iff == CoprimeVerdict::No;
    let verdict = match (exists, obstructed) {
        (true, true) => {
            return Err(Error::InternalInconsistency(format!(
                "{}: existence and obstruction both fire",
                link.exponents
            )))
        }
        (true, false) => Verdict::Exists,
        (false, true) => Verdict::Obstructed,
        (false, false) => Verdict::Unknown,
    };
    Ok(SEReport {
        positivity,
        sufficient1,
        sufficient2,
        coprime_iff,
        lichnerowicz_obstructed: lich,
        verdict,
    })
}

/// Counts `b >= 0` with `sum b_j w_j = m`, optionally with `b_j < caps_j`.
struct MonomialCounter<'a> {
    weights: &'a [u64],
    caps: Option<&'a [u64]>,
    memo: HashMap<(usize, u64), u64>,
}

impl MonomialCounter<'_> {
    fn count(&mut self, index: usize, remaining: u64) -> u64 {
        let w = self.weights[index];
        let cap = self.caps.map(|c| c[index] - 1).unwrap_or(u64::MAX);
        if index + 1 == self.weights.len() {
            return u64::from(remaining.is_multiple_of(w) && remaining / w <= cap);
        }
        if let Some(&hit) = self.memo.get(&(index, remaining)) {
            return hit;
        }
        let top = (remaining / w).min(cap);
        let total = (0..=top)
            .map(|b| self.count(index + 1, remaining - b * w))
            .sum();
        self.memo.insert((index, remaining), total);
        total
    }
}

/// `h^0(CP(w), O(m))`: the number of monomials of weighted degree `m`.
pub fn count_weighted_monomials(weights: &[u64], m: u64) -> u64 {
    if weights.is_empty() {
        return u64::from(m == 0);
    }
    assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
    MonomialCounter {
        weights,
        caps: None,
        memo: HashMap::new(),
    }
    .count(0, m)
}

/// Monomials `z^b` with `0 <= b_j < a_j` and weighted degree `d`.
pub fn count_perturbation_monomials(link: &LinkProfile) -> u64 {
    MonomialCounter {
        weights: &link.weights,
        caps: Some(link.entries()),
        memo: HashMap::new(),
    }
    .count(0, link.degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub h0_degree_d: u64,
    pub h0_weights_sum: u64,
    pub kuranishi_dim: i64,
    pub perturbation_count: u64,
    /// At most one exponent equals 2.
    pub applicable: bool,
}

/// Local moduli dimension `h^0(O(d)) - sum_i h^0(O(w_i))`, reported next to
/// the restricted perturbation count.
pub fn moduli_dimension(link: &LinkProfile) -> Result<ModuliReport> {
    let h0_degree_d = count_weighted_monomials(&link.weights, link.degree);
    let h0_weights_sum = link
        .weights
        .iter()
        .map(|&w| count_weighted_monomials(&link.weights, w))
        .sum();
    let kuranishi_dim = h0_degree_d as i64 - h0_weights_sum as i64;
    let applicable = link.entries().iter().filter(|&&a| a == 2).count() <= 1;
    if applicable && kuranishi_dim < 0 {
        return Err(Error::InternalInconsistency(format!(
            "{}: negative Kuranishi dimension {kuranishi_dim}",
            link.exponents
        )));
    }
    Ok(ModuliReport {
        h0_degree_d,
        h0_weights_sum,
        kuranishi_dim,
        perturbation_count: count_perturbation_monomials(link),
        applicable,
    })
}

/// Closed-form Euler characteristic of `L(2, 2c_{i_0}, ..., 2c_{i_k})/S^1`
/// as stated with the Sylvester construction.
pub fn sylvester_chi_without_a(k: usize) -> i64 {
    k as i64 + 2 + if k.is_multiple_of(2) { 1 } else { 0 }
}

/// Closed-form Euler characteristic of `L(2, 2c_{i_0}, ..., 2c_{i_k}, a)/S^1`.
pub fn sylvester_chi_with_a(k: usize) -> i64 {
    k as i64 + 3
}

fn sylvester_link(n: usize, a: u64) -> Result<LinkProfile> {
    if !sylvester_admissible(n, a)? {
        return Err(Error::PreconditionFailed(format!(
            "a = {a} is not coprime to c_0..=c_{n}"
        )));
    }
    let mut v = sylvester_base(n)?;
    v.push(a);
    let link = make_link(&ExponentVector::new(v)?)?;
    if principal_index(&link) <= 0 {
        return Err(Error::PreconditionFailed(format!(
            "{} is not log Fano",
            link.exponents
        )));
    }
    Ok(link)
}

/// Numerator of the mean Euler characteristic of `L(2, 2c_0, ..., 2c_n, a)`
/// from the stratum frequencies `(a-1) prod (c_j - 1)` and `prod (c_j - 1)`
/// (product over the `c_j` outside the stratum) and the closed-form
/// quotient Euler characteristics.
pub fn sylvester_numerator(n: usize, a: u64) -> Result<BigInt> {
    sylvester_link(n, a)?;
    let c: Vec<BigInt> = crate::linkmodel::sylvester_sequence(n);
    let mut without_a = BigInt::zero();
    let mut with_a = BigInt::zero();
    for mask in 1u64..(1u64 << (n + 1)) {
        let size = mask.count_ones() as usize;
        let ell = size - 1;
        let weight: BigInt = (0..=n)
            .filter(|j| mask & (1 << j) == 0)
            .map(|j| &c[j] - 1)
            .product();
        without_a += &weight * sylvester_chi_without_a(ell);
        if ell >= 1 {
            with_a += &weight * sylvester_chi_with_a(ell);
        }
    }
    Ok(without_a * (a - 1) + with_a)
}

/// The same numerator, `chi_m * |mu_P|`, from the general stratum machinery.
pub fn sylvester_numerator_general(n: usize, a: u64) -> Result<BigInt> {
    let link = sylvester_link(n, a)?;
    Ok(BigInt::from(mean_euler_breakdown(&link)?.numerator))
}

/// Both numerator routes side by side, plus the middle ranks they disagree over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterComparison {
    pub n: usize,
    pub a: u64,
    pub closed_form: BigInt,
    pub general: BigInt,
}

impl SylvesterComparison {
    pub fn agree(&self) -> bool {
        self.closed_form == self.general
    }
}

pub fn compare_sylvester_numerators(n: usize, a: u64) -> Result<SylvesterComparison> {
    Ok(SylvesterComparison {
        n,
        a,
        closed_form: sylvester_numerator(n, a)?,
        general: sylvester_numerator_general(n, a)?,
    })
}

/// `chi^{S^1}` of `L(2, 2c_{i_0}, ..., 2c_{i_k})` from the general rule, for
/// comparison with [`sylvester_chi_without_a`].
pub fn sylvester_chi_general(indices: &[usize]) -> Result<i64> {
    let n = *indices.iter().max().unwrap_or(&0);
    let c = crate::linkmodel::sylvester_sequence(n);
    let mut v = vec![2u64];
    for &i in indices {
        use num_traits::ToPrimitive;
        let ci = c[i].to_u64().ok_or(Error::Overflow("sylvester number"))?;
        v.push(2 * ci);
    }
    let ev = ExponentVector::new(v)?;
    // Evaluated through the middle rank so the comparison shares no code with the closed form.
    let q = ev.len() - 2;
    let kappa = middle_betti(&ev)? as i64;
    Ok(q as i64 + 1 + if q % 2 == 0 { kappa } else { -kappa })
}

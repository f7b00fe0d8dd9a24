//! Exponent vectors, derived link data and the Morse-Bott stratification
//! of the Reeb flow.
//!
//! Periods are integers in units where the principal orbit has period
//! `lcm(a)`. A point whose nonzero coordinates are indexed by `J` is fixed by
//! the flow at time `T` exactly when every `a_j` (`j` in `J`) divides `T`, so
//! the fixed set at time `T` is the Brieskorn sub-link on
//! `I_T = { j : a_j | T }`, nonempty when `|I_T| >= 2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, ExactRational};
use crate::error::{Error, Result};

/// Exponents `(a_0, ..., a_n)` of a Brieskorn-Pham polynomial, kept in user order.
///
/// Every entry is at least 2. Full links need at least three entries (see
/// [`make_link`]); two-entry vectors describe torus links, which occur as
/// strata.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidExponent(format!(
                "need at least 2 exponents, got {}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidExponent(format!(
                "exponent {bad} < 2 in {entries:?}"
            )));
        }
        if entries.len() > 63 {
            return Err(Error::InvalidExponent("more than 63 exponents".into()));
        }
        Ok(ExponentVector(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Real dimension `2n - 1` of the link, with `n + 1` exponents.
    pub fn link_dim(&self) -> usize {
        2 * self.0.len() - 3
    }

    /// Sorted non-decreasing copy, the deduplication key for census tables.
    pub fn canonical(&self) -> ExponentVector {
        let mut v = self.0.clone();
        v.sort_unstable();
        ExponentVector(v)
    }

    pub fn sub_vector(&self, indices: &[usize]) -> Vec<u64> {
        indices.iter().map(|&i| self.0[i]).collect()
    }

    pub fn degree(&self) -> Result<u64> {
        arith::lcm_all(&self.0)
    }

    pub fn recip_sum(&self) -> ExactRational {
        self.0
            .iter()
            .map(|&a| ExactRational::new(BigInt::one(), BigInt::from(a)))
            .fold(ExactRational::zero(), |acc, x| acc + x)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "exponents": self.0 })
    }
}

impl TryFrom<Vec<u64>> for ExponentVector {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        ExponentVector::new(v)
    }
}

impl From<ExponentVector> for Vec<u64> {
    fn from(v: ExponentVector) -> Self {
        v.0
    }
}

impl FromStr for ExponentVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad exponent {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ExponentVector::new(entries)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Derived data of a link `L(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProfile {
    pub exponents: ExponentVector,
    /// `d = lcm(a)`, which is also the principal period.
    pub degree: u64,
    /// `w_j = d / a_j`.
    pub weights: Vec<u64>,
    pub link_dim: usize,
    pub recip_sum: ExactRational,
    /// Adjacency lists; `i ~ j` iff `gcd(a_i, a_j) > 1`.
    pub gcd_graph: Vec<Vec<usize>>,
}

impl LinkProfile {
    pub fn entries(&self) -> &[u64] {
        self.exponents.entries()
    }

    /// Number of exponents, `n + 1`.
    pub fn arity(&self) -> usize {
        self.exponents.len()
    }

    pub fn principal_period(&self) -> u64 {
        self.degree
    }

    /// `I_T` as a bitmask over exponent indices.
    pub fn fixed_mask(&self, period: u64) -> u64 {
        self.entries()
            .iter()
            .enumerate()
            .filter(|(_, &a)| period.is_multiple_of(a))
            .fold(0u64, |m, (j, _)| m | (1 << j))
    }

    /// Connected components of the gcd-graph, each sorted, ordered by first vertex.
    pub fn gcd_components(&self) -> Vec<Vec<usize>> {
        let n = self.arity();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &self.gcd_graph[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

pub fn make_link(a: &ExponentVector) -> Result<LinkProfile> {
    if a.len() < 3 {
        return Err(Error::InvalidExponent(format!(
            "a link needs at least 3 exponents, got {}",
            a.len()
        )));
    }
    let entries = a.entries();
    let degree = a.degree()?;
    let weights = entries.iter().map(|&x| degree / x).collect();
    let n = entries.len();
    let gcd_graph = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && arith::gcd(entries[i], entries[j]) > 1)
                .collect()
        })
        .collect();
    Ok(LinkProfile {
        exponents: a.clone(),
        degree,
        weights,
        link_dim: a.link_dim(),
        recip_sum: a.recip_sum(),
        gcd_graph,
    })
}

/// One Morse-Bott family of periodic Reeb orbits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stratum {
    /// `I_T`, ascending.
    pub index_subset: Vec<usize>,
    pub sub_link: ExponentVector,
    /// `lcm` of the sub-link exponents.
    pub min_period: u64,
    /// Real dimension `2|I_T| - 3`.
    pub stratum_dim: usize,
}

impl Stratum {
    pub fn mask(&self) -> u64 {
        self.index_subset.iter().fold(0, |m, &j| m | (1 << j))
    }

    /// Complex dimension of the quotient orbifold.
    pub fn quotient_dim(&self) -> usize {
        self.index_subset.len() - 2
    }
}

fn stratum_from_mask(link: &LinkProfile, mask: u64) -> Result<Stratum> {
    let index_subset: Vec<usize> = (0..link.arity()).filter(|j| mask & (1 << j) != 0).collect();
    let sub = link.exponents.sub_vector(&index_subset);
    let min_period = arith::lcm_all(&sub)?;
    Ok(Stratum {
        stratum_dim: 2 * index_subset.len() - 3,
        index_subset,
        sub_link: ExponentVector::new(sub)?,
        min_period,
    })
}

/// All strata, sorted by minimal period; the last one is principal.
///
/// A subset `S` with `|S| >= 2` is some `I_T` iff it is closed: no exponent
/// outside `S` divides `lcm(a_S)`. Enumerating closed subsets is equivalent
/// to scanning every `T` up to the principal period, without the cost.
pub fn strata(link: &LinkProfile) -> Vec<Stratum> {
    let n = link.arity();
    let a = link.entries();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let sub: Vec<u64> = (0..n)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| a[j])
            .collect();
        // Sub-lcms divide the principal period, which fits in u64.
        let t = arith::lcm_all(&sub).expect("sub-lcm divides degree");
        if link.fixed_mask(t) == mask {
            out.push(stratum_from_mask(link, mask).expect("valid sub-link"));
        }
    }
    out.sort_by_key(|s| s.min_period);
    debug_assert!(out.windows(2).all(|w| w[0].min_period < w[1].min_period));
    out
}

/// The stratified periodic-orbit data of a link, computed once.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
    principal: u64,
    /// Per stratum, the reduced exclusion moduli `a_j / gcd(a_j, T_s)` for
    /// `j` outside the stratum: a cover `m * T_s` stays in the stratum iff
    /// none of them divides `m`.
    moduli: Vec<Vec<u64>>,
}

impl Stratification {
    pub fn new(link: &LinkProfile) -> Self {
        let strata = strata(link);
        let a = link.entries();
        let moduli = strata
            .iter()
            .map(|s| {
                let mask = s.mask();
                (0..a.len())
                    .filter(|j| mask & (1 << j) == 0)
                    .map(|j| a[j] / arith::gcd(a[j], s.min_period))
                    .collect()
            })
            .collect();
        Stratification {
            strata,
            principal: link.degree,
            moduli,
        }
    }

    pub fn principal_period(&self) -> u64 {
        self.principal
    }

    pub fn principal_index(&self) -> usize {
        self.strata.len() - 1
    }

    /// Number of covers `m * T_s` with `1 <= m <= upto` that stay in stratum `s`.
    pub fn count_own_covers(&self, s: usize, upto: u64) -> u64 {
        arith::count_coprime_multiples(upto, &self.moduli[s])
    }

    pub fn is_own_cover(&self, s: usize, m: u64) -> bool {
        self.moduli[s].iter().all(|&r| !m.is_multiple_of(r))
    }

    /// Number of critical periods `t` with `1 <= t <= upto`.
    pub fn count_periods_upto(&self, upto: u64) -> u64 {
        self.strata
            .iter()
            .enumerate()
            .map(|(s, st)| self.count_own_covers(s, upto / st.min_period))
            .sum()
    }

    /// All critical periods in `lo..=hi` as `(period, stratum, cover)`, ascending.
    pub fn periods_in(&self, lo: u64, hi: u64) -> Vec<(u64, usize, u64)> {
        let lo = lo.max(1);
        let mut out = Vec::new();
        if hi < lo {
            return out;
        }
        for (s, st) in self.strata.iter().enumerate() {
            let t = st.min_period;
            let first = lo.div_ceil(t);
            let last = hi / t;
            for m in first..=last {
                if self.is_own_cover(s, m) {
                    out.push((m * t, s, m));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Ordered critical periods up to and including the principal period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSpectrum {
    pub entries: Vec<(u64, Stratum)>,
    pub principal_period: u64,
}

pub fn period_spectrum(link: &LinkProfile) -> PeriodSpectrum {
    let strat = Stratification::new(link);
    let entries = strat
        .periods_in(1, strat.principal_period())
        .into_iter()
        .map(|(t, s, _)| (t, strat.strata[s].clone()))
        .collect();
    PeriodSpectrum {
        entries,
        principal_period: link.degree,
    }
}

/// Sylvester numbers `c_0..=c_n` (`c_0 = 2`, `c_i = c_{i-1}(c_{i-1} - 1) + 1`).
pub fn sylvester_sequence(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = BigInt::from(2);
    for _ in 0..=n {
        out.push(c.clone());
        c = &c * (&c - 1) + 1;
    }
    out
}

fn sylvester_u64(n: usize) -> Result<Vec<u64>> {
    use num_traits::ToPrimitive;
    sylvester_sequence(n)
        .iter()
        .map(|c| c.to_u64().ok_or(Error::Overflow("sylvester number")))
        .collect()
}

/// The base `(2, 2c_0, ..., 2c_n)` of the Sylvester family.
pub fn sylvester_base(n: usize) -> Result<Vec<u64>> {
    let mut v = vec![2u64];
    for c in sylvester_u64(n)? {
        v.push(
            c.checked_mul(2)
                .ok_or(Error::Overflow("sylvester number"))?,
        );
    }
    Ok(v)
}

pub fn sylvester_admissible(n: usize, a: u64) -> Result<bool> {
    Ok(a >= 2 && sylvester_u64(n)?.iter().all(|&c| arith::gcd(a, c) == 1))
}

/// `L(2, 2c_0, ..., 2c_n, a)` for every admissible `a <= a_max`.
pub fn sylvester_links(n: usize, a_max: u64) -> Result<Vec<ExponentVector>> {
    let base = sylvester_base(n)?;
    let mut out = Vec::new();
    for a in 2..=a_max {
        if sylvester_admissible(n, a)? {
            let mut v = base.clone();
            v.push(a);
            out.push(ExponentVector::new(v)?);
        }
    }
    Ok(out)
}

//! Maslov indices, the mean Euler characteristic and the Morse-Bott E¹-page
//! of positive `S^1`-equivariant symplectic homology.
//!
//! A critical period `t` carries the stratum on `I_t` covered
//! `t / lcm(a_{I_t})` times. Its Robbin-Salamon index is
//!
//! ```text
//! mu(t) = sum_j (2 floor(t / a_j) + [a_j does not divide t]) - 2t
//! ```
//!
//! which is the usual Brieskorn index formula with the `I_t` and non-`I_t`
//! sums folded together. Since every `a_j` divides the principal period `P`,
//! `mu(t + P) = mu(t) + mu_P`, so the E¹-page is periodic in `(P, mu_P)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::ExactRational;
use crate::error::{Error, Result};
use crate::homology::{quotient_betti, QuotientBetti};
use crate::linkmodel::{LinkProfile, Stratification, Stratum};

/// Default cap on the number of E¹ columns a single rank computation may visit.
pub const DEFAULT_COLUMN_BUDGET: u64 = 20_000_000;

/// Number of covers `a*T_i` below `T_principal` that are not multiples of any excluded period.
pub fn phi(period: u64, exclusions: &[u64], principal: u64) -> u64 {
    if period == principal {
        return 1;
    }
    (1..)
        .map(|a| a * period)
        .take_while(|&t| t < principal)
        .filter(|t| exclusions.iter().all(|&e| t % e != 0))
        .count() as u64
}

/// Index data of the `cover`-fold cover of a stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub period: u64,
    pub cover: u64,
    pub maslov: i64,
    pub stratum_dim: usize,
    pub shift: i64,
}

impl IndexReport {
    pub fn sign(&self) -> i64 {
        if self.shift.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

fn maslov_at(link: &LinkProfile, t: u64) -> i64 {
    let t = t as i128;
    let sum: i128 = link
        .entries()
        .iter()
        .map(|&a| {
            let a = a as i128;
            2 * (t / a) + i128::from(t % a != 0)
        })
        .sum();
    i64::try_from(sum - 2 * t).expect("Maslov index fits in i64")
}

/// Robbin-Salamon index of the `cover`-fold cover of the stratum with minimal period `period`.
pub fn maslov_index(link: &LinkProfile, period: u64, cover: u64) -> Result<IndexReport> {
    let mask = link.fixed_mask(period);
    let subset: Vec<u64> = link
        .entries()
        .iter()
        .enumerate()
        .filter(|(j, _)| mask & (1 << j) != 0)
        .map(|(_, &a)| a)
        .collect();
    if subset.len() < 2 || crate::arith::lcm_all(&subset)? != period {
        return Err(Error::NotAStratumPeriod(period));
    }
    if cover == 0 {
        return Err(Error::PreconditionFailed("cover must be at least 1".into()));
    }
    let total = period
        .checked_mul(cover)
        .ok_or(Error::Overflow("cover period"))?;
    for (j, &a) in link.entries().iter().enumerate() {
        if mask & (1 << j) == 0 && total % a == 0 {
            return Err(Error::NotMorseBottCover {
                period,
                cover,
                exponent: a,
                total,
            });
        }
    }
    let maslov = maslov_at(link, total);
    let q = subset.len() as i64 - 2;
    Ok(IndexReport {
        period,
        cover,
        maslov,
        stratum_dim: subset.len() * 2 - 3,
        shift: maslov - q,
    })
}

/// `mu_P = 2 lcm(a) (sum 1/a_j - 1)`.
pub fn principal_index(link: &LinkProfile) -> i64 {
    maslov_at(link, link.degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanEuler {
    #[serde(with = "crate::arith::rational_text")]
    pub value: ExactRational,
}

/// One stratum's term in the mean Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTerm {
    pub stratum: Stratum,
    pub index: IndexReport,
    pub phi: u64,
    pub chi_s1: i64,
}

impl StratumTerm {
    pub fn contribution(&self) -> i64 {
        self.index.sign() * self.phi as i64 * self.chi_s1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanEulerBreakdown {
    pub terms: Vec<StratumTerm>,
    pub mu_p: i64,
    pub numerator: i64,
    pub value: ExactRational,
}

/// Per-stratum data of the mean Euler characteristic, one term per stratum at its minimal period.
pub fn mean_euler_breakdown(link: &LinkProfile) -> Result<MeanEulerBreakdown> {
    let mu_p = principal_index(link);
    if mu_p == 0 {
        return Err(Error::ZeroPrincipalIndex);
    }
    let strat = Stratification::new(link);
    let principal = strat.principal_period();
    let mut terms = Vec::with_capacity(strat.strata.len());
    for (s, stratum) in strat.strata.iter().enumerate() {
        let phi = if s == strat.principal_index() {
            1
        } else {
            // Covers m*T_s < P staying in this stratum.
            strat.count_own_covers(s, (principal - 1) / stratum.min_period)
        };
        let index = maslov_index(link, stratum.min_period, 1)?;
        let chi_s1 = quotient_betti(&stratum.sub_link)?.chi;
        terms.push(StratumTerm {
            stratum: stratum.clone(),
            index,
            phi,
            chi_s1,
        });
    }
    let numerator: i64 = terms.iter().map(StratumTerm::contribution).sum();
    let value = ExactRational::new(BigInt::from(numerator), BigInt::from(mu_p.abs()));
    Ok(MeanEulerBreakdown {
        terms,
        mu_p,
        numerator,
        value,
    })
}

pub fn mean_euler(link: &LinkProfile) -> Result<MeanEuler> {
    Ok(MeanEuler {
        value: mean_euler_breakdown(link)?.value,
    })
}

/// The same numerator summed period by period over one principal period,
/// each period weighted by its own stratum's sign and `chi^{S^1}`.
pub fn mean_euler_by_periods(link: &LinkProfile) -> Result<MeanEuler> {
    let mu_p = principal_index(link);
    if mu_p == 0 {
        return Err(Error::ZeroPrincipalIndex);
    }
    let strat = Stratification::new(link);
    let chis: Vec<i64> = strat
        .strata
        .iter()
        .map(|s| quotient_betti(&s.sub_link).map(|q| q.chi))
        .collect::<Result<_>>()?;
    let mut numerator = 0i64;
    for (t, s, _) in strat.periods_in(1, strat.principal_period()) {
        let q = strat.strata[s].quotient_dim() as i64;
        let shift = maslov_at(link, t) - q;
        let sign = if shift.rem_euclid(2) == 0 { 1 } else { -1 };
        numerator += sign * chis[s];
    }
    Ok(MeanEuler {
        value: ExactRational::new(BigInt::from(numerator), BigInt::from(mu_p.abs())),
    })
}

/// Ranks per total degree over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRanks {
    pub k_lo: i64,
    pub k_hi: i64,
    /// Every degree in the window, zeros included.
    #[serde(with = "degree_map")]
    pub ranks: BTreeMap<i64, u64>,
    #[serde(rename = "mu_P")]
    pub period_degree: i64,
    #[serde(rename = "T_P")]
    pub period_action: u64,
    pub lacunary: bool,
}

impl GradedRanks {
    pub fn rank(&self, k: i64) -> u64 {
        self.ranks.get(&k).copied().unwrap_or(0)
    }

    pub fn alternating_sum(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(&k, &r)| {
                if k.rem_euclid(2) == 0 {
                    r as i64
                } else {
                    -(r as i64)
                }
            })
            .sum()
    }
}

mod degree_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, u64>, s: S) -> Result<S::Ok, S::Error> {
        // JSON object keys are strings; emit them in numeric order.
        let ordered: Vec<(String, u64)> = m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let mut map = serde_json::Map::new();
        for (k, v) in ordered {
            map.insert(k, v.into());
        }
        map.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, u64>, D::Error> {
        let raw: BTreeMap<String, u64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<i64>()
                    .map(|k| (k, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// One column of the E¹-page: a single critical period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Column {
    /// 1-based ordinal of the period among all critical periods.
    pub ordinal: u64,
    pub period: u64,
    pub stratum: usize,
    pub cover: u64,
    pub shift: i64,
    /// `(total degree, rank)` for the nonzero quotient Betti numbers.
    pub contributions: Vec<(i64, u64)>,
}

#[derive(Clone, Debug)]
pub struct E1Page {
    pub strata: Vec<Stratum>,
    pub columns: Vec<E1Column>,
    pub ranks: GradedRanks,
}

/// Critical periods whose columns can reach total degrees `lo..=hi`.
fn period_range(link: &LinkProfile, mu_p: i64, lo: i64, hi: i64) -> Option<(u64, u64)> {
    let slack = 2 * link.arity() as i128 + 2;
    let p = link.degree as i128;
    let (lo, hi) = (lo as i128 - slack, hi as i128 + slack);
    let mu = mu_p as i128;
    // Columns sit within `slack` of the line t * mu_P / P.
    let (t_lo, t_hi) = if mu > 0 {
        (ceil_div(lo * p, mu), (hi * p).div_euclid(mu))
    } else {
        (ceil_div(-hi * p, -mu), (-lo * p).div_euclid(-mu))
    };
    let t_lo = t_lo.max(1);
    if t_hi < t_lo {
        return None;
    }
    Some((
        u64::try_from(t_lo).ok()?,
        u64::try_from(t_hi).unwrap_or(u64::MAX),
    ))
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// E¹-page columns contributing to total degrees `k_lo - 1 ..= k_hi`, with
/// the degree-wise direct sum over `k_lo..=k_hi`.
pub fn e1_page(link: &LinkProfile, k_lo: i64, k_hi: i64) -> Result<E1Page> {
    e1_page_with_budget(link, k_lo, k_hi, DEFAULT_COLUMN_BUDGET)
}

pub fn e1_page_with_budget(
    link: &LinkProfile,
    k_lo: i64,
    k_hi: i64,
    budget: u64,
) -> Result<E1Page> {
    if k_hi < k_lo {
        return Err(Error::PreconditionFailed(format!(
            "empty degree window {k_lo}..={k_hi}"
        )));
    }
    let mu_p = principal_index(link);
    if mu_p == 0 {
        // Every principal period repeats the same degrees: ranks are unbounded.
        return Err(Error::ZeroPrincipalIndex);
    }
    let strat = Stratification::new(link);
    let betti: Vec<QuotientBetti> = strat
        .strata
        .iter()
        .map(|s| quotient_betti(&s.sub_link))
        .collect::<Result<_>>()?;

    let mut columns = Vec::new();
    if let Some((t_lo, t_hi)) = period_range(link, mu_p, k_lo - 1, k_hi) {
        let before = strat.count_periods_upto(t_lo - 1);
        let visited = strat.count_periods_upto(t_hi) - before;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                needed: visited as u128,
                budget: budget as u128,
            });
        }
        for (i, (t, s, cover)) in strat.periods_in(t_lo, t_hi).into_iter().enumerate() {
            let q = strat.strata[s].quotient_dim() as i64;
            let shift = maslov_at(link, t) - q;
            let contributions = betti[s]
                .ranks
                .iter()
                .enumerate()
                .filter(|(_, &b)| b > 0)
                .map(|(i, &b)| (shift + i as i64, b))
                .collect();
            columns.push(E1Column {
                ordinal: before + 1 + i as u64,
                period: t,
                stratum: s,
                cover,
                shift,
                contributions,
            });
        }
    }

    let mut ranks: BTreeMap<i64, u64> = (k_lo..=k_hi).map(|k| (k, 0)).collect();
    for col in &columns {
        for &(k, b) in &col.contributions {
            if let Some(r) = ranks.get_mut(&k) {
                *r += b;
            }
        }
    }
    let lacunary = check_lacunary(&columns, k_lo, k_hi);
    Ok(E1Page {
        strata: strat.strata,
        columns,
        ranks: GradedRanks {
            k_lo,
            k_hi,
            ranks,
            period_degree: mu_p,
            period_action: link.degree,
            lacunary,
        },
    })
}

/// `E¹_{p,q} != 0` must force `E¹_{p-i, q+i-1} = 0` for every `i > 0`: no
/// earlier column may be nonzero one total degree below.
fn check_lacunary(columns: &[E1Column], k_lo: i64, k_hi: i64) -> bool {
    let mut earlier: BTreeSet<i64> = BTreeSet::new();
    for col in columns {
        for &(k, _) in &col.contributions {
            if (k_lo..=k_hi).contains(&k) && earlier.contains(&(k - 1)) {
                return false;
            }
        }
        earlier.extend(col.contributions.iter().map(|&(k, _)| k));
    }
    true
}

/// Ranks of `SH^{+,S^1}` over `k_lo..=k_hi` when the spectral sequence is
/// lacunary there; otherwise the E¹ ranks are upper bounds and `lacunary` is false.
pub fn sh_plus_ranks(link: &LinkProfile, k_lo: i64, k_hi: i64) -> Result<GradedRanks> {
    Ok(e1_page(link, k_lo, k_hi)?.ranks)
}

/// A window of `|mu_P|` consecutive degrees past the start-up transient,
/// where every column class of one principal period appears exactly once.
pub fn steady_window(link: &LinkProfile) -> Result<(i64, i64)> {
    let mu_p = principal_index(link);
    if mu_p == 0 {
        return Err(Error::ZeroPrincipalIndex);
    }
    let slack = 2 * link.arity() as i64 + 2;
    Ok(if mu_p > 0 {
        let lo = mu_p + slack;
        (lo, lo + mu_p - 1)
    } else {
        let hi = mu_p - slack;
        (hi + mu_p + 1, hi)
    })
}

/// Mean Euler characteristic read off the E¹ ranks over one degree period.
///
/// Differentials lower total degree by one, so the averaged alternating sum
/// of the E¹ ranks equals that of `SH^{+,S^1}` whether or not the spectral
/// sequence degenerates. See [`mean_euler_from_sh_ranks`] for the variant
/// that insists on lacunarity.
pub fn mean_euler_from_ranks(link: &LinkProfile) -> Result<MeanEuler> {
    let (lo, hi) = steady_window(link)?;
    Ok(period_average(&sh_plus_ranks(link, lo, hi)?))
}

/// As [`mean_euler_from_ranks`], but only from ranks known to be those of
/// `SH^{+,S^1}`, i.e. when the steady window is lacunary.
pub fn mean_euler_from_sh_ranks(link: &LinkProfile) -> Result<MeanEuler> {
    let (lo, hi) = steady_window(link)?;
    let ranks = sh_plus_ranks(link, lo, hi)?;
    if !ranks.lacunary {
        return Err(Error::NotLacunary { k_lo: lo, k_hi: hi });
    }
    Ok(period_average(&ranks))
}

fn period_average(ranks: &GradedRanks) -> MeanEuler {
    MeanEuler {
        value: ExactRational::new(
            BigInt::from(ranks.alternating_sum()),
            BigInt::from(ranks.period_degree.abs()),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::linkmodel::{make_link, ExponentVector};
    use proptest::prelude::*;

    fn link(v: &[u64]) -> LinkProfile {
        make_link(&ExponentVector::new(v.to_vec()).unwrap()).unwrap()
    }

    /// Index formula exactly as written, split over `I_T` and its complement.
    fn maslov_oracle(a: &[u64], subset: &[usize], nt: u64) -> i64 {
        let mut mu = 0i64;
        for (j, &aj) in a.iter().enumerate() {
            if subset.contains(&j) {
                assert_eq!(nt % aj, 0);
                mu += 2 * (nt / aj) as i64;
            } else {
                mu += 2 * (nt / aj) as i64 + 1;
            }
        }
        mu - 2 * nt as i64
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(48, &[], 48), 1);
        assert_eq!(phi(6, &[12, 16, 48], 48), 4);
        assert_eq!(phi(4, &[12, 16, 48], 48), 6);
        assert_eq!(phi(12, &[16, 48], 48), 3);
        // Dropping the period-16 stratum miscounts: 8 instead of 6.
        assert_eq!(phi(4, &[12, 48], 48), 8);
    }

    #[test]
    fn maslov_examples() {
        let l = link(&[2, 3, 4, 16]);
        assert_eq!(maslov_index(&l, 48, 1).unwrap().maslov, 14);
        let r = maslov_index(&l, 12, 1).unwrap();
        assert_eq!((r.maslov, r.stratum_dim, r.shift), (3, 3, 2));
        assert_eq!(r.maslov, maslov_oracle(&[2, 3, 4, 16], &[0, 1, 2], 12));
        assert!(matches!(
            maslov_index(&l, 4, 3),
            Err(Error::NotMorseBottCover {
                exponent: 3,
                total: 12,
                ..
            })
        ));
        assert!(matches!(
            maslov_index(&l, 8, 1),
            Err(Error::NotAStratumPeriod(8))
        ));
    }

    #[test]
    fn principal_index_examples() {
        assert_eq!(principal_index(&link(&[2, 3, 4, 16])), 14);
        assert_eq!(principal_index(&link(&[2, 2, 2, 2])), 4);
        assert_eq!(principal_index(&link(&[2, 3, 5, 30])), 4);
    }

    #[test]
    fn mean_euler_examples() {
        let cases: &[(&[u64], i64, i64)] = &[
            (&[2, 3, 4, 16], 25, 14),
            (&[2, 2, 3, 3], 3, 2),
            (&[2, 3, 5, 31], 301, 122),
            (&[2, 3, 3, 9], 13, 10),
        ];
        for &(v, n, d) in cases {
            let l = link(v);
            assert_eq!(mean_euler(&l).unwrap().value, ratio(n, d), "{v:?}");
            assert_eq!(
                mean_euler_by_periods(&l).unwrap().value,
                ratio(n, d),
                "{v:?}"
            );
            assert_eq!(
                mean_euler_from_ranks(&l).unwrap().value,
                ratio(n, d),
                "{v:?}"
            );
        }
        // The period-16 stratum's odd classes break lacunarity here.
        assert!(matches!(
            mean_euler_from_sh_ranks(&link(&[2, 3, 4, 16])),
            Err(Error::NotLacunary { .. })
        ));
        assert_eq!(
            mean_euler_from_sh_ranks(&link(&[2, 3, 7, 22]))
                .unwrap()
                .value,
            ratio(77, 10)
        );
        assert!(matches!(
            mean_euler(&link(&[2, 3, 6])),
            Err(Error::ZeroPrincipalIndex)
        ));
    }

    #[test]
    fn detailed_example_terms() {
        let b = mean_euler_breakdown(&link(&[2, 3, 4, 16])).unwrap();
        let rows: Vec<(Vec<u64>, u64, i64, u64, i64)> = b
            .terms
            .iter()
            .map(|t| {
                (
                    t.stratum.sub_link.entries().to_vec(),
                    t.stratum.min_period,
                    t.chi_s1,
                    t.phi,
                    t.index.sign(),
                )
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                (vec![2, 4], 4, 2, 6, 1),
                (vec![2, 3], 6, 1, 4, 1),
                (vec![2, 3, 4], 12, 2, 3, 1),
                (vec![2, 4, 16], 16, 0, 2, 1),
                (vec![2, 3, 4, 16], 48, 3, 1, 1),
            ]
        );
        assert_eq!(b.numerator, 25);
        assert_eq!(b.mu_p, 14);
    }

    #[test]
    fn phi_routes_agree() {
        for v in [
            &[2u64, 3, 4, 16][..],
            &[3, 3, 4, 7],
            &[2, 6, 10, 15, 9],
            &[4, 6, 9, 10],
        ] {
            let l = link(v);
            let strat = Stratification::new(&l);
            let periods: Vec<u64> = strat.strata.iter().map(|s| s.min_period).collect();
            for (s, st) in strat.strata.iter().enumerate() {
                let excl: Vec<u64> = periods
                    .iter()
                    .copied()
                    .filter(|&p| p > st.min_period)
                    .collect();
                let fast = if s == strat.principal_index() {
                    1
                } else {
                    strat.count_own_covers(s, (l.degree - 1) / st.min_period)
                };
                assert_eq!(
                    phi(st.min_period, &excl, l.degree),
                    fast,
                    "{v:?} T={}",
                    st.min_period
                );
            }
        }
    }

    #[test]
    fn sh0_distinguishes_equal_mean_euler() {
        let a = link(&[2, 3, 7, 22]);
        let b = link(&[3, 3, 4, 7]);
        assert_eq!(mean_euler(&a).unwrap(), mean_euler(&b).unwrap());
        let ra = sh_plus_ranks(&a, 0, 0).unwrap();
        let rb = sh_plus_ranks(&b, 0, 0).unwrap();
        assert_eq!((ra.rank(0), ra.lacunary), (6, true));
        assert_eq!((rb.rank(0), rb.lacunary), (7, true));
    }

    #[test]
    fn e1_page_vanishes_below_minimal_shift() {
        for v in [&[2u64, 3, 4, 16][..], &[2, 3, 7, 22], &[2, 2, 3, 3]] {
            let l = link(v);
            let page = e1_page(&l, -40, 60).unwrap();
            let min_shift = page.columns.iter().map(|c| c.shift).min().unwrap();
            for k in -40..min_shift {
                assert_eq!(page.ranks.rank(k), 0, "{v:?} k={k}");
            }
            assert!(page
                .columns
                .windows(2)
                .all(|w| w[0].ordinal + 1 == w[1].ordinal));
            assert_eq!(page.columns[0].ordinal, 1);
        }
    }

    #[test]
    fn shift_advances_by_mu_p_per_principal_period() {
        let l = link(&[2, 3, 4, 16]);
        let page = e1_page(&l, 0, 60).unwrap();
        let by_period: BTreeMap<u64, i64> =
            page.columns.iter().map(|c| (c.period, c.shift)).collect();
        let mut checked = 0;
        for (&t, &sh) in &by_period {
            if let Some(&later) = by_period.get(&(t + l.degree)) {
                assert_eq!(later - sh, 14);
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn ranks_over_one_period_sum_to_numerator() {
        let l = link(&[2, 3, 4, 16]);
        let (lo, hi) = steady_window(&l).unwrap();
        let r = sh_plus_ranks(&l, lo, hi).unwrap();
        assert_eq!(r.alternating_sum(), 25);
    }

    #[test]
    fn graded_ranks_json_shape() {
        let r = sh_plus_ranks(&link(&[2, 3, 7, 22]), 0, 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["k_lo"], 0);
        assert_eq!(v["ranks"]["0"], 6);
        assert_eq!(v["mu_P"], 20);
        assert_eq!(v["lacunary"], true);
        let back: GradedRanks = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn column_budget_is_enforced() {
        let l = link(&[2, 3, 7, 22]);
        assert!(matches!(
            e1_page_with_budget(&l, 0, 200, 5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    fn shuffled(v: &[u64], seed: u64) -> Vec<u64> {
        let mut p = v.to_vec();
        let mut s = seed;
        for i in (1..p.len()).rev() {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            p.swap(i, (s >> 33) as usize % (i + 1));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn maslov_matches_split_formula(v in prop::collection::vec(2u64..=20, 3..6)) {
            let l = link(&v);
            for st in Stratification::new(&l).strata {
                let r = maslov_index(&l, st.min_period, 1).unwrap();
                prop_assert_eq!(r.maslov, maslov_oracle(&v, &st.index_subset, st.min_period));
            }
        }

        #[test]
        fn positivity_matches_recip_sum(v in prop::collection::vec(2u64..=30, 3..7)) {
            let l = link(&v);
            let one = ratio(1, 1);
            prop_assert_eq!(principal_index(&l) > 0, l.recip_sum > one);
            prop_assert_eq!(principal_index(&l) == 0, l.recip_sum == one);
        }

        #[test]
        fn invariants_permutation_invariant(v in prop::collection::vec(2u64..=20, 4..6), seed in any::<u64>()) {
            let l = link(&v);
            let p = link(&shuffled(&v, seed));
            prop_assert_eq!(principal_index(&l), principal_index(&p));
            if principal_index(&l) != 0 {
                prop_assert_eq!(mean_euler(&l).unwrap(), mean_euler(&p).unwrap());
                let (a, b) = (sh_plus_ranks(&l, 0, 6).unwrap(), sh_plus_ranks(&p, 0, 6).unwrap());
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn period_sum_matches_stratum_sum(v in prop::collection::vec(2u64..=16, 3..6)) {
            let l = link(&v);
            prop_assume!(principal_index(&l) != 0 && l.degree <= 100_000);
            prop_assert_eq!(mean_euler(&l).unwrap(), mean_euler_by_periods(&l).unwrap());
            prop_assert_eq!(mean_euler(&l).unwrap(), mean_euler_from_ranks(&l).unwrap());
        }
    }
}

//! Rational homology of links and of their Reeb quotients, plus the
//! topological classifiers built on the gcd-graph.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::linkmodel::{make_link, ExponentVector};

/// Reduced middle Betti rank of `L(a)` via the Milnor-Orlik subset sum
/// `sum_{S} (-1)^{s-|S|} prod(a_S) / lcm(a_S)`.
pub fn middle_betti(a: &ExponentVector) -> Result<u64> {
    let e = a.entries();
    let s = e.len();
    let mut total = BigInt::zero();
    for mask in 0u64..(1u64 << s) {
        let mut prod = BigInt::from(1);
        let mut lcm = BigInt::from(1);
        for (j, &x) in e.iter().enumerate() {
            if mask & (1 << j) != 0 {
                prod *= x;
                lcm = lcm.lcm(&BigInt::from(x));
            }
        }
        let (q, r) = prod.div_rem(&lcm);
        debug_assert!(r.is_zero());
        if (s - mask.count_ones() as usize).is_multiple_of(2) {
            total += q;
        } else {
            total -= q;
        }
    }
    if total.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "negative middle Betti rank {total} for {a}"
        )));
    }
    total.to_u64().ok_or(Error::Overflow("middle Betti rank"))
}

/// Betti numbers of the quotient of a link by its Reeb circle action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBetti {
    /// `b_0, ..., b_{2q}`.
    pub ranks: Vec<u64>,
    pub chi: i64,
}

impl QuotientBetti {
    pub fn complex_dim(&self) -> usize {
        (self.ranks.len() - 1) / 2
    }
}

/// Graded rational Betti numbers of `L(a)/S^1`.
///
/// The Gysin sequence of the orbibundle makes the quotient look like `CP^q`
/// except in the middle degree `q`, which picks up the link's middle rank
/// `kappa`: `b_q = 1 + kappa` for even `q`, `b_q = kappa` for odd `q`.
pub fn quotient_betti(a: &ExponentVector) -> Result<QuotientBetti> {
    let q = a.len() - 2;
    let kappa = middle_betti(a)?;
    let mut ranks: Vec<u64> = (0..=2 * q).map(|i| u64::from(i % 2 == 0)).collect();
    ranks[q] = if q.is_multiple_of(2) {
        1 + kappa
    } else {
        kappa
    };
    let chi = ranks
        .iter()
        .enumerate()
        .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    Ok(QuotientBetti { ranks, chi })
}

/// Euler characteristic of the Reeb quotient.
pub fn chi_s1(a: &ExponentVector) -> Result<i64> {
    Ok(quotient_betti(a)?.chi)
}

fn require_dim5(a: &ExponentVector, what: &'static str) -> Result<()> {
    if a.len() < 4 {
        return Err(Error::DimensionTooLow {
            what,
            dim: a.link_dim(),
            min: 5,
        });
    }
    Ok(())
}

struct GraphShape {
    isolated: usize,
    /// Components of size >= 3 with odd size and all pairwise gcds equal to 2.
    odd_gcd_two: usize,
}

fn graph_shape(a: &ExponentVector) -> Result<GraphShape> {
    let link = make_link(a)?;
    let e = a.entries();
    let mut isolated = 0;
    let mut odd_gcd_two = 0;
    for comp in link.gcd_components() {
        if comp.len() == 1 {
            isolated += 1;
            continue;
        }
        let pairwise_two = comp
            .iter()
            .enumerate()
            .all(|(k, &i)| comp[k + 1..].iter().all(|&j| arith::gcd(e[i], e[j]) == 2));
        if comp.len() % 2 == 1 && pairwise_two {
            odd_gcd_two += 1;
        }
    }
    Ok(GraphShape {
        isolated,
        odd_gcd_two,
    })
}

/// Brieskorn graph criterion for a rational homology sphere.
pub fn is_rational_homology_sphere(a: &ExponentVector) -> Result<bool> {
    require_dim5(a, "rational homology sphere test")?;
    let g = graph_shape(a)?;
    Ok(g.isolated >= 1 || g.odd_gcd_two >= 1)
}

/// Brieskorn graph criterion for a homotopy sphere.
pub fn is_homotopy_sphere(a: &ExponentVector) -> Result<bool> {
    require_dim5(a, "homotopy sphere test")?;
    let g = graph_shape(a)?;
    Ok(g.isolated >= 2 || (g.isolated == 1 && g.odd_gcd_two >= 1))
}

/// Diffeomorphism type of a 5-dimensional link, as far as it is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "value")]
pub enum Dim5Kind {
    Sphere5,
    /// `m (S^2 x S^3)`.
    ConnectedSumS2xS3(u64),
    /// A Smale manifold label such as `M3` or `2M3`; `None` when the family is not listed.
    RationalHomologySphere(Option<String>),
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim5Type {
    pub kind: Dim5Kind,
    pub middle_rank: u64,
}

impl std::fmt::Display for Dim5Type {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            Dim5Kind::Sphere5 => write!(f, "S5"),
            Dim5Kind::ConnectedSumS2xS3(1) => write!(f, "S2xS3"),
            Dim5Kind::ConnectedSumS2xS3(m) => write!(f, "{m}(S2xS3)"),
            Dim5Kind::RationalHomologySphere(Some(name)) => write!(f, "{name}"),
            Dim5Kind::RationalHomologySphere(None) => write!(f, "QHS5"),
            Dim5Kind::Unclassified => write!(f, "unclassified(b2={})", self.middle_rank),
        }
    }
}

/// Known rational-homology-sphere families `(2, x, y, base + step*k)`, sorted exponents.
const SMALE_FAMILIES: &[([u64; 3], u64, u64, &str)] = &[
    ([2, 3, 3], 3, 6, "M2"),
    ([2, 3, 4], 4, 12, "M3"),
    ([2, 3, 4], 8, 12, "M3"),
    ([2, 3, 5], 6, 30, "M5"),
    ([2, 3, 5], 12, 30, "M5"),
    ([2, 3, 5], 18, 30, "M5"),
    ([2, 3, 5], 24, 30, "M5"),
    ([2, 3, 5], 10, 30, "2M3"),
    ([2, 3, 5], 20, 30, "2M3"),
    ([2, 3, 5], 15, 30, "4M2"),
];

pub fn smale_family_name(sorted: &[u64]) -> Option<&'static str> {
    SMALE_FAMILIES.iter().find_map(|(head, base, step, name)| {
        let last = sorted[3];
        (sorted[..3] == head[..] && last >= *base && (last - base).is_multiple_of(*step))
            .then_some(*name)
    })
}

pub fn diffeo_type_dim5(a: &ExponentVector) -> Result<Dim5Type> {
    if a.len() != 4 {
        return Err(Error::DimensionMismatch {
            what: "dimension-5 classification",
            expected: 4,
            got: a.len(),
        });
    }
    let middle_rank = middle_betti(a)?;
    let sorted = a.canonical();
    let s = sorted.entries();
    let kind = if is_homotopy_sphere(a)? {
        Dim5Kind::Sphere5
    } else if s[0] == 2 && s[1] == 2 {
        Dim5Kind::ConnectedSumS2xS3(arith::gcd(s[2], s[3]) - 1)
    } else if is_rational_homology_sphere(a)? {
        Dim5Kind::RationalHomologySphere(smale_family_name(s).map(str::to_string))
    } else {
        Dim5Kind::Unclassified
    };
    if let Dim5Kind::ConnectedSumS2xS3(m) = kind {
        if m != middle_rank {
            return Err(Error::InternalInconsistency(format!(
                "{a}: connected-sum count {m} vs middle rank {middle_rank}"
            )));
        }
    }
    Ok(Dim5Type { kind, middle_rank })
}

pub const DEFAULT_LATTICE_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature7 {
    pub sigma: i64,
    /// `sigma/8 mod 28`, the oriented homotopy 7-sphere class, for homotopy spheres.
    pub exotic_class: Option<u8>,
}

/// Milnor-fibre signature of a 7-dimensional link by direct lattice count:
/// points `0 < x_j < a_j` with `sum x_j/a_j mod 2` in `(0,1)` count `+1`,
/// in `(1,2)` count `-1`.
pub fn milnor_signature_dim7(a: &ExponentVector, budget: u128) -> Result<Signature7> {
    if a.len() != 5 {
        return Err(Error::NotDim7(a.len()));
    }
    let e = a.entries();
    let needed: u128 = e.iter().map(|&x| (x - 1) as u128).product();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let d = a.degree()?;
    let w: Vec<u64> = e.iter().map(|&x| d / x).collect();
    let two_d = 2 * d as u128;
    let d = d as u128;
    let sigma: i64 = (1..e[0])
        .into_par_iter()
        .map(|x0| {
            let mut acc = 0i64;
            for x1 in 1..e[1] {
                for x2 in 1..e[2] {
                    for x3 in 1..e[3] {
                        let partial = (x0 * w[0] + x1 * w[1] + x2 * w[2] + x3 * w[3]) as u128;
                        for x4 in 1..e[4] {
                            let s = (partial + (x4 * w[4]) as u128) % two_d;
                            if s != 0 && s < d {
                                acc += 1;
                            } else if s > d {
                                acc -= 1;
                            }
                        }
                    }
                }
            }
            acc
        })
        .sum();
    let exotic_class = if is_homotopy_sphere(a)? {
        if sigma % 8 != 0 {
            return Err(Error::InternalInconsistency(format!(
                "{a}: homotopy sphere with signature {sigma} not divisible by 8"
            )));
        }
        Some((sigma / 8).rem_euclid(28) as u8)
    } else {
        None
    };
    Ok(Signature7 {
        sigma,
        exotic_class,
    })
}

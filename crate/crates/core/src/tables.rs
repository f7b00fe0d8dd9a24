//! Census records: enumeration, collision detection, family sweeps and
//! CSV / JSON-lines persistence.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, ExactRational};
use crate::einstein::{moduli_dimension, se_status, ModuliReport, SEReport};
use crate::error::{Error, Result};
use crate::homology::{
    diffeo_type_dim5, is_homotopy_sphere, is_rational_homology_sphere, middle_betti,
    milnor_signature_dim7, Dim5Type, Signature7,
};
use crate::invariants::{mean_euler, principal_index, sh_plus_ranks};
use crate::linkmodel::{make_link, ExponentVector, LinkProfile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_COLUMNS: [&str; 12] = [
    "exponents",
    "dim",
    "degree",
    "mu_P",
    "chi_m",
    "middle_rank",
    "homotopy_sphere",
    "dim5_type",
    "se_verdict",
    "kuranishi_dim",
    "perturbation_count",
    "sh0_rank",
];

mod optional_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<ExactRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&arith::fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<ExactRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| arith::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub exponents: ExponentVector,
    pub dim: usize,
    pub degree: u64,
    pub weights: Vec<u64>,
    #[serde(with = "arith::rational_text")]
    pub recip_sum: ExactRational,
    #[serde(rename = "mu_P")]
    pub mu_p: i64,
    #[serde(
        default,
        with = "optional_rational",
        skip_serializing_if = "Option::is_none"
    )]
    pub chi_m: Option<ExactRational>,
    pub middle_rank: u64,
    pub homotopy_sphere: Option<bool>,
    pub rhs: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim5_type: Option<Dim5Type>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sig7: Option<Signature7>,
    pub se: SEReport,
    pub moduli: ModuliReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sh0_rank: Option<u64>,
}

/// Which optional columns to fill.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RecordOptions {
    /// Lattice budget for the dimension-7 signature; `None` skips it.
    pub signature_budget: Option<u128>,
    pub sh0: bool,
}

fn defined_for_four_plus(r: Result<bool>) -> Result<Option<bool>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::DimensionTooLow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn sh0_rank(link: &LinkProfile) -> Result<u64> {
    Ok(sh_plus_ranks(link, 0, 0)?.rank(0))
}

impl LinkRecord {
    pub fn compute(a: &ExponentVector, opts: RecordOptions) -> Result<Self> {
        let link = make_link(a)?;
        let mu_p = principal_index(&link);
        let chi_m = if mu_p != 0 {
            Some(mean_euler(&link)?.value)
        } else {
            None
        };
        let dim5_type = if a.len() == 4 {
            Some(diffeo_type_dim5(a)?)
        } else {
            None
        };
        let sig7 = match opts.signature_budget {
            Some(budget) if a.len() == 5 => Some(milnor_signature_dim7(a, budget)?),
            _ => None,
        };
        let sh0_rank = if opts.sh0 && mu_p != 0 {
            Some(sh0_rank(&link)?)
        } else {
            None
        };
        Ok(LinkRecord {
            exponents: a.clone(),
            dim: link.link_dim,
            degree: link.degree,
            weights: link.weights.clone(),
            recip_sum: link.recip_sum.clone(),
            mu_p,
            chi_m,
            middle_rank: middle_betti(a)?,
            homotopy_sphere: defined_for_four_plus(is_homotopy_sphere(a))?,
            rhs: defined_for_four_plus(is_rational_homology_sphere(a))?,
            dim5_type,
            sig7,
            se: se_status(&link)?,
            moduli: moduli_dimension(&link)?,
            sh0_rank,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filter {
    Positive,
    SeExists,
    SeUnknown,
    HomotopySphere,
    Rhs,
    /// The canonical vector contains this multiset of exponents.
    Contains(Vec<u64>),
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "positive" => Filter::Positive,
            "se_exists" | "se-exists" => Filter::SeExists,
            "se_unknown" | "se-unknown" => Filter::SeUnknown,
            "homotopy_sphere" | "homotopy-sphere" => Filter::HomotopySphere,
            "rhs" => Filter::Rhs,
            other => match other.strip_prefix("contains:") {
                Some(list) => Filter::Contains(
                    list.split(',')
                        .map(|x| {
                            x.trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad exponent {x:?}")))
                        })
                        .collect::<Result<_>>()?,
                ),
                None => return Err(Error::Parse(format!("unknown filter {other:?}"))),
            },
        })
    }
}

fn contains_multiset(sorted: &[u64], wanted: &[u64]) -> bool {
    let mut pool = sorted.to_vec();
    wanted
        .iter()
        .all(|w| match pool.iter().position(|x| x == w) {
            Some(i) => {
                pool.swap_remove(i);
                true
            }
            None => false,
        })
}

/// Checks that need no record.
fn passes_structural(a: &ExponentVector, filters: &[Filter]) -> bool {
    filters.iter().all(|f| match f {
        Filter::Positive => a.recip_sum() > num_traits::One::one(),
        Filter::Contains(w) => contains_multiset(a.entries(), w),
        _ => true,
    })
}

fn passes(r: &LinkRecord, filters: &[Filter]) -> bool {
    use crate::einstein::Verdict;
    filters.iter().all(|f| match f {
        Filter::SeExists => r.se.verdict == Verdict::Exists,
        Filter::SeUnknown => r.se.verdict == Verdict::Unknown,
        Filter::HomotopySphere => r.homotopy_sphere == Some(true),
        Filter::Rhs => r.rhs == Some(true),
        Filter::Positive | Filter::Contains(_) => true,
    })
}

fn arity_for_dim(dim: usize) -> Result<usize> {
    if dim < 5 || dim.is_multiple_of(2) {
        return Err(Error::PreconditionFailed(format!(
            "dimension must be odd and at least 5, got {dim}"
        )));
    }
    Ok((dim + 3) / 2)
}

/// Sorted non-decreasing vectors of `len` entries in `lead..=max` starting with `lead`.
fn canonical_vectors_with_lead(len: usize, lead: u64, max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, len: usize, max: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let lo = *prefix.last().expect("prefix holds the lead");
        for x in lo..=max {
            prefix.push(x);
            extend(prefix, len, max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![lead], len, max, &mut out);
    out
}

/// Records for canonical vectors whose first entry is `lead`, in lexicographic order.
pub fn enumerate_shard(
    dim: usize,
    max_exponent: u64,
    lead: u64,
    filters: &[Filter],
    opts: RecordOptions,
) -> Result<Vec<LinkRecord>> {
    let len = arity_for_dim(dim)?;
    let vectors: Vec<ExponentVector> = canonical_vectors_with_lead(len, lead, max_exponent)
        .into_iter()
        .map(ExponentVector::new)
        .collect::<Result<_>>()?;
    let records: Vec<Option<LinkRecord>> = vectors
        .par_iter()
        .map(|a| {
            if !passes_structural(a, filters) {
                return Ok(None);
            }
            let r = LinkRecord::compute(a, opts)?;
            Ok(passes(&r, filters).then_some(r))
        })
        .collect::<Result<_>>()?;
    Ok(records.into_iter().flatten().collect())
}

/// All canonical links of the given dimension with entries `<= max_exponent`
/// passing every filter, in lexicographic order. Shards run in parallel by
/// leading exponent and are merged in order.
pub fn enumerate(
    dim: usize,
    max_exponent: u64,
    filters: &[Filter],
    opts: RecordOptions,
) -> Result<Vec<LinkRecord>> {
    arity_for_dim(dim)?;
    if max_exponent < 2 {
        return Err(Error::PreconditionFailed(
            "max exponent must be at least 2".into(),
        ));
    }
    let shards: Vec<Vec<LinkRecord>> = (2..=max_exponent)
        .into_par_iter()
        .map(|lead| enumerate_shard(dim, max_exponent, lead, filters, opts))
        .collect::<Result<_>>()?;
    Ok(shards.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionMember {
    pub exponents: ExponentVector,
    /// Ranks over the requested degree window; `None` if the E¹ page was out of budget.
    pub sh_ranks: Option<Vec<u64>>,
    pub lacunary: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionGroup {
    #[serde(with = "arith::rational_text")]
    pub chi_m: ExactRational,
    pub members: Vec<CollisionMember>,
}

impl CollisionGroup {
    /// Members split by their ranks over the window.
    pub fn subgroups(&self) -> Vec<Vec<ExponentVector>> {
        let mut by_ranks: BTreeMap<Option<Vec<u64>>, Vec<ExponentVector>> = BTreeMap::new();
        for m in &self.members {
            by_ranks
                .entry(m.sh_ranks.clone())
                .or_default()
                .push(m.exponents.clone());
        }
        by_ranks.into_values().collect()
    }

    /// True when lacunary members disagree on a rank, which separates their
    /// contact structures.
    pub fn split_by_sh(&self) -> bool {
        let mut seen: Option<&Vec<u64>> = None;
        for m in &self.members {
            if let (Some(r), Some(true)) = (&m.sh_ranks, m.lacunary) {
                match seen {
                    None => seen = Some(r),
                    Some(prev) if prev != r => return true,
                    Some(_) => {}
                }
            }
        }
        false
    }
}

/// Groups of distinct canonical vectors sharing the same mean Euler
/// characteristic, with `SH^+` ranks over `window` for each member.
pub fn find_mec_collisions(
    records: &[LinkRecord],
    window: (i64, i64),
) -> Result<Vec<CollisionGroup>> {
    let mut groups: BTreeMap<ExactRational, BTreeMap<ExponentVector, ()>> = BTreeMap::new();
    for r in records {
        if let Some(chi) = &r.chi_m {
            groups
                .entry(chi.clone())
                .or_default()
                .insert(r.exponents.canonical(), ());
        }
    }
    groups
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(chi_m, members)| {
            let members = members
                .into_keys()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|a| {
                    let link = make_link(a)?;
                    let (sh_ranks, lacunary) = match sh_plus_ranks(&link, window.0, window.1) {
                        Ok(g) => (
                            Some((window.0..=window.1).map(|k| g.rank(k)).collect()),
                            Some(g.lacunary),
                        ),
                        Err(Error::BudgetExceeded { .. }) => (None, None),
                        Err(e) => return Err(e),
                    };
                    Ok(CollisionMember {
                        exponents: a.clone(),
                        sh_ranks,
                        lacunary,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CollisionGroup { chi_m, members })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Fixed(u64),
    /// `base + step * k`.
    Linear {
        base: u64,
        step: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub slots: Vec<Slot>,
    pub k_lo: i64,
    pub k_hi: i64,
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a non-negative integer, got {s:?}")))
}

fn parse_slot(s: &str) -> Result<Slot> {
    let s = s.trim();
    match s.strip_suffix('k') {
        None => Ok(Slot::Fixed(parse_u64(s)?)),
        Some(lin) => {
            let (base, step) = lin
                .split_once('+')
                .ok_or_else(|| Error::Parse(format!("expected b+ck, got {s:?}")))?;
            let step = if step.trim().is_empty() {
                1
            } else {
                parse_u64(step)?
            };
            Ok(Slot::Linear {
                base: parse_u64(base)?,
                step,
            })
        }
    }
}

/// Inclusive range `a..b`, `a..=b`, or a single integer.
pub fn parse_k_range(s: &str) -> Result<(i64, i64)> {
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("expected an integer, got {x:?}")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(Error::Parse(format!("empty k range {s:?}")));
    }
    Ok((lo, hi))
}

impl SweepSpec {
    pub fn parse(pattern: &str, k_range: &str) -> Result<Self> {
        let slots: Vec<Slot> = pattern.split(',').map(parse_slot).collect::<Result<_>>()?;
        let linear: Vec<&Slot> = slots
            .iter()
            .filter(|s| matches!(s, Slot::Linear { .. }))
            .collect();
        if linear.len() != 1 {
            return Err(Error::Parse(format!(
                "expected exactly one slot of the form b+ck, found {}",
                linear.len()
            )));
        }
        if let Slot::Linear { base, step } = linear[0] {
            if *base < 2 || *step < 1 {
                return Err(Error::Parse(format!(
                    "need b >= 2 and c >= 1 in {base}+{step}k"
                )));
            }
        }
        let (k_lo, k_hi) = parse_k_range(k_range)?;
        Ok(SweepSpec { slots, k_lo, k_hi })
    }

    pub fn instantiate(&self, k: i64) -> Result<ExponentVector> {
        let entries = self
            .slots
            .iter()
            .map(|s| match *s {
                Slot::Fixed(x) => Ok(x as i128),
                Slot::Linear { base, step } => Ok(base as i128 + step as i128 * k as i128),
            })
            .map(|x: Result<i128>| {
                let x = x?;
                if x < 2 {
                    return Err(Error::InvalidInstance(format!(
                        "k = {k} gives exponent {x}"
                    )));
                }
                u64::try_from(x).map_err(|_| Error::Overflow("sweep exponent"))
            })
            .collect::<Result<Vec<u64>>>()?;
        ExponentVector::new(entries)
    }
}

pub fn family_sweep(spec: &SweepSpec, opts: RecordOptions) -> Result<Vec<(i64, LinkRecord)>> {
    (spec.k_lo..=spec.k_hi)
        .into_par_iter()
        .map(|k| Ok((k, LinkRecord::compute(&spec.instantiate(k)?, opts)?)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(Format::Csv),
            Some("jsonl") | Some("json") => Ok(Format::JsonLines),
            _ => Err(Error::Schema(format!(
                "cannot infer format of {}; use .csv or .jsonl",
                path.display()
            ))),
        }
    }
}

fn opt_text<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn csv_row(r: &LinkRecord) -> [String; 12] {
    [
        r.exponents.to_string(),
        r.dim.to_string(),
        r.degree.to_string(),
        r.mu_p.to_string(),
        r.chi_m
            .as_ref()
            .map(arith::fmt_rational)
            .unwrap_or_default(),
        r.middle_rank.to_string(),
        opt_text(&r.homotopy_sphere),
        opt_text(&r.dim5_type),
        r.se.verdict.to_string(),
        r.moduli.kuranishi_dim.to_string(),
        r.moduli.perturbation_count.to_string(),
        opt_text(&r.sh0_rank),
    ]
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(records: &[LinkRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(b';')
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in records {
        w.write_record(csv_row(r)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads CSV rows back by recomputing each record from its exponents and
/// checking every stored column against the recomputation. `sh0_rank` is
/// taken as stored.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<LinkRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b';')
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(Error::Schema(format!("unexpected CSV header {:?}", header)));
    }
    let rows: Vec<csv::StringRecord> = rdr
        .records()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_error)?;
    rows.par_iter()
        .enumerate()
        .map(|(i, row)| {
            let line = i + 2;
            let exponents: ExponentVector = row[0]
                .parse()
                .map_err(|e| Error::Schema(format!("line {line}: {e}")))?;
            let mut r = LinkRecord::compute(&exponents, RecordOptions::default())?;
            r.sh0_rank = match &row[11] {
                "" => None,
                s => Some(
                    s.parse()
                        .map_err(|_| Error::Schema(format!("line {line}: bad sh0_rank {s:?}")))?,
                ),
            };
            let expected = csv_row(&r);
            for (col, (stored, want)) in row.iter().zip(expected.iter()).enumerate() {
                if stored != want {
                    return Err(Error::Schema(format!(
                        "line {line}: column {} is {stored:?}, recomputed {want:?}",
                        CSV_COLUMNS[col]
                    )));
                }
            }
            Ok(r)
        })
        .collect()
}

pub fn write_jsonl<W: Write>(records: &[LinkRecord], mut out: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Schema(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: Read>(input: R) -> Result<Vec<LinkRecord>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Schema(format!("line {}: {e}", i + 1)))?,
        );
    }
    Ok(out)
}

pub fn export(records: &[LinkRecord], path: &Path, format: Format) -> Result<()> {
    let file = std::io::BufWriter::new(fs::File::create(path)?);
    match format {
        Format::Csv => write_csv(records, file),
        Format::JsonLines => write_jsonl(records, file),
    }
}

/// Format is taken from the extension: `.csv` or `.jsonl`.
pub fn import(path: &Path) -> Result<Vec<LinkRecord>> {
    let format = Format::from_path(path)?;
    let file = fs::File::open(path)?;
    match format {
        Format::Csv => read_csv(file),
        Format::JsonLines => read_jsonl(file),
    }
}

/// One JSON file per canonical exponent vector under a version directory.
#[derive(Clone, Debug)]
pub struct RecordCache {
    root: PathBuf,
}

impl RecordCache {
    pub const ENV_VAR: &'static str = "BRIESKORN_CACHE_DIR";

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RecordCache {
            root: dir.into().join(format!("v{VERSION}")),
        }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(Self::ENV_VAR).map(Self::new)
    }

    fn path(&self, a: &ExponentVector) -> PathBuf {
        let key: Vec<String> = a.canonical().entries().iter().map(u64::to_string).collect();
        self.root.join(format!("{}.json", key.join("-")))
    }

    pub fn get(&self, a: &ExponentVector) -> Result<Option<LinkRecord>> {
        match fs::read_to_string(self.path(a)) {
            Ok(text) => Ok(Some(
                serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?,
            )),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put(&self, r: &LinkRecord) -> Result<()> {
        fs::create_dir_all(&self.root)?;
        let path = self.path(&r.exponents);
        let tmp = path.with_extension("json.tmp");
        fs::write(
            &tmp,
            serde_json::to_string(r).map_err(|e| Error::Schema(e.to_string()))?,
        )?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// Cached record for the canonical form of `a`, computing and storing it
    /// when absent or missing a requested optional column.
    pub fn get_or_compute(&self, a: &ExponentVector, opts: RecordOptions) -> Result<LinkRecord> {
        let a = a.canonical();
        if let Some(r) = self.get(&a)? {
            let has_sig = opts.signature_budget.is_none() || a.len() != 5 || r.sig7.is_some();
            let has_sh0 = !opts.sh0 || r.mu_p == 0 || r.sh0_rank.is_some();
            if has_sig && has_sh0 {
                return Ok(r);
            }
        }
        let r = LinkRecord::compute(&a, opts)?;
        self.put(&r)?;
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_enumeration() {
        let rs = enumerate(5, 3, &[], RecordOptions::default()).unwrap();
        let got: Vec<Vec<u64>> = rs.iter().map(|r| r.exponents.entries().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![2, 2, 2, 2],
                vec![2, 2, 2, 3],
                vec![2, 2, 3, 3],
                vec![2, 3, 3, 3],
                vec![3, 3, 3, 3]
            ]
        );
    }

    #[test]
    fn filtered_enumeration() {
        let spheres = enumerate(5, 7, &[Filter::HomotopySphere], RecordOptions::default()).unwrap();
        assert!(spheres.iter().any(|r| r.exponents == ev(&[2, 3, 5, 7])));
        let se = enumerate(5, 5, &[Filter::SeExists], RecordOptions::default()).unwrap();
        assert!(se
            .iter()
            .all(|r| r.se.verdict == crate::einstein::Verdict::Exists));
        // Known to carry an SE metric, but none of the implemented criteria decide it.
        let unknown = enumerate(5, 5, &[Filter::SeUnknown], RecordOptions::default()).unwrap();
        assert!(unknown.iter().any(|r| r.exponents == ev(&[2, 2, 2, 3])));
        assert!(matches!(
            enumerate(6, 5, &[], RecordOptions::default()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn record_fields() {
        let r = LinkRecord::compute(
            &ev(&[2, 3, 4, 16]),
            RecordOptions {
                signature_budget: None,
                sh0: true,
            },
        )
        .unwrap();
        assert_eq!(r.mu_p, 14);
        assert_eq!(r.chi_m, Some(arith::ratio(25, 14)));
        assert_eq!(r.dim, 5);
        let zero = LinkRecord::compute(&ev(&[3, 3, 3]), RecordOptions::default()).unwrap();
        assert_eq!(zero.mu_p, 0);
        assert!(zero.chi_m.is_none());
        assert!(zero.homotopy_sphere.is_none());
    }

    #[test]
    fn sweep_parsing() {
        let s = SweepSpec::parse("2,3,4,4+12k", "0..3").unwrap();
        assert_eq!(s.k_hi, 3);
        assert_eq!(s.instantiate(2).unwrap(), ev(&[2, 3, 4, 28]));
        assert_eq!(parse_k_range("1..=4").unwrap(), (1, 4));
        assert_eq!(parse_k_range("5").unwrap(), (5, 5));
        assert!(SweepSpec::parse("2,3,4", "0..3").is_err());
        assert!(SweepSpec::parse("2,3+1k,4+12k", "0..3").is_err());
        let neg = SweepSpec::parse("2,3,5,2+1k", "-1..0").unwrap();
        assert!(matches!(
            family_sweep(&neg, RecordOptions::default()),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn sweep_m2_row() {
        let s = SweepSpec::parse("2,3,3,3+6k", "1").unwrap();
        let out = family_sweep(&s, RecordOptions::default()).unwrap();
        assert_eq!(out[0].1.chi_m, Some(arith::ratio(13, 10)));
    }

    #[test]
    fn collisions() {
        let recs: Vec<LinkRecord> = [[2, 3, 7, 22], [3, 3, 4, 7], [2, 3, 7, 22]]
            .iter()
            .map(|v| LinkRecord::compute(&ev(v), RecordOptions::default()).unwrap())
            .collect();
        let groups = find_mec_collisions(&recs, (0, 0)).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members.len(), 2);
        assert!(groups[0].split_by_sh());
        assert_eq!(groups[0].subgroups().len(), 2);

        let dup = find_mec_collisions(&[recs[0].clone(), recs[0].clone()], (0, 0)).unwrap();
        assert!(dup.is_empty());
    }

    #[test]
    fn filter_parsing() {
        assert_eq!("rhs".parse::<Filter>().unwrap(), Filter::Rhs);
        assert_eq!(
            "contains:2,3,5".parse::<Filter>().unwrap(),
            Filter::Contains(vec![2, 3, 5])
        );
        assert!("nonsense".parse::<Filter>().is_err());
    }

    #[test]
    fn empty_csv_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            format!("{}\n", CSV_COLUMNS.join(";"))
        );
        assert!(read_csv(&buf[..]).unwrap().is_empty());
    }

    #[test]
    fn tampered_csv_is_rejected() {
        let r = LinkRecord::compute(&ev(&[2, 3, 5, 7]), RecordOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace(";S5;", ";S2xS3;");
        assert!(matches!(read_csv(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RecordCache::new(dir.path());
        let a = ev(&[3, 2, 5, 7]);
        assert!(cache.get(&a).unwrap().is_none());
        let r = cache.get_or_compute(&a, RecordOptions::default()).unwrap();
        assert_eq!(r.exponents, ev(&[2, 3, 5, 7]));
        assert_eq!(cache.get(&a).unwrap(), Some(r.clone()));
        let with_sh0 = cache
            .get_or_compute(
                &a,
                RecordOptions {
                    signature_budget: None,
                    sh0: true,
                },
            )
            .unwrap();
        assert!(with_sh0.sh0_rank.is_some());
    }
}

use std::fmt::Write;

use brieskorn::arith::{approx, fmt_rational};
use brieskorn::einstein::SEReport;
use brieskorn::invariants::GradedRanks;
use brieskorn::tables::{CollisionGroup, LinkRecord};
use brieskorn::ExactRational;

pub fn fraction(r: &ExactRational, with_approx: bool) -> String {
    if with_approx {
        format!("{} (~{})", fmt_rational(r), approx(r))
    } else {
        fmt_rational(r)
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref()
        .map(ToString::to_string)
        .unwrap_or_else(|| "-".into())
}

fn list(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn se_lines(se: &SEReport) -> String {
    format!(
        "se_verdict: {}\n  positivity: {}\n  sufficient1: {}\n  sufficient2: {}\n  coprime_iff: {:?}\n  lichnerowicz_obstructed: {}\n",
        se.verdict, se.positivity, se.sufficient1, se.sufficient2, se.coprime_iff, se.lichnerowicz_obstructed
    )
}

pub fn record(r: &LinkRecord, with_approx: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "exponents: {}", r.exponents);
    let _ = writeln!(s, "dim: {}", r.dim);
    let _ = writeln!(s, "degree: {}", r.degree);
    let _ = writeln!(s, "weights: {}", list(&r.weights));
    let _ = writeln!(s, "recip_sum: {}", fraction(&r.recip_sum, with_approx));
    let _ = writeln!(s, "mu_P: {}", r.mu_p);
    let _ = writeln!(
        s,
        "chi_m: {}",
        r.chi_m
            .as_ref()
            .map(|c| fraction(c, with_approx))
            .unwrap_or_else(|| "undefined (mu_P = 0)".into())
    );
    let _ = writeln!(s, "middle_rank: {}", r.middle_rank);
    let _ = writeln!(s, "homotopy_sphere: {}", opt(&r.homotopy_sphere));
    let _ = writeln!(s, "rhs: {}", opt(&r.rhs));
    if let Some(t) = &r.dim5_type {
        let _ = writeln!(s, "dim5_type: {t}");
    }
    if let Some(sig) = &r.sig7 {
        let _ = writeln!(s, "sig7: {}", sig.sigma);
        if let Some(c) = sig.exotic_class {
            let _ = writeln!(s, "exotic_class: {c} (mod 28)");
        }
    }
    s.push_str(&se_lines(&r.se));
    let m = &r.moduli;
    let _ = writeln!(
        s,
        "kuranishi_dim: {} (h0(d) = {}, sum h0(w_i) = {}{})",
        m.kuranishi_dim,
        m.h0_degree_d,
        m.h0_weights_sum,
        if m.applicable {
            ""
        } else {
            ", more than one exponent 2"
        }
    );
    let _ = writeln!(s, "perturbation_count: {}", m.perturbation_count);
    if let Some(sh0) = r.sh0_rank {
        let _ = writeln!(s, "sh0_rank: {sh0}");
    }
    s
}

pub const TABLE_HEADER: &str =
    "exponents\tdim\tmu_P\tchi_m\tmiddle_rank\ttype\tse_verdict\tkuranishi_dim\tperturbation_count";

/// One tab-separated line per record.
pub fn table_row(r: &LinkRecord, with_approx: bool) -> String {
    let kind = match (&r.dim5_type, r.homotopy_sphere, r.rhs) {
        (Some(t), _, _) => t.to_string(),
        (None, Some(true), _) => "homotopy sphere".into(),
        (None, _, Some(true)) => "rational homology sphere".into(),
        _ => "-".into(),
    };
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.exponents,
        r.dim,
        r.mu_p,
        r.chi_m
            .as_ref()
            .map(|c| fraction(c, with_approx))
            .unwrap_or_else(|| "-".into()),
        r.middle_rank,
        kind,
        r.se.verdict,
        r.moduli.kuranishi_dim,
        r.moduli.perturbation_count
    )
}

pub fn ranks(g: &GradedRanks) -> String {
    let suffix = if g.lacunary {
        "lacunary"
    } else {
        "not lacunary, E1 upper bound"
    };
    let mut s = String::new();
    for (k, r) in &g.ranks {
        let _ = writeln!(s, "SH_{k} = {r}, {suffix}");
    }
    s
}

pub fn collision(g: &CollisionGroup, with_approx: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chi_m = {}", fraction(&g.chi_m, with_approx));
    for m in &g.members {
        let ranks = m
            .sh_ranks
            .as_ref()
            .map(|r| list(r))
            .unwrap_or_else(|| "over budget".into());
        let lac = match m.lacunary {
            Some(true) => ", lacunary",
            Some(false) => ", not lacunary",
            None => "",
        };
        let _ = writeln!(s, "  {}: SH ranks {ranks}{lac}", m.exponents);
    }
    let _ = writeln!(
        s,
        "  {}",
        if g.split_by_sh() {
            "distinguished by SH ranks"
        } else {
            "not distinguished"
        }
    );
    s
}

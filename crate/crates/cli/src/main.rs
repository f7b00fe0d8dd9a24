use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use brieskorn::arith::fmt_rational;
use brieskorn::einstein::se_status;
use brieskorn::homology::{middle_betti, DEFAULT_LATTICE_BUDGET};
use brieskorn::invariants::{e1_page_with_budget, mean_euler_breakdown, DEFAULT_COLUMN_BUDGET};
use brieskorn::tables::{
    self, enumerate, family_sweep, find_mec_collisions, import, parse_k_range, write_csv,
    write_jsonl, Filter, LinkRecord, RecordCache, RecordOptions, SweepSpec,
};
use brieskorn::{make_link, Error, ExponentVector};
use clap::{Args, Parser, Subcommand};

mod render;

#[derive(Parser, Debug)]
#[command(
    name = "brieskorn",
    version,
    about = "Invariants of Brieskorn-Pham links"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,

    /// Worker threads for enumeration and sweeps.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Work budget: lattice points for signatures, E1 columns for rank windows.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    #[arg(long, global = true)]
    csv: bool,

    /// Append a 6-significant-digit decimal to fractions in text output.
    #[arg(long, global = true)]
    approx: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full record for one link.
    Analyze {
        exponents: String,
        /// Also compute the rank of SH_0.
        #[arg(long)]
        sh0: bool,
    },
    /// Mean Euler characteristic.
    Mec {
        exponents: String,
        /// Show the per-stratum terms.
        #[arg(long)]
        breakdown: bool,
    },
    /// Ranks of positive S^1-equivariant symplectic homology in a degree window.
    ShRanks {
        exponents: String,
        #[arg(allow_negative_numbers = true)]
        k_lo: i64,
        #[arg(allow_negative_numbers = true)]
        k_hi: i64,
    },
    /// Sasaki-Einstein existence criteria.
    SeCheck { exponents: String },
    /// Records along a family such as 2,3,4,4+12k.
    Sweep {
        pattern: String,
        /// Inclusive range of k, e.g. 0..5.
        #[arg(allow_hyphen_values = true)]
        k_range: String,
    },
    /// All canonical links of a dimension with bounded exponents.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max: u64,
        /// positive, se_exists, se_unknown, homotopy_sphere, rhs or contains:A,B,..
        #[arg(long = "filter", value_name = "FILTER")]
        filters: Vec<String>,
        #[arg(long)]
        sh0: bool,
        /// Compute dimension-7 signatures.
        #[arg(long)]
        sig7: bool,
    },
    /// Groups of links in a CSV or JSON-lines file sharing the mean Euler characteristic.
    Collide {
        input: PathBuf,
        /// Degree window for the SH ranks used to split groups.
        #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
        window: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::InternalInconsistency(_) => 4,
        _ => 2,
    }
}

fn parse_exponents(s: &str) -> Result<ExponentVector, Error> {
    s.parse()
}

struct Ctx {
    out: OutputArgs,
    budget: Option<u64>,
}

impl Ctx {
    fn format(&self) -> Format {
        self.out.format()
    }

    fn record_options(&self, sh0: bool, sig7: bool) -> RecordOptions {
        RecordOptions {
            signature_budget: sig7.then(|| {
                self.budget
                    .map(u128::from)
                    .unwrap_or(DEFAULT_LATTICE_BUDGET)
            }),
            sh0,
        }
    }

    fn records(&self, rs: &[LinkRecord]) -> Result<String, Error> {
        Ok(match self.format() {
            Format::Json => {
                let mut buf = Vec::new();
                write_jsonl(rs, &mut buf)?;
                String::from_utf8(buf).expect("JSON is UTF-8")
            }
            Format::Csv => {
                let mut buf = Vec::new();
                write_csv(rs, &mut buf)?;
                String::from_utf8(buf).expect("CSV is UTF-8")
            }
            Format::Text => {
                let mut s = format!("{}\n", render::TABLE_HEADER);
                for r in rs {
                    s.push_str(&render::table_row(r, self.out.approx));
                    s.push('\n');
                }
                s
            }
        })
    }
}

fn json(v: &impl serde::Serialize) -> String {
    format!("{}\n", serde_json::to_string(v).expect("serializable"))
}

/// What is defined for a vector too short to be a link.
fn partial_analysis(ctx: &Ctx, a: &ExponentVector) -> Result<String, Error> {
    let degree = a.degree()?;
    let weights: Vec<u64> = a.entries().iter().map(|&x| degree / x).collect();
    let recip = a.recip_sum();
    let middle = middle_betti(a)?;
    Ok(match ctx.format() {
        Format::Json => json(&serde_json::json!({
            "exponents": a.entries(),
            "dim": a.link_dim(),
            "degree": degree,
            "weights": weights,
            "recip_sum": fmt_rational(&recip),
            "middle_rank": middle,
        })),
        Format::Csv => format!(
            "exponents;dim;degree;recip_sum;middle_rank\n{a};{};{degree};{};{middle}\n",
            a.link_dim(),
            fmt_rational(&recip)
        ),
        Format::Text => format!(
            "exponents: {a}\ndim: {}\ndegree: {degree}\nweights: {}\nrecip_sum: {}\nmiddle_rank: {middle}\n",
            a.link_dim(),
            weights.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            render::fraction(&recip, ctx.out.approx)
        ),
    })
}

/// Output written so far, plus the error that stopped the command.
type Outcome = Result<String, (String, Error)>;

fn quiet<T>(r: Result<T, Error>) -> Result<T, (String, Error)> {
    r.map_err(|e| (String::new(), e))
}

fn run(ctx: &Ctx, cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze { exponents, sh0 } => {
            let a = quiet(parse_exponents(&exponents))?.canonical();
            if a.len() < 3 {
                let printed = quiet(partial_analysis(ctx, &a))?;
                return Err((
                    printed,
                    Error::DimensionTooLow {
                        what: "link classifiers",
                        dim: a.link_dim(),
                        min: 3,
                    },
                ));
            }
            let opts = ctx.record_options(sh0, a.len() == 5);
            let computed = match RecordCache::from_env() {
                Some(cache) => cache.get_or_compute(&a, opts),
                None => LinkRecord::compute(&a, opts),
            };
            let r = quiet(computed)?;
            quiet(match ctx.format() {
                Format::Text => Ok(render::record(&r, ctx.out.approx)),
                _ => ctx.records(std::slice::from_ref(&r)),
            })
        }
        Command::Mec {
            exponents,
            breakdown,
        } => quiet((|| {
            let link = make_link(&parse_exponents(&exponents)?)?;
            let b = mean_euler_breakdown(&link)?;
            Ok(match ctx.format() {
                Format::Json => {
                    let terms: Vec<_> = b
                        .terms
                        .iter()
                        .map(|t| {
                            serde_json::json!({
                                "sub_link": t.stratum.sub_link.entries(),
                                "period": t.stratum.min_period,
                                "chi_s1": t.chi_s1,
                                "phi": t.phi,
                                "sign": t.index.sign(),
                                "maslov": t.index.maslov,
                            })
                        })
                        .collect();
                    let mut v = serde_json::json!({
                        "exponents": link.entries(),
                        "mu_P": b.mu_p,
                        "chi_m": fmt_rational(&b.value),
                    });
                    if breakdown {
                        v["terms"] = serde_json::Value::Array(terms);
                    }
                    json(&v)
                }
                Format::Csv => {
                    let mut s = String::from("exponents;mu_P;chi_m\n");
                    s.push_str(&format!(
                        "{};{};{}\n",
                        link.exponents,
                        b.mu_p,
                        fmt_rational(&b.value)
                    ));
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    if breakdown {
                        s.push_str("sub_link\tperiod\tchi_s1\tphi\tsign\n");
                        for t in &b.terms {
                            s.push_str(&format!(
                                "{}\t{}\t{}\t{}\t{:+}\n",
                                t.stratum.sub_link,
                                t.stratum.min_period,
                                t.chi_s1,
                                t.phi,
                                t.index.sign()
                            ));
                        }
                        s.push_str(&format!("mu_P = {}, numerator = {}\n", b.mu_p, b.numerator));
                    }
                    s.push_str(&render::fraction(&b.value, ctx.out.approx));
                    s.push('\n');
                    s
                }
            })
        })()),
        Command::ShRanks {
            exponents,
            k_lo,
            k_hi,
        } => quiet((|| {
            if k_lo > k_hi {
                return Err(Error::Parse(format!("empty degree window {k_lo}..{k_hi}")));
            }
            let link = make_link(&parse_exponents(&exponents)?)?;
            let budget = ctx.budget.unwrap_or(DEFAULT_COLUMN_BUDGET);
            let g = e1_page_with_budget(&link, k_lo, k_hi, budget)?.ranks;
            Ok(match ctx.format() {
                Format::Json => json(&g),
                Format::Csv => {
                    let mut s = String::from("k;rank;lacunary\n");
                    for (k, r) in &g.ranks {
                        s.push_str(&format!("{k};{r};{}\n", g.lacunary));
                    }
                    s
                }
                Format::Text => render::ranks(&g),
            })
        })()),
        Command::SeCheck { exponents } => quiet((|| {
            let link = make_link(&parse_exponents(&exponents)?)?;
            let se = se_status(&link)?;
            Ok(match ctx.format() {
                Format::Json => json(&se),
                Format::Csv => format!(
                    "exponents;positivity;sufficient1;sufficient2;coprime_iff;lichnerowicz_obstructed;verdict\n{};{};{};{};{:?};{};{}\n",
                    link.exponents,
                    se.positivity,
                    se.sufficient1,
                    se.sufficient2,
                    se.coprime_iff,
                    se.lichnerowicz_obstructed,
                    se.verdict
                ),
                Format::Text => render::se_lines(&se),
            })
        })()),
        Command::Sweep { pattern, k_range } => quiet((|| {
            let spec = SweepSpec::parse(&pattern, &k_range)?;
            let rows = family_sweep(&spec, ctx.record_options(false, false))?;
            if ctx.format() == Format::Text {
                let mut s = format!("k\t{}\n", render::TABLE_HEADER);
                for (k, r) in &rows {
                    s.push_str(&format!("{k}\t{}\n", render::table_row(r, ctx.out.approx)));
                }
                return Ok(s);
            }
            let records: Vec<LinkRecord> = rows.into_iter().map(|(_, r)| r).collect();
            ctx.records(&records)
        })()),
        Command::Enumerate {
            dim,
            max,
            filters,
            sh0,
            sig7,
        } => quiet((|| {
            let filters: Vec<Filter> = filters
                .iter()
                .map(|f| f.parse())
                .collect::<Result<_, _>>()?;
            let rs = enumerate(dim, max, &filters, ctx.record_options(sh0, sig7))?;
            ctx.records(&rs)
        })()),
        Command::Collide { input, window } => quiet((|| {
            let window = parse_k_range(&window)?;
            let records = import(&input)?;
            let groups = find_mec_collisions(&records, window)?;
            Ok(match ctx.format() {
                Format::Json => groups
                    .iter()
                    .map(|g| {
                        let mut v = serde_json::to_value(g).expect("serializable");
                        v["split_by_sh"] = g.split_by_sh().into();
                        json(&v)
                    })
                    .collect(),
                Format::Csv => {
                    let mut s = String::from("chi_m;exponents;sh_ranks;lacunary;split_by_sh\n");
                    for g in &groups {
                        for m in &g.members {
                            s.push_str(&format!(
                                "{};{};{};{};{}\n",
                                fmt_rational(&g.chi_m),
                                m.exponents,
                                m.sh_ranks
                                    .as_ref()
                                    .map(|r| r
                                        .iter()
                                        .map(u64::to_string)
                                        .collect::<Vec<_>>()
                                        .join(","))
                                    .unwrap_or_default(),
                                m.lacunary.map(|b| b.to_string()).unwrap_or_default(),
                                g.split_by_sh()
                            ));
                        }
                    }
                    s
                }
                Format::Text => {
                    if groups.is_empty() {
                        "no collisions\n".to_string()
                    } else {
                        groups
                            .iter()
                            .map(|g| render::collision(g, ctx.out.approx))
                            .collect()
                    }
                }
            })
        })()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    eprintln!("brieskorn {}", tables::VERSION);
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    let ctx = Ctx {
        out: cli.out,
        budget: cli.budget,
    };
    let (printed, err) = match run(&ctx, cli.command) {
        Ok(s) => (s, None),
        Err((s, e)) => (s, Some(e)),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(printed.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::SUCCESS;
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

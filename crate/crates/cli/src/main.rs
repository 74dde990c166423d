use clap::{Args, Parser, Subcommand};
use praag::assembler::{
    amalgam_cohomology, check_amalgam_hypotheses, check_hnn_hypotheses, hnn_cohomology, load_fixture,
    mayer_vietoris_dims, recognize_amalgam_properness, recognize_hnn_properness, AssemblyError, Fixture,
    FixtureError,
};
use praag::gocha::{ggs_search, GgsBounds, GgsError, GgsOutcome};
use praag::graph::{parse_pgraph_with, PGraph, DEFAULT_P, DEFAULT_PRECISION};
use praag::lie::{classify_triangle, is_metabelian, lazard_verify, LieError, TriangleLabels};
use praag::presentation::praag_presentation;
use praag::quadalg::{hilbert_dims_with_limit, DEFAULT_MAX_CANDIDATES};
use praag::report::{analyze, AnalyzeOptions};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "praag", version, about = "Cohomology, mildness and Lie lattice checks for p-RAAGs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PrimeArgs {
    /// Prime; overrides the file's `p` line.
    #[arg(long)]
    p: Option<u64>,
    /// Label precision k; overrides the file's `precision` line.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args)]
struct GgsArgs {
    #[arg(long = "max-weight", default_value_t = 12)]
    max_weight: u64,
    #[arg(long, default_value_t = 1000)]
    grid: u64,
}

impl GgsArgs {
    fn bounds(&self) -> GgsBounds {
        GgsBounds {
            max_weight: self.max_weight,
            grid: self.grid,
            ..GgsBounds::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full p-graph pipeline.
    Analyze {
        file: String,
        #[command(flatten)]
        prime: PrimeArgs,
        /// Mildness depth.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        ggs: GgsArgs,
    },
    /// Classify the triangle lattice with labels a1,a2,b2,b3,g1,g3.
    ClassifyTriangle {
        #[arg(long, default_value_t = DEFAULT_P)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        labels: Vec<i64>,
    },
    /// Check the hypotheses of an amalgam fixture and assemble its cohomology.
    Amalgam {
        file: String,
        #[arg(long)]
        assume_proper: bool,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Check the hypotheses of an HNN fixture and assemble its cohomology.
    Hnn {
        file: String,
        #[arg(long)]
        assume_proper: bool,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Search for a generalized Golod-Shafarevich certificate.
    Ggs {
        file: String,
        #[command(flatten)]
        prime: PrimeArgs,
        #[command(flatten)]
        ggs: GgsArgs,
    },
    /// Solve the group relation of every edge through Campbell-Hausdorff.
    LazardVerify {
        file: String,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        p: Option<u64>,
    },
}

enum Failure {
    Validation(String),
    Precision(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Precision(_) => 3,
        }
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Precision(_) => Failure::Precision(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

impl From<GgsError> for Failure {
    fn from(e: GgsError) -> Self {
        match e {
            GgsError::Precision(_) => Failure::Precision(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

impl From<AssemblyError> for Failure {
    fn from(e: AssemblyError) -> Self {
        Failure::Validation(e.to_string())
    }
}

struct Output {
    json: serde_json::Value,
    text: String,
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{path}: {e}")))
}

fn matrix_limit() -> Result<usize, Failure> {
    match std::env::var("PRAAG_MAX_MATRIX") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Validation(format!("PRAAG_MAX_MATRIX: `{v}` is not a size"))),
        Err(_) => Ok(DEFAULT_MAX_CANDIDATES),
    }
}

/// Flags beat the file's `p` / `precision` lines, which beat the defaults.
fn load_pgraph(path: &str, prime: &PrimeArgs) -> Result<PGraph, Failure> {
    let text = read(path)?;
    let blank = |key: &str, flag: bool, text: String| {
        if !flag {
            return text;
        }
        text.lines()
            .map(|l| if l.split_whitespace().next() == Some(key) { "" } else { l })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let text = blank("p", prime.p.is_some(), text);
    let text = blank("precision", prime.precision.is_some(), text);
    parse_pgraph_with(&text, prime.p.unwrap_or(DEFAULT_P), prime.precision.unwrap_or(DEFAULT_PRECISION))
        .map_err(|e| Failure::Validation(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<Fixture, Failure> {
    load_fixture(&read(path)?).map_err(|e| match e {
        FixtureError::Json(e) => Failure::Validation(format!("{path}: line {}: {e}", e.line())),
        e => Failure::Validation(format!("{path}: {e}")),
    })
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn run(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Analyze { file, prime, depth, ggs } => {
            let g = load_pgraph(&file, &prime)?;
            let opts = AnalyzeOptions {
                mild_depth: depth,
                matrix_limit: matrix_limit()?,
                ggs: ggs.bounds(),
            };
            let r = analyze(&g, &opts);
            Ok(Output {
                json: serde_json::to_value(&r).expect("report serializes"),
                text: r.to_text(),
            })
        }
        Command::ClassifyTriangle { p, precision, labels } => {
            if !praag::arith::is_prime(p) {
                return Err(Failure::Validation(format!("{p} is not prime")));
            }
            let arr: [i64; 6] = labels
                .try_into()
                .map_err(|_| Failure::Validation("--labels needs six integers".into()))?;
            let t = TriangleLabels::from_ints(p, precision, arr);
            let c = classify_triangle(&t)?;
            let metabelian = is_metabelian(&t.lattice()?);
            let params: serde_json::Map<String, serde_json::Value> =
                c.family.params().iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
            let json = json!({
                "family": c.family.name(),
                "params": params,
                "frame": c.frame,
                "metabelian": metabelian,
            });
            let text = format!(
                "family      {}\nframe       (x, y, z) = (x{}, x{}, x{})\nmetabelian  {metabelian}\n",
                c.family, c.frame.perm[0], c.frame.perm[1], c.frame.perm[2]
            );
            Ok(Output { json, text })
        }
        Command::Amalgam { file, assume_proper, depth } => {
            let Fixture::Amalgam { name, d1, d2 } = load(&file)? else {
                return Err(Failure::Validation(format!("{file}: not an amalgam fixture")));
            };
            let proper = match (recognize_amalgam_properness(&d1, &d2), assume_proper) {
                (Some(why), _) => why.to_string(),
                (None, true) => "assumed (--assume-proper)".to_string(),
                (None, false) => {
                    return Err(Failure::Validation(
                        "properness of the amalgam is not recognised; pass --assume-proper to take it as given".into(),
                    ))
                }
            };
            let hyp = check_amalgam_hypotheses(&d1, &d2)?;
            let mut text = format!("amalgam     {name}\nproper      {proper}\n");
            for (k, c) in hyp.condition_i.iter().enumerate() {
                text.push_str(&format!("(i)  G{}     {} ({})\n", k + 1, c.holds, c.detail));
            }
            for (k, c) in hyp.condition_ii.iter().enumerate() {
                text.push_str(&format!("(ii) G{}     {} ({})\n", k + 1, c.holds, c.detail));
            }
            let (dims, mv) = if hyp.i_holds() && hyp.ii_holds() {
                let alg = amalgam_cohomology(&d1, &d2)?;
                let dims = hilbert_dims_with_limit(&alg, depth, matrix_limit()?).map_err(AssemblyError::from)?;
                let mv = mayer_vietoris_dims(&d1, &d2, depth)?;
                text.push_str(&format!("dims        [{}]\n", list(&dims)));
                for m in &mv {
                    text.push_str(&format!(
                        "degree {}    {} + {} + {} = {}\n",
                        m.degree, m.v1_part, m.v2_part, m.h_part, m.total
                    ));
                }
                (Some(dims), Some(mv))
            } else {
                text.push_str("hypotheses fail; no cohomology assembled\n");
                (None, None)
            };
            let json = json!({
                "name": name,
                "proper": proper,
                "hypotheses": hyp,
                "dims": dims,
                "mayer_vietoris": mv,
            });
            Ok(Output { json, text })
        }
        Command::Hnn { file, assume_proper, depth } => {
            let Fixture::Hnn { name, data, phi } = load(&file)? else {
                return Err(Failure::Validation(format!("{file}: not an HNN fixture")));
            };
            let proper = match (recognize_hnn_properness(&data), assume_proper) {
                (Some(why), _) => why.to_string(),
                (None, true) => "assumed (--assume-proper)".to_string(),
                (None, false) => {
                    return Err(Failure::Validation(
                        "properness of the HNN extension is not recognised; pass --assume-proper to take it as given"
                            .into(),
                    ))
                }
            };
            let hyp = check_hnn_hypotheses(&data, &phi)?;
            let mut text = format!("hnn         {name}\nproper      {proper}\n");
            for (label, c) in [("(i)", &hyp.condition_i), ("(ii)", &hyp.condition_ii), ("(iii)", &hyp.condition_iii)] {
                text.push_str(&format!("{label:<12}{} ({})\n", c.holds, c.detail));
            }
            let coh = if hyp.all_hold() {
                let c = hnn_cohomology(&data, &phi, depth)?;
                text.push_str(&format!("dims        [{}]\n", list(&c.dims)));
                Some(c)
            } else {
                text.push_str("hypotheses fail; no cohomology assembled\n");
                None
            };
            let json = json!({
                "name": name,
                "proper": proper,
                "hypotheses": hyp,
                "cohomology": coh,
            });
            Ok(Output { json, text })
        }
        Command::Ggs { file, prime, ggs } => {
            let g = load_pgraph(&file, &prime)?;
            let pres = praag_presentation(&g);
            let out = ggs_search(&pres, ggs.bounds())?;
            let text = match &out {
                GgsOutcome::Certificate(c) => {
                    let w: Vec<String> = c.weights.weights().iter().map(|w| w.to_string()).collect();
                    format!(
                        "strategy    {:?}\nweights     [{}]\nT0          {}\nvalue       {}\nvalid       {}\n",
                        c.strategy,
                        w.join(", "),
                        c.t0,
                        c.value,
                        c.validate(&pres)?
                    )
                }
                GgsOutcome::NoneFound => "no certificate within bounds\n".to_string(),
            };
            Ok(Output {
                json: serde_json::to_value(&out).expect("outcome serializes"),
                text,
            })
        }
        Command::LazardVerify { file, precision, p } => {
            let g = load_pgraph(&file, &PrimeArgs { p, precision: None })?;
            let rows = lazard_verify(&g, precision)?;
            let mut text = String::new();
            let mut json_rows = Vec::new();
            for ((u, v), e) in &rows {
                text.push_str(&format!(
                    "[{u},{v}] = {u}^({}) {v}^({})   Lie: alpha = {}, beta = {}, agreement mod p^{}\n",
                    e.a, e.b, e.alpha, e.beta, e.agreement
                ));
                json_rows.push(json!({
                    "edge": [u, v],
                    "a": e.a.to_string(),
                    "b": e.b.to_string(),
                    "alpha": e.alpha.to_string(),
                    "beta": e.beta.to_string(),
                    "agreement": e.agreement,
                }));
            }
            Ok(Output {
                json: json!({ "p": g.p(), "precision": precision, "edges": json_rows }),
                text,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("value serializes") + "\n"
            } else {
                out.text
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (Failure::Validation(m) | Failure::Precision(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}

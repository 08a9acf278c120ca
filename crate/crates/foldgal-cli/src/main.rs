mod render;
mod suite;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use foldgal::adlv::{self, ResultRow, Verdict, YWindow};
use foldgal::conj;
use foldgal::construct::{self, Certificate};
use foldgal::eaw::ExtAffine;
use foldgal::gallery::{self, ChimneySpec, Gallery, Orientation};
use foldgal::linalg;
use foldgal::newton;
use foldgal::rootdata::fmt_qvec;
use foldgal::{Kind, RootDatum, Q};
use serde::{Deserialize, Serialize};

use crate::render::{ChimneyRecord, Scene};

const WORKERS_ENV: &str = "FOLDGAL_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "foldgal", version, about = "Folded alcove galleries and affine Deligne-Lusztig varieties")]
struct Cli {
    /// Key-value file with `window_radius`, `cap` and `workers`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Group {
    /// Cartan type, one of A..G.
    #[arg(value_parser = parse_kind)]
    kind: Kind,
    rank: usize,
}

#[derive(Args, Debug, Clone)]
struct GroupOpt {
    #[arg(long = "type", value_parser = parse_kind)]
    kind: Kind,
    #[arg(long)]
    rank: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Newton point, Kottwitz class and Levi of an element `t^[..]*s1s2..`.
    Newton {
        #[command(flatten)]
        group: Group,
        element: String,
    },
    /// Standard representative of the class of an element, with the three checks.
    Stdrep {
        #[command(flatten)]
        group: Group,
        element: String,
    },
    /// Members of the conjugacy class of `t^eta s_i` within an infinity-norm window.
    Conjclass {
        #[command(flatten)]
        group: Group,
        element: String,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Explicit positively folded gallery for `x0 = t^lambda w0`.
    Construct {
        #[command(flatten)]
        group: GroupOpt,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<i64>,
        #[arg(long)]
        i: usize,
        /// Rational Newton point, e.g. `0,3/2`; the first target when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu_prime: Option<Vec<String>>,
        /// Certify every lower target.
        #[arg(long, conflicts_with = "nu_prime")]
        all: bool,
    },
    /// Re-check certificate files, or run the built-in checks when none are given.
    Verify {
        certificates: Vec<PathBuf>,
        /// Also replay each certificate through the enumerator.
        #[arg(long)]
        replay: bool,
    },
    /// List the positively folded galleries of a type.
    Enumerate {
        #[command(flatten)]
        group: Group,
        #[arg(long, value_delimiter = ',')]
        type_vec: Vec<usize>,
        /// Chimney as `P:y`, e.g. `1:t^[-2,1]*s1s2` or `:w0` for the Borel.
        #[arg(long)]
        chimney: String,
        #[arg(long, default_value = "id")]
        start: String,
        #[arg(long)]
        end: Option<String>,
    },
    /// Nonemptiness verdict and dimension lower bound for `X_x(b)`.
    Nonempty {
        #[command(flatten)]
        group: Group,
        x: String,
        b: String,
        /// Restrict the window to these positioning elements.
        #[arg(long)]
        y: Vec<String>,
    },
    /// Draw a rank-2 apartment with an optional gallery and chimney.
    Render {
        #[command(flatten)]
        group: Group,
        #[arg(long)]
        out: PathBuf,
        /// Gallery as `start | types | mask`.
        #[arg(long)]
        gallery: Option<String>,
        #[arg(long)]
        chimney: Option<String>,
        #[arg(long)]
        signs: bool,
        #[arg(long, default_value_t = 4)]
        radius: u32,
        /// Read the whole scene from a JSON file instead.
        #[arg(long, conflicts_with_all = ["gallery", "chimney", "signs"])]
        scene: Option<PathBuf>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    window_radius: Option<i64>,
    cap: Option<usize>,
    workers: Option<usize>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn cap(&self) -> usize {
        self.cap.unwrap_or(adlv::DEFAULT_CAP)
    }
}

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    s.parse::<Kind>().map_err(|e| e.to_string())
}

fn datum(kind: Kind, rank: usize) -> Result<RootDatum> {
    Ok(RootDatum::new(kind, rank)?)
}

fn parse_chimney(rd: &RootDatum, s: &str) -> Result<ChimneySpec> {
    let (p, y) = s.split_once(':').ok_or_else(|| anyhow!(usage("chimney must look like `P:y`, e.g. `1:w0`")))?;
    let parabolic = p
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let i: usize = t.trim().parse().map_err(|_| anyhow!(usage(&format!("bad parabolic index `{t}`"))))?;
            if i == 0 || i > rd.rank {
                bail!(usage(&format!("parabolic index {i} out of range")));
            }
            Ok(i)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChimneySpec::new(parabolic, ExtAffine::parse(rd, y)?))
}

fn usage(msg: &str) -> foldgal::Error {
    foldgal::Error::Invalid(msg.to_string())
}

fn emit<T: Serialize>(format: Format, rows: &[T], text: impl Fn(&T) -> String) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Text => {
            for r in rows {
                writeln!(out, "{}", text(r))?;
            }
        }
        Format::Json => {
            if rows.len() == 1 {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows[0])?)?;
            } else {
                writeln!(out, "{}", serde_json::to_string_pretty(rows)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct NewtonRow {
    element: String,
    nu: String,
    kappa: String,
    parabolic: String,
    integral: bool,
}

#[derive(Serialize)]
struct StdRepRow {
    element: String,
    nu: String,
    standard_rep: String,
    kottwitz: bool,
    levi_length_zero: bool,
    levi_newton: bool,
}

#[derive(Serialize)]
struct EnumRow {
    mask: String,
    end: String,
    p: usize,
    f: usize,
    dim: usize,
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = Config::load(cli.config.as_deref())?;
    let workers = std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()).or(config.workers);
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Newton { group, element } => {
            let rd = datum(group.kind, group.rank)?;
            let x = ExtAffine::parse(&rd, &element)?;
            let inv = newton::classify(&rd, &x);
            let row = NewtonRow {
                element: x.to_text(&rd),
                nu: fmt_qvec(&inv.nu),
                kappa: inv.kappa.to_string(),
                parabolic: inv.parabolic.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                integral: inv.integral,
            };
            emit(fmt, &[row], |r| {
                format!(
                    "nu = {}\nkappa = {}\nparabolic = {{{}}}\nintegral = {}",
                    r.nu, r.kappa, r.parabolic, r.integral
                )
            })?;
        }
        Cmd::Stdrep { group, element } => {
            let rd = datum(group.kind, group.rank)?;
            let x = ExtAffine::parse(&rd, &element)?;
            let inv = newton::classify(&rd, &x);
            let b = newton::standard_rep(&rd, &inv)?;
            let check = newton::check_standard_rep_detail(&rd, &b, &inv);
            let row = StdRepRow {
                element: x.to_text(&rd),
                nu: fmt_qvec(&inv.nu),
                standard_rep: b.to_text(&rd),
                kottwitz: check.kottwitz,
                levi_length_zero: check.levi_length_zero,
                levi_newton: check.levi_newton,
            };
            emit(fmt, &[row], |r| format!("b_nu = {}  (nu = {})", r.standard_rep, r.nu))?;
            if !check.holds() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Conjclass { group, element, window } => {
            let rd = datum(group.kind, group.rank)?;
            let b = ExtAffine::parse(&rd, &element)?;
            let radius = window.or(config.window_radius).unwrap_or(3);
            let w = conj::conjugacy_class_window(&rd, &b, radius)?;
            let rows: Vec<String> = w.members.iter().map(|z| z.to_text(&rd)).collect();
            emit(fmt, &rows, |r| r.clone())?;
            if !w.unverified.is_empty() {
                eprintln!("{} predicted points have no explicit conjugator", w.unverified.len());
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Construct { group, lambda, i, nu_prime, all } => {
            let rd = datum(group.kind, group.rank)?;
            if lambda.len() != rd.rank {
                bail!(usage(&format!("lambda needs {} entries", rd.rank)));
            }
            let certs: Vec<Certificate> = if all {
                construct::lower_targets(&rd, &lambda, i)?
                    .iter()
                    .map(|nu| construct::certify(&rd, &lambda, i, Some(nu)))
                    .collect::<foldgal::Result<_>>()?
            } else {
                let nu = match nu_prime {
                    Some(v) => Some(
                        v.iter()
                            .map(|s| linalg::parse_q(s).ok_or_else(|| foldgal::Error::Parse(format!("bad rational `{s}`"))))
                            .collect::<foldgal::Result<Vec<Q>>>()?,
                    ),
                    None => None,
                };
                vec![construct::certify(&rd, &lambda, i, nu.as_deref())?]
            };
            let fmt = if fmt == Format::Text { Format::Json } else { fmt };
            if fmt == Format::Csv {
                bail!(usage("certificates are emitted as JSON"));
            }
            emit(fmt, &certs, |_| String::new())?;
        }
        Cmd::Verify { certificates, replay } => {
            if certificates.is_empty() {
                let ok = suite::run(config.cap());
                return Ok(ExitCode::from(if ok { 0 } else { 1 }));
            }
            let mut ok = true;
            for path in &certificates {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let certs: Vec<Certificate> = match serde_json::from_str::<Vec<Certificate>>(&text) {
                    Ok(v) => v,
                    Err(_) => vec![serde_json::from_str(&text).context("not a certificate")?],
                };
                for c in certs {
                    let (kind, rank) = split_name(&c.root_datum)?;
                    let rd = datum(kind, rank)?;
                    let check = adlv::verify_certificate(&rd, &c, replay.then(|| config.cap()))?;
                    let verdict = if check.holds() { "PASS" } else { "FAIL" };
                    println!("{verdict} {} x0={} nu'={}", path.display(), c.x0, c.nu_prime.join(","));
                    ok &= check.holds();
                }
            }
            return Ok(ExitCode::from(if ok { 0 } else { 1 }));
        }
        Cmd::Enumerate { group, type_vec, chimney, start, end } => {
            let rd = datum(group.kind, group.rank)?;
            if let Some(bad) = type_vec.iter().find(|&&t| t > rd.rank) {
                bail!(usage(&format!("type {bad} out of range 0..={}", rd.rank)));
            }
            let spec = parse_chimney(&rd, &chimney)?;
            let o = Orientation::new(&rd, spec);
            let start = ExtAffine::parse(&rd, &start)?;
            let end = end.map(|e| ExtAffine::parse(&rd, &e)).transpose()?;
            let found = adlv::enumerate_folded(&rd, &type_vec, &start, &o, end.as_ref(), config.cap())?;
            let rows: Vec<EnumRow> = found
                .iter()
                .map(|g| {
                    let st = gallery::fold_stats(&rd, g, &o);
                    EnumRow { mask: g.mask_string(), end: g.end(&rd).to_text(&rd), p: st.p, f: st.f, dim: st.dim }
                })
                .collect();
            emit(fmt, &rows, |r| format!("{}  end={}  p={} f={} dim={}", r.mask, r.end, r.p, r.f, r.dim))?;
        }
        Cmd::Nonempty { group, x, b, y } => {
            let rd = datum(group.kind, group.rank)?;
            let x = ExtAffine::parse(&rd, &x)?;
            let b = ExtAffine::parse(&rd, &b)?;
            let window = if y.is_empty() {
                match config.window_radius {
                    Some(r) => YWindow::boxed(&rd, r),
                    None => YWindow::default_for(&rd, &x),
                }
            } else {
                YWindow { elements: y.iter().map(|s| ExtAffine::parse(&rd, s)).collect::<foldgal::Result<_>>()? }
            };
            let verdict = adlv::nonempty(&rd, &x, &b, &window, config.cap())?;
            let row = ResultRow::new(&rd, &x, &b, &verdict);
            let bound = match verdict {
                Verdict::Nonempty(_) => adlv::dimension_lb(&rd, &x, &b, &window, config.cap())?,
                _ => None,
            };
            emit(fmt, &[row], |r| {
                let mut s = r.verdict.clone();
                if let (Some(y), Some(m)) = (&r.y, &r.witness_mask) {
                    s.push_str(&format!("  y={y}  mask={m}"));
                }
                if let Some(d) = &bound {
                    s.push_str(&format!("\ndim >= {} (best gallery dim {}, offset {})", d.lower_bound, d.best_dim, d.offset));
                }
                s
            })?;
            if !matches!(verdict, Verdict::Nonempty(_)) {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Render { group, out, gallery, chimney, signs, radius, scene } => {
            let scene = match scene {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text).context("not a scene record")?
                }
                None => {
                    let rd = datum(group.kind, group.rank)?;
                    if let Some(g) = &gallery {
                        Gallery::parse(&rd, g)?;
                    }
                    let chimney = chimney
                        .map(|c| parse_chimney(&rd, &c).map(|s| ChimneyRecord { parabolic: s.parabolic, y: s.y.to_text(&rd) }))
                        .transpose()?;
                    Scene { kind: group.kind, rank: group.rank, radius, gallery, chimney, signs }
                }
            };
            let svg = render::render_svg(&scene)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Splits names such as `A2` or `G2` into type and rank.
fn split_name(name: &str) -> Result<(Kind, usize)> {
    let (k, r) = name.split_at(1.min(name.len()));
    let kind = k.parse::<Kind>()?;
    let rank = r.parse().map_err(|_| usage(&format!("bad root datum name `{name}`")))?;
    Ok((kind, rank))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            match e.downcast_ref::<foldgal::Error>() {
                Some(foldgal::Error::Internal(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

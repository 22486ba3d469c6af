//! Command-line front end: read a spec, build a factorization, write a
//! certificate; re-check or plot certificates later.
//!
//! Exit codes: 0 success, 2 invalid input, 3 construction failure, 4 failed
//! verification, 1 I/O failure while writing.

pub mod cert;
pub mod error;
pub mod plot;
pub mod spec;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use homeocomm::{
    commutator_factorization, power_word_decomposition, verify_dynamics, verify_identity, Error as CoreError,
    FactorizationCertificate, Settings,
};

pub use cert::CertificateDocument;
pub use error::CliError;
pub use spec::{Fiber, MapTree, Options, SpecDocument};

/// Version tag written into every spec and certificate.
pub const SCHEMA: &str = "1";

/// Default tolerance of `powers`: roots are iterated conjugators of
/// conjugators, which costs a few digits over the commutator.
pub const POWER_TOLERANCE: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "homeocomm", version, about = "Commutator and power-word certificates for homeomorphisms of the line and the cylinder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a map as a single commutator.
    Factor {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Write a map as a product of powers.
    Powers {
        spec: PathBuf,
        /// Comma separated nonzero exponents, at least two.
        #[arg(long, allow_hyphen_values = true)]
        exponents: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Rebuild the factors of a certificate and re-check it.
    Verify { certificate: PathBuf },
    /// Draw a certificate as SVG.
    Plot {
        certificate: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Samples per curve.
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
    },
}

/// Overrides for the spec's options, which override the fiber defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct Knobs {
    #[arg(long)]
    pub tol: Option<f64>,
    /// Level window as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Grid as `angles,levels`, or just `levels`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub horizon: Option<i64>,
    /// Angle samples per curve.
    #[arg(long)]
    pub resolution: Option<usize>,
}

/// Runs a command and returns its exit code, printing a summary to stdout
/// and errors to stderr.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Factor { spec, output, knobs } => {
            let doc = read_spec(&spec)?;
            save(factor(&doc, &knobs)?, &output)
        }
        Command::Powers {
            spec,
            exponents,
            output,
            knobs,
        } => {
            let doc = read_spec(&spec)?;
            let exponents = exponents.map(|text| parse_list::<i64>(&text, "exponents")).transpose()?;
            save(powers(&doc, exponents, &knobs)?, &output)
        }
        Command::Verify { certificate } => verify(&certificate),
        Command::Plot {
            certificate,
            output,
            resolution,
        } => {
            if resolution < 16 {
                return Err(CliError::Spec(format!("resolution {resolution} is below 16")));
            }
            let doc = read_certificate(&certificate)?;
            let cert = doc.decode()?;
            let svg = plot::render(&doc, &cert, resolution)?;
            write(&output, &svg)?;
            println!("wrote {}", output.display());
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_spec(path: &Path) -> Result<SpecDocument, CliError> {
    SpecDocument::parse(&read(path).map_err(CliError::Spec)?)
}

fn read_certificate(path: &Path) -> Result<CertificateDocument, CliError> {
    CertificateDocument::parse(&read(path).map_err(CliError::Certificate)?)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Builds the map; orientation failures are reported as invalid input.
fn admitted(doc: &SpecDocument) -> Result<homeocomm::MapExpr, CliError> {
    let f = doc.build()?;
    if f.fiber_hint().is_some_and(|hint| hint != doc.fiber.into()) {
        return Err(CliError::Spec(format!("map does not act on the {:?} fiber", doc.fiber)));
    }
    Ok(f)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Spec(format!("cannot parse {what} {text:?}")))
}

/// Fiber defaults, then spec options, then flags.
pub fn settings_for(doc: &SpecDocument, knobs: &Knobs) -> Result<Settings, CliError> {
    let mut s = Settings::for_fiber(doc.fiber.into());
    let o = &doc.options;
    if let Some(tol) = knobs.tol.or(o.tolerance) {
        s.tolerance = tol;
    }
    let window = match &knobs.window {
        Some(text) => Some(parse_list::<f64>(text, "window")?),
        None => o.window.map(|w| w.to_vec()),
    };
    if let Some(w) = window {
        match w[..] {
            [lo, hi] if lo.is_finite() && hi.is_finite() && lo < hi => s.window = (lo, hi),
            _ => return Err(CliError::Spec(format!("window {w:?} must be two increasing numbers"))),
        }
    }
    let grid = match &knobs.grid {
        Some(text) => Some(parse_list::<usize>(text, "grid")?),
        None => o.grid.map(|g| g.to_vec()),
    };
    if let Some(g) = grid {
        s.grid = match g[..] {
            [levels] => (s.grid.0, levels),
            [angles, levels] => (angles, levels),
            _ => return Err(CliError::Spec(format!("grid {g:?}"))),
        };
        if s.grid.0 == 0 || s.grid.1 < 2 {
            return Err(CliError::Spec(format!("grid {:?} is too small", s.grid)));
        }
    }
    if let Some(h) = knobs.horizon.or(o.horizon) {
        s.suited.horizon = h;
    }
    if let Some(r) = knobs.resolution.or(o.resolution) {
        if r < 16 {
            return Err(CliError::Spec(format!("resolution {r} is below 16")));
        }
        s.suited.resolution = r;
    }
    if !(s.tolerance > 0.0) || s.suited.horizon < 1 {
        return Err(CliError::Spec("tolerance and horizon must be positive".into()));
    }
    Ok(s)
}

/// A certificate together with the exit code it earns: 0 when it passes, 4 when not.
pub struct Outcome {
    pub certificate: FactorizationCertificate,
    pub document: CertificateDocument,
    pub code: i32,
}

/// The `factor` command without the file handling.
pub fn factor(doc: &SpecDocument, knobs: &Knobs) -> Result<Outcome, CliError> {
    let settings = settings_for(doc, knobs)?;
    let f = admitted(doc)?;
    outcome(commutator_factorization(&f, &settings), doc)
}

/// The `powers` command without the file handling; `exponents` overrides the spec's.
pub fn powers(doc: &SpecDocument, exponents: Option<Vec<i64>>, knobs: &Knobs) -> Result<Outcome, CliError> {
    let mut settings = settings_for(doc, knobs)?;
    if knobs.tol.is_none() && doc.options.tolerance.is_none() {
        settings.tolerance = settings.tolerance.max(POWER_TOLERANCE);
    }
    let exponents = exponents
        .or_else(|| doc.options.exponents.clone())
        .ok_or_else(|| CliError::Spec("no exponents given".into()))?;
    if exponents.len() < 2 || exponents.contains(&0) {
        return Err(CliError::Spec(format!("exponents {exponents:?} must be at least two nonzero integers")));
    }
    let g = admitted(doc)?;
    outcome(power_word_decomposition(&g, &exponents, &settings), doc)
}

/// Failed verification still yields a certificate.
fn outcome(result: homeocomm::Result<FactorizationCertificate>, spec: &SpecDocument) -> Result<Outcome, CliError> {
    let (certificate, code) = match result {
        Ok(cert) => (cert, 0),
        Err(CoreError::ToleranceExceeded(cert)) => (*cert, 4),
        Err(e) => return Err(e.into()),
    };
    let document = CertificateDocument::encode(&certificate, spec);
    Ok(Outcome {
        certificate,
        document,
        code,
    })
}

fn save(outcome: Outcome, output: &Path) -> Result<i32, CliError> {
    write(output, &outcome.document.to_canonical())?;
    summarize(&outcome.certificate);
    println!("wrote {}", output.display());
    Ok(outcome.code)
}

fn summarize(cert: &FactorizationCertificate) {
    let r = &cert.report;
    println!(
        "{}: max error {:e} on {}x{} grid over [{}, {}], tolerance {:e}",
        if r.pass { "pass" } else { "FAIL" },
        r.max_error,
        r.grid.0,
        r.grid.1,
        r.window.0,
        r.window.1,
        r.tolerance
    );
}

/// Recomputes the product identity and the orbit evidence from the stored recipes.
fn verify(path: &Path) -> Result<i32, CliError> {
    let doc = read_certificate(path)?;
    let cert = doc.decode()?;
    let declared = doc.spec.build().map_err(|e| CliError::Certificate(e.to_string()))?;
    let s = &cert.settings;
    let grid = s.verification_grid();
    let echo = verify_identity(&declared, &cert.input, &grid, 0.0);
    if echo.max_error != 0.0 {
        return Err(CliError::Certificate("input map differs from the spec".into()));
    }
    let product = cert.product()?;
    let report = verify_identity(&cert.input, &product, &grid, s.tolerance);
    println!(
        "identity: {} (max error {:e}, tolerance {:e})",
        if report.pass { "pass" } else { "FAIL" },
        report.max_error,
        s.tolerance
    );
    let mut pass = report.pass;
    for (i, lox) in cert.evidence.loxodromic.iter().enumerate() {
        let d = verify_dynamics(lox, s.iterations, s.samples, s.window);
        println!("dynamics {i} (sink {}): {}", lox.sink, if d.pass { "pass" } else { "FAIL" });
        pass &= d.pass;
    }
    Ok(if pass { 0 } else { 4 })
}

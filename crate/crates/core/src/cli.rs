//! Command-line front end. Data goes to `out` as CSV lines without a
//! header, or to the file named by `--svg`; diagnostics go to `err`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or input errors.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{cut_and_project, inflation_points, natural_tile_lengths, Window, XRange};
use crate::render::{render_coloured_points, render_cps_diagram, render_diffraction, render_tiles, DiffractionStyle};
use crate::spectra::{
    autocorr_closed_pd, autocorr_estimates, diffraction_closed_pd, diffraction_estimate, enumerate_peaks,
    parse_rational, DyadicRational, KRange, WeightedSequence,
};
use crate::symbolic::{parse_rule, LetterId, SubstitutionRule, SymbolicSequence};
use crate::toeplitz::{colour_csv, limit_sequence, stage};
use crate::verify::{run_suite, Suite};
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "aperiodic", version, about = "Aperiodic sequences, tilings and their spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print R^k(seed).
    Iterate {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        steps: u32,
    },
    /// Print `n,letter` for a one-sided (`a`) or two-sided (`a|b`) fixed point.
    FixedPoint {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        seed: String,
        /// Power of the rule that fixes the seed [default: 1 one-sided, 2 two-sided].
        #[arg(long)]
        steps: Option<u32>,
        /// Half-open integer range `LO..HI`.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Print `n,colour` for the Toeplitz limit, or for stage k with `--steps k`.
    Toeplitz {
        #[arg(long)]
        steps: Option<u32>,
        /// Half-open integer range `LO..HI`.
        #[arg(long, allow_hyphen_values = true, default_value = "0..64")]
        range: String,
    },
    /// Substitution matrix, primitivity, PF eigenvalue, frequencies and lengths.
    Matrix {
        #[arg(long)]
        rule: String,
    },
    /// Cut-and-project Fibonacci points `m,n,a,b,label` with x = a+bτ.
    Cps {
        /// Closed range `LO..HI`; endpoints may be `p/q` or `a+b*tau`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also draw the lattice, window and projection to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Period-doubling autocorrelation `m,num,den[,estimate,abs_error]`.
    Autocorr {
        #[arg(long, default_value_t = 64)]
        m_max: u32,
        #[arg(long, default_value_t = 20)]
        log2_n: u32,
        /// Skip the windowed estimate.
        #[arg(long)]
        closed_form: bool,
    },
    /// Period-doubling diffraction `k_num,k_den,i_num,i_den[,estimate]`.
    Diffract {
        /// A single position `p/q`; otherwise peaks in `--range` are listed.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// Half-open rational range `LO..HI`.
        #[arg(long, allow_hyphen_values = true, default_value = "0..1")]
        range: String,
        #[arg(long, default_value_t = 6)]
        max_r: u32,
        #[arg(long, default_value = "0")]
        threshold: String,
        #[arg(long, default_value_t = 18)]
        log2_n: u32,
        #[arg(long)]
        closed_form: bool,
    },
    /// Write a figure as SVG.
    Render(RenderArgs),
    /// Run the self-checks and print `name,expected,actual,pass`.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(value_enum)]
    kind: Figure,
    /// Output file; SVG goes to standard output when omitted.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Toeplitz stage to draw instead of the limit.
    #[arg(long)]
    steps: Option<u32>,
    #[arg(long)]
    max_r: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Figure {
    Diffraction,
    Toeplitz,
    Fibonacci,
    Cps,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Symbolic,
    Toeplitz,
    Geometry,
    Spectra,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Symbolic => Suite::Symbolic,
            SuiteArg::Toeplitz => Suite::Toeplitz,
            SuiteArg::Geometry => Suite::Geometry,
            SuiteArg::Spectra => Suite::Spectra,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// A builtin name (`period-doubling`, `fibonacci`) or a rule file.
pub fn load_rule(name_or_path: &str) -> Result<SubstitutionRule> {
    if let Some(rule) = SubstitutionRule::builtin(name_or_path) {
        return Ok(rule);
    }
    let text = std::fs::read_to_string(name_or_path)
        .map_err(|e| Error::invalid(format!("cannot read rule '{name_or_path}': {e}")))?;
    parse_rule(&text)
}

fn execute(command: Command, out: &mut impl Write) -> Result<i32> {
    let mut text = String::new();
    let mut code = 0;
    match command {
        Command::Iterate { rule, seed, steps } => {
            let rule = load_rule(&rule)?;
            let word = rule.iterate(&rule.word(&seed)?, steps)?;
            text = rule.render(&word);
            text.push('\n');
        }
        Command::FixedPoint { rule, seed, steps, range } => {
            let rule = load_rule(&rule)?;
            let seq = fixed_point(&rule, &seed, steps)?;
            let default = if seq.is_two_sided() { "-16..16" } else { "0..32" };
            let range = int_range(range.as_deref().unwrap_or(default))?;
            let letters = seq.window(range.clone())?;
            for (n, id) in range.zip(letters) {
                let _ = writeln!(text, "{n},{}", rule.alphabet().display(id));
            }
        }
        Command::Toeplitz { steps, range } => {
            let range = int_range(&range)?;
            let seq = match steps {
                Some(k) => stage(k)?.as_sequence(),
                None => limit_sequence(),
            };
            text = colour_csv(&seq, range)?;
        }
        Command::Matrix { rule } => text = matrix_report(&load_rule(&rule)?)?,
        Command::Cps { range, format: Format::Csv, svg } => {
            let range = quad_range(&range)?;
            let window = Window::fibonacci_default();
            let fib = SubstitutionRule::fibonacci();
            text = cut_and_project(&window, &range)?.to_csv(fib.alphabet());
            if let Some(path) = svg {
                write_svg(&path, &render_cps_diagram(&window, fib.alphabet(), &range)?.to_svg())?;
            }
        }
        Command::Autocorr { m_max, log2_n, closed_form } => {
            let ms: Vec<i64> = (0..=i64::from(m_max)).collect();
            let estimates = if closed_form {
                None
            } else {
                Some(autocorr_estimates(&WeightedSequence::period_doubling(), &ms, window_size(log2_n)?)?)
            };
            for (i, &m) in ms.iter().enumerate() {
                let a = autocorr_closed_pd(m);
                let _ = write!(text, "{m},{},{}", a.numer(), a.denom());
                if let Some(est) = &estimates {
                    let e = est[i];
                    let _ = write!(text, ",{e},{}", (e - a.to_f64().unwrap_or(f64::NAN)).abs());
                }
                text.push('\n');
            }
        }
        Command::Diffract { k, range, max_r, threshold, log2_n, closed_form } => {
            let rows: Vec<(Rational, Rational)> = match k {
                Some(k) => {
                    let k = parse_rational(&k)?;
                    vec![(k, intensity_at(k)?)]
                }
                None => {
                    let (lo, hi) = split_range(&range)?;
                    let range = KRange::half_open(parse_rational(lo)?, parse_rational(hi)?);
                    enumerate_peaks(&range, max_r, parse_rational(&threshold)?)?
                        .into_iter()
                        .map(|p| (p.k.value(), p.intensity))
                        .collect()
                }
            };
            let seq = (!closed_form).then(WeightedSequence::period_doubling);
            let n = window_size(log2_n)?;
            for (k, i) in rows {
                let _ = write!(text, "{},{},{},{}", k.numer(), k.denom(), i.numer(), i.denom());
                if let Some(seq) = &seq {
                    let _ = write!(text, ",{}", diffraction_estimate(seq, k, n)?);
                }
                text.push('\n');
            }
        }
        Command::Render(args) => {
            let svg = render_figure(&args)?;
            match &args.svg {
                Some(path) => write_svg(path, &svg)?,
                None => text = svg,
            }
        }
        Command::Verify { suite } => {
            let report = run_suite(suite.into());
            text = report.to_csv();
            if !report.overall() {
                code = 1;
            }
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Resource(format!("cannot write output: {e}")))?;
    Ok(code)
}

fn fixed_point(rule: &SubstitutionRule, seed: &str, steps: Option<u32>) -> Result<SymbolicSequence> {
    let single = |s: &str| -> Result<LetterId> {
        let w = rule.word(s)?;
        match w.letters() {
            [id] => Ok(*id),
            _ => Err(Error::invalid(format!("seed '{s}' must be a single letter"))),
        }
    };
    match seed.split_once('|') {
        Some((l, r)) => SymbolicSequence::two_sided_fixed_point(rule, single(l)?, single(r)?, steps.unwrap_or(2)),
        None => {
            let rule = rule.power(steps.unwrap_or(1))?;
            SymbolicSequence::one_sided_fixed_point(&rule, single(seed)?)
        }
    }
}

fn matrix_report(rule: &SubstitutionRule) -> Result<String> {
    let a = rule.alphabet();
    let names: Vec<String> = a.letters().iter().map(|l| l.display.to_string()).collect();
    let mut text = format!("letters,{}\n", names.join(","));
    for (name, row) in names.iter().zip(rule.matrix().rows()) {
        let row: Vec<String> = row.iter().map(u64::to_string).collect();
        let _ = writeln!(text, "row,{name},{}", row.join(","));
    }
    let _ = writeln!(text, "primitive,{}", rule.is_primitive());
    if !rule.is_primitive() {
        return Ok(text);
    }
    let joined = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    let pf = rule.pf_data()?;
    let _ = writeln!(text, "eigenvalue,{}", pf.eigenvalue);
    let _ = writeln!(text, "frequencies,{}", joined(&pf.frequencies));
    let _ = writeln!(text, "lengths,{}", joined(&pf.lengths));
    if let Some(exact) = natural_tile_lengths(rule)?.exact {
        let lengths: Vec<String> = exact.lengths.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "exact_eigenvalue,{}", exact.factor);
        let _ = writeln!(text, "exact_lengths,{}", lengths.join(","));
    }
    Ok(text)
}

/// Closed-form intensity; zero away from the dyadic rationals.
fn intensity_at(k: Rational) -> Result<Rational> {
    if k.denom().count_ones() != 1 {
        return Ok(Rational::from_integer(0));
    }
    Ok(diffraction_closed_pd(DyadicRational::from_rational(k)?))
}

fn render_figure(args: &RenderArgs) -> Result<String> {
    let doc = match args.kind {
        Figure::Diffraction => {
            let mut style = DiffractionStyle::default();
            if let Some(r) = &args.range {
                let (lo, hi) = split_range(r)?;
                style.k_range = KRange::closed(parse_rational(lo)?, parse_rational(hi)?);
            }
            if let Some(m) = args.max_r {
                style.max_r = m;
            }
            let peaks = enumerate_peaks(&style.k_range, style.max_r, Rational::from_integer(0))?;
            render_diffraction(&peaks, &style)
        }
        Figure::Toeplitz => {
            let range = int_range(args.range.as_deref().unwrap_or("-16..17"))?;
            let seq = match args.steps {
                Some(k) => stage(k)?.as_sequence(),
                None => limit_sequence(),
            };
            let points: Vec<(i64, LetterId)> = range.clone().zip(seq.window(range.clone())?).collect();
            render_coloured_points(&points, seq.alphabet(), (range.start, range.end - 1))
        }
        Figure::Fibonacci => {
            let range = quad_range(args.range.as_deref().unwrap_or("-10..10"))?;
            render_tiles(&inflation_points(&range)?, SubstitutionRule::fibonacci().alphabet(), &range)
        }
        Figure::Cps => {
            let range = quad_range(args.range.as_deref().unwrap_or("0..7"))?;
            render_cps_diagram(&Window::fibonacci_default(), SubstitutionRule::fibonacci().alphabet(), &range)?
        }
    };
    Ok(doc.to_svg())
}

fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))
}

fn window_size(log2_n: u32) -> Result<u64> {
    if log2_n > 31 {
        return Err(Error::invalid("--log2-n must be at most 31"));
    }
    Ok(1 << log2_n)
}

fn split_range(s: &str) -> Result<(&str, &str)> {
    s.split_once("..")
        .ok_or_else(|| Error::invalid(format!("range '{s}' must have the form LO..HI")))
}

fn int_range(s: &str) -> Result<Range<i64>> {
    let (lo, hi) = split_range(s)?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::invalid(format!("'{t}' is not an integer")))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(Error::invalid(format!("empty range {s}")));
    }
    Ok(lo..hi)
}

fn quad_range(s: &str) -> Result<XRange> {
    let (lo, hi) = split_range(s)?;
    XRange::new(lo.trim().parse::<crate::geometry::QuadRational>()?, hi.trim().parse::<crate::geometry::QuadRational>()?)
}

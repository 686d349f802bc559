use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use qgenocchi::{parse_rational, ExactScalar};

#[derive(Debug, Parser)]
#[command(name = "qgenocchi", version)]
#[command(about = "Evaluate and audit unified q-extension Genocchi polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate S_n(x) at a single point
    Eval(EvalArgs),
    /// Tabulate S_n(x) over n = 0..=n-max and an x grid
    Table(TableArgs),
    /// Run identity audits over a committed grid
    Verify(VerifyArgs),
    /// Evaluate the Hurwitz-type interpolation function
    Zeta(ZetaArgs),
    /// Extrapolate to q = 1 and compare with the classical recurrence
    Limit(LimitArgs),
}

/// A scalar flag, kept verbatim for the params echo.
#[derive(Debug, Clone)]
pub struct Scalar {
    pub text: String,
    pub exact: BigRational,
}

impl Scalar {
    pub fn f64(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN)
    }
}

/// `re[,im]`, each part a decimal or `p/q`.
#[derive(Debug, Clone)]
pub struct ComplexArg {
    pub text: String,
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexArg {
    pub fn c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn exact(&self) -> ExactScalar {
        ExactScalar::new(self.re.clone(), self.im.clone())
    }
}

/// `start:stop:step`
#[derive(Debug, Clone, Copy)]
pub struct GridArg {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridArg {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let exact = parse_rational(s.trim()).ok_or_else(|| format!("`{s}` is not a decimal or p/q rational"))?;
    Ok(Scalar { text: s.to_string(), exact })
}

pub fn parse_complex(s: &str) -> Result<ComplexArg, String> {
    let mut parts = s.split(',');
    let re = parse_scalar(parts.next().unwrap_or(""))?.exact;
    let im = match parts.next() {
        Some(p) => parse_scalar(p)?.exact,
        None => BigRational::zero(),
    };
    if parts.next().is_some() {
        return Err(format!("`{s}`: expected re[,im]"));
    }
    Ok(ComplexArg { text: s.to_string(), re, im })
}

pub fn parse_grid(s: &str) -> Result<GridArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("`{s}`: expected start:stop:step"));
    };
    let num = |t: &str| parse_scalar(t).map(|v| v.f64());
    let g = GridArg { start: num(start)?, stop: num(stop)?, step: num(step)? };
    if !(g.step > 0.0 && g.stop >= g.start) {
        return Err(format!("`{s}`: need step > 0 and stop >= start"));
    }
    if (g.stop - g.start) / g.step > 1e6 {
        return Err(format!("`{s}`: grid too large"));
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Closed,
    Exact,
}

impl MethodArg {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodArg::Series => "series",
            MethodArg::Closed => "closed",
            MethodArg::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Expansion,
    Symmetry,
    Difference,
    Distribution,
    Specialization,
    Limit,
    Interpolation,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridId {
    Smoke,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Ozden,
    Euler,
    Genocchi,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Deformation parameter, 0 < q < 1
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub q: Scalar,
    /// beta as re[,im]; parts may be p/q
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: ComplexArg,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub a: Scalar,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub b: i32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Series truncation tolerance (absolute)
    #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: u64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub x: Scalar,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    /// Closed-form variant (closed and exact methods)
    #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub x_grid: GridArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = IdentityArg::All)]
    pub identity: IdentityArg,
    #[arg(long, value_enum, default_value_t = GridId::Smoke)]
    pub grid: GridId,
    #[arg(long, value_enum, default_value_t = ReportArg::Json)]
    pub report: ReportArg,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Argument as re[,im]; repeatable
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "s_grid")]
    pub s: Vec<ComplexArg>,
    /// Real arguments start:stop:step
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, conflicts_with = "s")]
    pub s_grid: Option<GridArg>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub x: Scalar,
    #[command(flatten)]
    pub series: SeriesArgs,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, value_enum)]
    pub target: TargetArg,
    /// Model flags are rational and apply to --target ozden only
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub beta: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub a: Option<Scalar>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub x: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Corrected)]
    pub variant: VariantArg,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_complex() {
        assert_eq!(parse_scalar("1/3").unwrap().exact, parse_rational("1/3").unwrap());
        assert_eq!(parse_scalar("-0.25").unwrap().f64(), -0.25);
        assert!(parse_scalar("abc").is_err());
        let z = parse_complex("0.5,-1/4").unwrap();
        assert_eq!(z.c64(), Complex64::new(0.5, -0.25));
        assert!(parse_complex("1").unwrap().im.is_zero());
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.5").unwrap().points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0:1:0.3").unwrap().points().len(), 4);
        assert_eq!(parse_grid("2:2:1").unwrap().points(), vec![2.0]);
        for bad in ["0:1", "0:1:0", "1:0:0.5", "0:1:-1", "a:b:c"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cli_shape_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

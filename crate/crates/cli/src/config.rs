//! Job configuration: a JSON file plus command-line overrides.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use lgcy_core::jacobi::LGPotential;
use lgcy_core::numeric::C64;
use lgcy_core::ring::scalar::parse_rational;
use lgcy_core::ring::{default_vars, parse_polynomial, Field, Gq, Monomial, Poly};

use crate::error::CliError;

/// A real number given either as JSON number or as text (`"1/10"`, `"0.25"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Text(String),
}

impl Num {
    pub fn exact(&self) -> Result<BigRational, CliError> {
        match self {
            Num::Float(x) => BigRational::from_float(*x).ok_or_else(|| CliError::input("config_invalid", format!("non-finite number {x}"))),
            Num::Text(s) => parse_number(s),
        }
    }
}

/// Integers, fractions and plain decimals, all exact.
pub fn parse_number(s: &str) -> Result<BigRational, CliError> {
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(CliError::input("config_invalid", format!("bad number '{s}'")));
        }
        let num: BigInt = digits.parse().expect("digits");
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    parse_rational(t).map_err(|e| CliError::input("config_invalid", format!("bad number '{s}': {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexNum {
    pub re: Num,
    #[serde(default)]
    pub im: Option<Num>,
}

impl ComplexNum {
    fn exact(&self) -> Result<Gq, CliError> {
        let im = match &self.im {
            Some(x) => x.exact()?,
            None => BigRational::zero(),
        };
        Ok(Gq::new(self.re.exact()?, im))
    }
}

/// One parameter point: a complex number for one-parameter families, a list
/// for several parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UPoint {
    Real(Num),
    One(ComplexNum),
    Many(Vec<ComplexNum>),
}

impl UPoint {
    pub fn exact(&self) -> Result<Vec<Gq>, CliError> {
        match self {
            UPoint::Real(x) => Ok(vec![Gq::new(x.exact()?, BigRational::zero())]),
            UPoint::One(c) => Ok(vec![c.exact()?]),
            UPoint::Many(v) => v.iter().map(|c| c.exact()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridShape {
    Circle,
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub center: [f64; 2],
    pub radius: f64,
    pub count: usize,
    pub shape: GridShape,
}

impl Default for Grid {
    fn default() -> Self {
        Self { center: [0.0, 0.0], radius: 1.0, count: 12, shape: GridShape::Circle }
    }
}

impl Grid {
    pub fn center(&self) -> C64 {
        C64::new(self.center[0], self.center[1])
    }

    /// Circle: `count` points on the circle. Square: `count x count` points
    /// inscribed in the disc.
    pub fn points(&self) -> Vec<C64> {
        match self.shape {
            GridShape::Circle => lgcy_core::periods::circle_grid(self.center(), self.radius, self.count),
            GridShape::Square => lgcy_core::ttstar::metric::square_grid(self.center(), self.radius / 2f64.sqrt(), self.count)
                .into_iter()
                .map(|p| p.0)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub exact_check: f64,
    pub series: f64,
    pub ode: f64,
    pub fd_step: f64,
    /// Period correspondence and pairing chain.
    pub verify: f64,
    pub forbidden: f64,
    pub fit: f64,
    pub wp: f64,
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact_check: 1e-12,
            series: 1e-13,
            ode: 1e-10,
            fd_step: 1e-2,
            verify: 1e-6,
            forbidden: 1e-10,
            fit: 1e-4,
            wp: 1e-4,
            drift: 1e-5,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), CliError> {
        let all = [
            ("exact_check", self.exact_check),
            ("series", self.series),
            ("ode", self.ode),
            ("fd_step", self.fd_step),
            ("verify", self.verify),
            ("forbidden", self.forbidden),
            ("fit", self.fit),
            ("wp", self.wp),
            ("drift", self.drift),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::input("config_invalid", format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobConfig {
    pub variables: Option<Vec<String>>,
    pub polynomial: String,
    pub deformation: Vec<String>,
    pub u: Vec<UPoint>,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub output: Output,
}

/// Largest `k` among identifiers `z<k>`, for configs without `variables`.
fn count_default_vars(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < b.len() {
        let starts = b[i] == b'z' && (i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_'));
        if starts {
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 {
                best = best.max(text[i + 1..j].parse::<usize>().unwrap_or(0));
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

/// Parsed and validated job.
#[derive(Debug, Clone)]
pub struct Job {
    pub config: JobConfig,
    pub names: Vec<String>,
    pub f: Poly,
    pub deformation: Vec<Monomial>,
    /// Exact parameter points; empty means the origin.
    pub u_points: Vec<Vec<Gq>>,
}

impl Job {
    pub fn from_config(config: JobConfig) -> Result<Self, CliError> {
        if config.polynomial.trim().is_empty() {
            return Err(CliError::input("config_invalid", "no polynomial given"));
        }
        if config.grid.count == 0 {
            return Err(CliError::input("config_invalid", "grid count must be at least 1"));
        }
        if !(config.grid.radius.is_finite() && config.grid.radius > 0.0) {
            return Err(CliError::input("config_invalid", "grid radius must be positive"));
        }
        config.tolerances.validate()?;
        let names = match &config.variables {
            Some(v) => v.clone(),
            None => default_vars(count_default_vars(&config.polynomial)),
        };
        if names.is_empty() {
            return Err(CliError::input("config_invalid", "no variables given and none of the form z1, z2, ... found"));
        }
        let f = parse_polynomial(&config.polynomial, &names)?;
        let mut deformation = Vec::new();
        for text in &config.deformation {
            let p = parse_polynomial(text, &names)?;
            let mut terms = p.terms();
            match (terms.next(), terms.next()) {
                (Some((m, c)), None) if *c == Gq::one() => deformation.push(m.clone()),
                _ => return Err(CliError::input("config_invalid", format!("deformation '{text}' is not a single monomial"))),
            }
        }
        let u_points = config.u.iter().map(|p| p.exact()).collect::<Result<Vec<_>, _>>()?;
        for p in &u_points {
            if p.len() != deformation.len() {
                return Err(CliError::input(
                    "config_invalid",
                    format!("parameter point has {} components, family has {}", p.len(), deformation.len()),
                ));
            }
        }
        let job = Self { config, names, f, deformation, u_points };
        // Validates weights and marginality up front.
        job.potential_at(0)?;
        Ok(job)
    }

    pub fn s(&self) -> usize {
        self.deformation.len()
    }

    /// Exact parameter point `i`, or the origin when none are configured.
    pub fn exact_u(&self, i: usize) -> Vec<Gq> {
        self.u_points.get(i).cloned().unwrap_or_else(|| vec![Gq::new(BigRational::zero(), BigRational::zero()); self.s()])
    }

    pub fn potential_at(&self, i: usize) -> Result<LGPotential, CliError> {
        Ok(LGPotential::new(self.f.clone(), self.deformation.clone(), self.exact_u(i))?)
    }

    /// Base potential at `u = 0`, used by the numeric engines.
    pub fn base_potential(&self) -> Result<LGPotential, CliError> {
        let zero = vec![Gq::new(BigRational::zero(), BigRational::zero()); self.s()];
        Ok(LGPotential::new(self.f.clone(), self.deformation.clone(), zero)?)
    }

    pub fn monomial_text(&self, m: &Monomial) -> String {
        m.format(&self.names)
    }
}

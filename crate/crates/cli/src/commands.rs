//! Subcommand implementations. Each returns a serializable report plus a CSV
//! rendering; `main` picks one according to the output format.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lgcy_core::gaussmanin::{c_matrices_with, picard_fuchs, picard_fuchs_cy, PicardFuchsODE};
use lgcy_core::jacobi::{marginal_monomials, Jacobi};
use lgcy_core::numeric::C64;
use lgcy_core::periods::table::{self, PeriodRow};
use lgcy_core::periods::series_grid;
use lgcy_core::residue::ResidueFunctional;
use lgcy_core::ring::{central_charge, Field, Gq, Poly, WeightSystem};
use lgcy_core::ttstar::metric::square_grid;
use lgcy_core::ttstar::verify::{lg_pairing, CubicSetup};
use lgcy_core::ttstar::{
    fit_intersection_lg, intersection_with_orientation, verify_pairing_chain, verify_ruan, wp_metric_cy, wp_metric_lg,
    Conventions, Residuals, TTFrame,
};
use lgcy_core::Execution;

use crate::config::Job;
use crate::error::CliError;

pub struct Rendered {
    pub json: String,
    pub csv: Result<String, CliError>,
    pub passed: bool,
}

fn render<T: Serialize>(report: &T, csv: Result<String, CliError>) -> Rendered {
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    Rendered { json, csv, passed: true }
}

fn csv_of<T: Serialize>(rows: impl IntoIterator<Item = T>, header: &[&str]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut any = false;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::numeric("io", e.to_string()))?;
        any = true;
    }
    if !any {
        w.write_record(header).map_err(|e| CliError::numeric("io", e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::numeric("io", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn gq_text(x: &Gq) -> String {
    x.to_string()
}

#[derive(Serialize)]
struct BasisEntry {
    index: usize,
    monomial: String,
    degree: u64,
    charge: u64,
    in_prime: bool,
}

fn basis_entries(job: &Job, j: &Jacobi) -> Vec<BasisEntry> {
    let b = &j.basis;
    (0..b.mu)
        .map(|a| BasisEntry {
            index: a,
            monomial: job.monomial_text(&b.monomials[a]),
            degree: b.degrees[a],
            charge: b.charges[a],
            in_prime: b.prime_indices.contains(&a),
        })
        .collect()
}

const BASIS_HEADER: [&str; 5] = ["index", "monomial", "degree", "charge", "in_prime"];

#[derive(Serialize)]
struct AnalyzeReport {
    variables: Vec<String>,
    polynomial: String,
    weights: WeightSystem,
    d: u64,
    #[serde(rename = "Q")]
    big_q: Vec<u64>,
    central_charge: String,
    mu: usize,
    mu_prime: usize,
    milnor_formula: String,
    socle: String,
    basis: Vec<BasisEntry>,
    marginals: Vec<String>,
}

pub fn analyze(job: &Job) -> Result<Rendered, CliError> {
    let p = job.potential_at(0)?;
    let j = Jacobi::new(&p)?;
    let w = &p.weights;
    let marginals = marginal_monomials(&p.f, w)?;
    let report = AnalyzeReport {
        variables: job.names.clone(),
        polynomial: p.f.format(&job.names),
        weights: w.clone(),
        d: w.d,
        big_q: w.big_q.clone(),
        central_charge: central_charge(w).to_string(),
        mu: j.basis.mu,
        mu_prime: j.basis.mu_prime,
        milnor_formula: w.milnor_formula().to_string(),
        socle: job.monomial_text(j.basis.socle()),
        basis: basis_entries(job, &j),
        marginals: marginals.iter().map(|m| job.monomial_text(m)).collect(),
    };
    let csv = csv_of(basis_entries(job, &j), &BASIS_HEADER);
    Ok(render(&report, csv))
}

#[derive(Serialize)]
struct BasisReport {
    u: Vec<Gq>,
    mu: usize,
    mu_prime: usize,
    prime_indices: Vec<usize>,
    socle_index: usize,
    hessian_socle_coeff: Gq,
    basis: Vec<BasisEntry>,
}

pub fn basis(job: &Job) -> Result<Rendered, CliError> {
    let p = job.potential_at(0)?;
    let j = Jacobi::new(&p)?;
    let report = BasisReport {
        u: p.u.clone(),
        mu: j.basis.mu,
        mu_prime: j.basis.mu_prime,
        prime_indices: j.basis.prime_indices.clone(),
        socle_index: j.basis.socle_index,
        hessian_socle_coeff: j.basis.hessian_socle_coeff().clone(),
        basis: basis_entries(job, &j),
    };
    let csv = csv_of(basis_entries(job, &j), &BASIS_HEADER);
    Ok(render(&report, csv))
}

#[derive(Serialize)]
struct PairOut {
    a: usize,
    b: usize,
    phi: String,
    psi: String,
    residue: Gq,
    #[serde(skip_serializing_if = "Option::is_none")]
    cy_pairing: Option<Gq>,
}

#[derive(Serialize)]
struct PairRow {
    a: usize,
    b: usize,
    phi: String,
    psi: String,
    residue: String,
    cy_pairing: String,
}

#[derive(Serialize)]
struct ResidueReport {
    u: Vec<Gq>,
    mu: usize,
    socle: String,
    socle_normalizer: Gq,
    hessian_residue: Gq,
    /// Pairs over the Jac' sub-basis.
    pairs: Vec<PairOut>,
    /// Nonzero entries of the full Gram matrix; only for small `mu`.
    #[serde(skip_serializing_if = "Option::is_none")]
    gram_nonzero: Option<Vec<PairOut>>,
}

const GRAM_LIMIT: usize = 64;

fn residue_pairs(job: &Job, r: &ResidueFunctional, idx: &[(usize, usize)], exec: Execution) -> Result<Vec<PairOut>, CliError> {
    let mono = &r.jacobi.basis.monomials;
    let homogeneous = r.jacobi.potential.is_homogeneous();
    let prime = &r.jacobi.basis.prime_indices;
    exec.map(idx, |&(a, b)| -> Result<PairOut, CliError> {
        let phi = Poly::monomial(mono[a].clone());
        let psi = Poly::monomial(mono[b].clone());
        let residue = r.pair_basis(a, b)?;
        let cy_pairing = if homogeneous && prime.contains(&a) && prime.contains(&b) { Some(r.cy_pairing(&phi, &psi)?) } else { None };
        Ok(PairOut { a, b, phi: job.monomial_text(&mono[a]), psi: job.monomial_text(&mono[b]), residue, cy_pairing })
    })
    .into_iter()
    .collect()
}

pub fn residue(job: &Job, exec: Execution) -> Result<Rendered, CliError> {
    let p = job.potential_at(0)?;
    let r = ResidueFunctional::new(&p)?;
    let prime = r.jacobi.basis.prime_indices.clone();
    let idx: Vec<(usize, usize)> = prime.iter().flat_map(|&a| prime.iter().map(move |&b| (a, b))).collect();
    let pairs = residue_pairs(job, &r, &idx, exec)?;
    let gram_nonzero = if r.mu() <= GRAM_LIMIT {
        let all: Vec<(usize, usize)> = (0..r.mu()).flat_map(|a| (0..r.mu()).map(move |b| (a, b))).collect();
        let mut g = residue_pairs(job, &r, &all, exec)?;
        g.retain(|x| !x.residue.is_zero());
        Some(g)
    } else {
        None
    };
    let hess = lgcy_core::jacobi::hessian(&p.deformed());
    let report = ResidueReport {
        u: p.u.clone(),
        mu: r.mu(),
        socle: job.monomial_text(r.jacobi.basis.socle()),
        socle_normalizer: r.socle_normalizer.clone(),
        hessian_residue: r.residue(&hess)?,
        pairs,
        gram_nonzero,
    };
    let rows: Vec<PairRow> = report
        .pairs
        .iter()
        .map(|x| PairRow {
            a: x.a,
            b: x.b,
            phi: x.phi.clone(),
            psi: x.psi.clone(),
            residue: gq_text(&x.residue),
            cy_pairing: x.cy_pairing.as_ref().map(gq_text).unwrap_or_default(),
        })
        .collect();
    let csv = csv_of(rows, &["a", "b", "phi", "psi", "residue", "cy_pairing"]);
    Ok(render(&report, csv))
}

#[derive(Serialize)]
struct MatrixOut {
    direction: String,
    nnz: usize,
    /// `(row, column, value)`.
    entries: Vec<(usize, usize, Gq)>,
}

#[derive(Serialize)]
struct ConnectionReport {
    u: Vec<Gq>,
    directions: Vec<String>,
    prime_indices: Vec<usize>,
    restricted_c: Vec<Vec<Vec<Gq>>>,
    commuting_pairs_checked: usize,
    commutators_zero: bool,
    charge_violations: usize,
    matrices: Vec<MatrixOut>,
}

#[derive(Serialize)]
struct ConnectionRow {
    direction: String,
    row: usize,
    col: usize,
    value: String,
}

const PAIR_SAMPLE: usize = 200;

/// All index pairs `i < j` when there are at most `PAIR_SAMPLE`, otherwise a
/// fixed-seed sample of that size.
fn commutator_pairs(s: usize) -> Vec<(usize, usize)> {
    let all = s * s.saturating_sub(1) / 2;
    if all <= PAIR_SAMPLE {
        return (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..PAIR_SAMPLE)
        .map(|_| {
            let i = rng.gen_range(0..s);
            let mut j = rng.gen_range(0..s - 1);
            if j >= i {
                j += 1;
            }
            (i.min(j), i.max(j))
        })
        .collect()
}

struct ConnectionChecks {
    pairs: usize,
    nonzero_commutators: usize,
    charge_violations: usize,
}

fn connection_checks(j: &Jacobi, c: &lgcy_core::gaussmanin::ConnectionMatrices, exec: Execution) -> ConnectionChecks {
    let pairs = commutator_pairs(c.c.len());
    let nonzero = exec.map(&pairs, |&(a, b)| !c.commutator(a, b).is_zero()).into_iter().filter(|&x| x).count();
    let d = j.potential.weights.d;
    let charge_violations = (0..c.c.len()).map(|i| c.charge_violations(i, &j.basis.charges, d)).sum();
    ConnectionChecks { pairs: pairs.len(), nonzero_commutators: nonzero, charge_violations }
}

pub fn connection(job: &Job, exec: Execution) -> Result<Rendered, CliError> {
    let p = job.potential_at(0)?;
    if p.s() == 0 {
        return Err(CliError::input("config_invalid", "connection matrices need at least one deformation monomial"));
    }
    let j = Jacobi::new(&p)?;
    let c = c_matrices_with(&j, exec)?;
    let checks = connection_checks(&j, &c, exec);
    let directions: Vec<String> = p.marginals.iter().map(|m| job.monomial_text(m)).collect();
    let matrices: Vec<MatrixOut> = c
        .c
        .iter()
        .zip(&directions)
        .map(|(m, dir)| MatrixOut {
            direction: dir.clone(),
            nnz: m.nnz(),
            entries: m.entries().map(|(r, col, v)| (r, col, v.clone())).collect(),
        })
        .collect();
    let rows: Vec<ConnectionRow> = matrices
        .iter()
        .flat_map(|m| {
            m.entries
                .iter()
                .map(|(r, col, v)| ConnectionRow { direction: m.direction.clone(), row: *r, col: *col, value: gq_text(v) })
        })
        .collect();
    let report = ConnectionReport {
        u: p.u.clone(),
        directions,
        prime_indices: c.prime_indices.clone(),
        restricted_c: c.restricted_c.clone(),
        commuting_pairs_checked: checks.pairs,
        commutators_zero: checks.nonzero_commutators == 0,
        charge_violations: checks.charge_violations,
        matrices,
    };
    let csv = csv_of(rows, &["direction", "row", "col", "value"]);
    Ok(render(&report, csv))
}

#[derive(Serialize)]
struct PfReport {
    direction: String,
    target_index: usize,
    target: String,
    lg: PicardFuchsODE,
    #[serde(skip_serializing_if = "Option::is_none")]
    cy: Option<PicardFuchsODE>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cy_proportional: Option<bool>,
}

#[derive(Serialize)]
struct PfRow {
    side: &'static str,
    k: usize,
    coefficient: String,
}

pub fn pf(job: &Job, target: usize) -> Result<Rendered, CliError> {
    let p = job.base_potential()?;
    if p.s() != 1 {
        return Err(CliError::input("unsupported", format!("Picard-Fuchs operators need a one-parameter family, got s = {}", p.s())));
    }
    let j = Jacobi::new(&p)?;
    if target >= j.basis.mu {
        return Err(CliError::input("config_invalid", format!("target index {target} out of range (mu = {})", j.basis.mu)));
    }
    let lg = picard_fuchs(&p, target)?;
    let cy = if p.is_homogeneous() { Some(picard_fuchs_cy(&p, target)?) } else { None };
    let mut rows: Vec<PfRow> = lg
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| PfRow { side: "lg", k, coefficient: c.to_string() })
        .collect();
    if let Some(cy) = &cy {
        rows.extend(cy.coefficients.iter().enumerate().map(|(k, c)| PfRow { side: "cy", k, coefficient: c.to_string() }));
    }
    let report = PfReport {
        direction: job.monomial_text(&p.marginals[0]),
        target_index: target,
        target: job.monomial_text(&j.basis.monomials[target]),
        cy_proportional: cy.as_ref().map(|c| lg.proportional_to(c)),
        lg,
        cy,
    };
    let csv = csv_of(rows, &["side", "k", "coefficient"]);
    Ok(render(&report, csv))
}

pub fn periods(job: &Job, exec: Execution) -> Result<Rendered, CliError> {
    let p = job.base_potential()?;
    let j = Jacobi::new(&p)?;
    let grid = job.config.grid.points();
    let tables = series_grid(&p, &j.basis, &grid, job.config.tolerances.series, exec)?;
    let rows: Vec<PeriodRow> = tables.iter().flat_map(table::rows).collect();
    let csv = table::to_csv(&tables).map_err(|e| CliError::numeric("io", e.to_string()));
    Ok(render(&rows, csv))
}

fn hesse_setup(job: &Job) -> Result<CubicSetup, CliError> {
    let p = job.base_potential()?;
    Ok(CubicSetup::new(&p, job.config.tolerances.series)?)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct WpRow {
    u_re: f64,
    u_im: f64,
    h00: f64,
    G_lg: f64,
    G_cy: f64,
    rel_diff: f64,
    drift_lg: f64,
    drift_cy: f64,
    fd_step: f64,
    method: &'static str,
}

pub fn wp(job: &Job, exec: Execution) -> Result<Rendered, CliError> {
    let setup = hesse_setup(job)?;
    let conv = Conventions::standard(3);
    let grid = job.config.grid.points();
    let ruan = verify_ruan(&setup, &grid, &conv, exec)?;
    let h = job.config.tolerances.fd_step;
    let lg = wp_metric_lg(&setup, &ruan.aligned_rows, &conv, &grid, (h, h / 2.0), exec)?;
    let cy = wp_metric_cy(&setup, &grid, (h, h / 2.0), exec)?;
    let i_prime = intersection_with_orientation(conv.orientation).i_lg_prime_inv;
    let m = setup.prime.len();
    let frames = exec.map(&grid, |&u| -> Result<Vec<Vec<C64>>, CliError> {
        let lgp = setup.lg_periods(u)?;
        Ok((0..m).map(|i| (0..m).map(|k| lg_pairing(&setup, &lgp, &ruan.aligned_rows, &i_prime, i, k)).collect()).collect())
    });
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for ((a, b), eta) in lg.iter().zip(&cy).zip(frames) {
        let rel = (a.g - b.g).abs() / b.g.abs();
        out.push(TTFrame {
            u: a.u,
            h00: a.norm,
            eta_prime: eta?,
            g_wp: vec![vec![a.g]],
            residuals: Residuals { ruan: Some(ruan.max_residual), wp_equality: Some(rel), ..Default::default() },
        });
        rows.push(WpRow {
            u_re: a.u.re,
            u_im: a.u.im,
            h00: a.norm,
            G_lg: a.g,
            G_cy: b.g,
            rel_diff: rel,
            drift_lg: a.drift,
            drift_cy: b.drift,
            fd_step: h,
            method: "series+elliptic",
        });
    }
    let csv = csv_of(rows, &["u_re", "u_im", "h00", "G_lg", "G_cy", "rel_diff", "drift_lg", "drift_cy", "fd_step", "method"]);
    Ok(render(&out, csv))
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: &'static str,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self { name, residual, tolerance, pass: residual.is_finite() && residual < tolerance }
    }

    /// Exact checks: `failures` counts violated instances.
    fn exact(name: &'static str, failures: usize) -> Self {
        Self { name, residual: failures as f64, tolerance: 0.0, pass: failures == 0 }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    pass: bool,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    skipped: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conventions: Option<Conventions>,
}

/// Negative-control knobs; not part of the documented interface.
#[derive(Debug, Clone, Copy, Default)]
pub struct DebugInject {
    pub lemma_scale: Option<f64>,
    pub literal_kappa: bool,
}

fn algebraic_checks(job: &Job, exec: Execution) -> Result<Vec<Check>, CliError> {
    let p = job.potential_at(0)?;
    let r = ResidueFunctional::new(&p)?;
    let b = &r.jacobi.basis;
    let mut checks = Vec::new();
    let formula = p.weights.milnor_formula();
    checks.push(Check::exact("milnor_number", (formula != BigRational::from_integer(b.mu.into())) as usize));
    let hess = lgcy_core::jacobi::hessian(&p.deformed());
    let mu = Gq::from_int(b.mu as i64);
    checks.push(Check::exact("hessian_residue", (r.residue(&hess)? != mu) as usize));
    let socle_deg = b.degrees[b.socle_index];
    let prime = b.prime_indices.clone();
    let idx: Vec<(usize, usize)> = prime.iter().flat_map(|&a| prime.iter().map(move |&c| (a, c))).collect();
    let bad = exec
        .map(&idx, |&(a, c)| -> Result<bool, CliError> {
            let v = r.pair_basis(a, c)?;
            Ok(!v.is_zero() && b.degrees[a] + b.degrees[c] != socle_deg)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&x| x)
        .count();
    checks.push(Check::exact("pairing_degree_rule", bad));
    if p.s() > 0 {
        let c = c_matrices_with(&r.jacobi, exec)?;
        let cc = connection_checks(&r.jacobi, &c, exec);
        checks.push(Check::exact("connection_commutativity", cc.nonzero_commutators));
        checks.push(Check::exact("connection_charge_rule", cc.charge_violations));
    }
    Ok(checks)
}

fn numeric_checks(job: &Job, setup: &CubicSetup, conv: &Conventions, exec: Execution) -> Result<Vec<Check>, CliError> {
    let tol = &job.config.tolerances;
    let grid = job.config.grid.points();
    let ruan = verify_ruan(setup, &grid, conv, exec)?;
    let chain = verify_pairing_chain(setup, &grid, conv, &ruan, exec)?;
    let fit = fit_intersection_lg(setup, &grid, conv, &ruan, exec)?;
    let wp_grid: Vec<C64> = square_grid(job.config.grid.center(), 0.5 / 2f64.sqrt(), 5)
        .into_iter()
        .filter(|p| p.1)
        .map(|p| p.0)
        .collect();
    let h = tol.fd_step;
    let lg = wp_metric_lg(setup, &ruan.aligned_rows, conv, &wp_grid, (h, h / 2.0), exec)?;
    let cy = wp_metric_cy(setup, &wp_grid, (h, h / 2.0), exec)?;
    let wp_rel = lg.iter().zip(&cy).map(|(a, b)| (a.g - b.g).abs() / b.g.abs()).fold(0.0, f64::max);
    let drift = lg.iter().chain(&cy).map(|s| s.drift).fold(0.0, f64::max);
    Ok(vec![
        Check::new("ruan", ruan.max_residual, tol.verify),
        Check::new("noninvariant_vanishing", ruan.noninvariant_max, tol.forbidden),
        Check::new("pairing_chain", chain.max_allowed_residual, tol.verify),
        Check::new("forbidden_pairings", chain.max_forbidden, tol.forbidden),
        Check::new("intersection_fit", fit.max_entry_error, tol.fit),
        Check::new("intersection_fit_residual", fit.residual, tol.verify),
        Check::new("intersection_fit_half_grid", fit.half_grid_change, tol.drift),
        Check::new("wp_equality", wp_rel, tol.wp),
        Check::new("wp_drift", drift, tol.drift),
    ])
}

pub fn verify(job: &Job, exec: Execution, inject: DebugInject) -> Result<Rendered, CliError> {
    let mut checks = algebraic_checks(job, exec)?;
    let mut skipped = Vec::new();
    let mut conv = Conventions::standard(3);
    if inject.literal_kappa {
        conv = Conventions::literal();
    }
    if let Some(s) = inject.lemma_scale {
        conv.lemma_scale = s;
    }
    let mut used = None;
    match hesse_setup(job) {
        Ok(setup) => {
            checks.extend(numeric_checks(job, &setup, &conv, exec)?);
            used = Some(conv);
        }
        Err(e) if e.code == "unsupported" => skipped.push("numeric suite (Hesse family only)".to_string()),
        Err(e) => return Err(e),
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport { pass, checks: checks.clone(), skipped, conventions: used };
    let csv = csv_of(checks, &["name", "residual", "tolerance", "pass"]);
    let mut out = render(&report, csv);
    out.passed = pass;
    Ok(out)
}

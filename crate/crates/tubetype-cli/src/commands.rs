//! One function per subcommand, each producing a payload, a tabular
//! projection, human summary lines, and the pass/fail tally.

use std::collections::BTreeMap;
use std::time::Instant;

use tubetype::beltrami::{
    anchor_exact_crosscheck, gauss_map_eigen_check, mean_normal_check, position_harmonic_check,
    position_identity_check, tube_coordinate_crosscheck, BeltramiError, MetricChoice,
};
use tubetype::chentype::{classify, ChenTypeError, ClassifyConfig, IterateMatrix, Verdict};
use tubetype::geometry::{anchor_form_regression, tube_form_regression, SurfaceGrid};
use tubetype::report::ResidualReport;
use tubetype::tubecalc::{
    anchor_infinite_type_certificate, anchor_iterates, coefficient_table, d_closed_form_check,
    d_lambda_recursion_check, second_iterate_report, tube_infinite_type_certificate, AnchorError,
    TubeError,
};

use crate::config::{RunConfig, SurfaceConfig};
use crate::report::{checks_csv, leads_csv, tables_csv, verdict_csv, Payload, Summary, TableJson};

/// Exact anchor iterates stay cheap far beyond any order the closed forms
/// are interesting at; this cap just keeps runaway requests from spinning.
pub const ANCHOR_ORDER_LIMIT: u32 = 64;
/// Tube iterates grow combinatorially; four applications is the deepest the
/// engine computes.
pub const TUBE_ORDER_LIMIT: u32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad config or surface spec: exit code 2.
    Config(String),
    /// A requested order is beyond what the engines compute: exit code 3.
    Engine(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Engine(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(_) => 3,
        }
    }
}

fn beltrami_err(e: BeltramiError) -> CliError {
    match e {
        BeltramiError::IterateCap { .. } => CliError::Engine(e.to_string()),
        BeltramiError::EmptyMask | BeltramiError::Surface(_) => CliError::Config(e.to_string()),
    }
}

fn chen_err(e: ChenTypeError) -> CliError {
    match e {
        ChenTypeError::MissingColumns { .. } => CliError::Engine(e.to_string()),
        ChenTypeError::DegenerateInput(_) => CliError::Config(e.to_string()),
        ChenTypeError::Beltrami(b) => beltrami_err(b),
    }
}

fn anchor_err(e: AnchorError) -> CliError {
    CliError::Engine(e.to_string())
}

fn tube_err(e: TubeError) -> CliError {
    CliError::Engine(e.to_string())
}

pub struct CommandOutput {
    pub payload: Payload,
    pub summary: Summary,
    pub lines: Vec<String>,
    pub csv: String,
    pub timings_ms: BTreeMap<String, f64>,
}

struct Timings {
    map: BTreeMap<String, f64>,
    started: Instant,
}

impl Timings {
    fn start() -> Self {
        Timings {
            map: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn lap(&mut self, key: &str) {
        self.map
            .insert(key.to_string(), self.started.elapsed().as_secs_f64() * 1e3);
        self.started = Instant::now();
    }

    fn finish(mut self, key: &str) -> BTreeMap<String, f64> {
        self.lap(key);
        self.map
    }
}

fn check_line(c: &ResidualReport) -> String {
    let (tag, cmp) = if c.pass {
        ("PASS", "<")
    } else {
        ("FAIL", ">=")
    };
    format!(
        "[{tag}] {} on {}: max {:.3e} {} tol {:.1e} (mean {:.3e} over {} samples)",
        c.check, c.surface, c.max_rel, cmp, c.tolerance, c.mean_rel, c.samples
    )
}

fn surface_or_err(cfg: &RunConfig, command: &str) -> Result<SurfaceConfig, CliError> {
    cfg.surface.clone().ok_or_else(|| {
        CliError::Config(format!(
            "{command} needs a surface; name one on the command line or in the config file"
        ))
    })
}

fn build_grid(
    cfg: &RunConfig,
    surface: &SurfaceConfig,
) -> Result<(SurfaceGrid, [usize; 2]), CliError> {
    let [nu, nv] = cfg.grid_for(surface);
    let grid = SurfaceGrid::build(
        &surface.to_spec(),
        nu,
        nv,
        cfg.exclusion_for(surface),
        cfg.mode(),
    )
    .map_err(|e| CliError::Config(format!("building the grid: {e}")))?;
    Ok((grid, [nu, nv]))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let surface = surface_or_err(cfg, "verify")?;
    let mode = cfg.mode();
    let tol = &cfg.tolerances;
    let mut timings = Timings::start();
    let (grid, [nu, nv]) = build_grid(cfg, &surface)?;
    timings.lap("grid_build");

    let mut checks = Vec::new();
    checks.push(mean_normal_check(&grid, tol.mean_normal, mode).map_err(beltrami_err)?);
    checks.push(gauss_map_eigen_check(&grid, tol.gauss_eigen, mode).map_err(beltrami_err)?);
    checks.push(position_identity_check(&grid, tol.position_identity, mode).map_err(beltrami_err)?);
    match &surface {
        SurfaceConfig::Catenoid { .. } => {
            checks.push(
                position_harmonic_check(&grid, tol.position_harmonic, mode)
                    .map_err(beltrami_err)?,
            );
        }
        SurfaceConfig::AnchorRing { a, r } => {
            checks.push(
                anchor_form_regression(*a, *r, cfg.samples, cfg.seed)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
            checks.push(
                anchor_exact_crosscheck(
                    *a,
                    *r,
                    nu,
                    nv,
                    cfg.exclusion_for(&surface),
                    1,
                    cfg.samples,
                    cfg.seed,
                    tol.crosscheck,
                    mode,
                )
                .map_err(beltrami_err)?,
            );
        }
        SurfaceConfig::Tube { curve, radius } => {
            let spine = curve.to_spec();
            checks.push(
                tube_form_regression(&spine, *radius, cfg.samples, cfg.seed)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
            checks.push(
                tube_coordinate_crosscheck(
                    &spine,
                    *radius,
                    nu,
                    nv,
                    cfg.exclusion_for(&surface),
                    "x1",
                    |_, _, jet| jet.x[0],
                    cfg.samples,
                    cfg.seed,
                    tol.crosscheck,
                    mode,
                )
                .map_err(beltrami_err)?,
            );
        }
        SurfaceConfig::Sphere { .. } => {}
    }

    let lines = checks.iter().map(check_line).collect();
    let summary = Summary::tally(checks.iter().map(|c| c.pass));
    let csv = checks_csv(&checks);
    Ok(CommandOutput {
        payload: Payload::Verify { checks },
        summary,
        lines,
        csv,
        timings_ms: timings.finish("checks"),
    })
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let surface = surface_or_err(cfg, "analyze")?;
    let [nu, nv] = cfg.grid_for(&surface);
    let classify_config = ClassifyConfig {
        nu,
        nv,
        exclusion: cfg.exclusion_for(&surface),
        k_max: cfg.k_max,
        finite_threshold: cfg.tolerances.finite_type,
        infinite_threshold: cfg.tolerances.infinite_type,
        rank_threshold: cfg.tolerances.rank,
        anchor_certificate_order: cfg.m_max,
        tube_certificate_order: cfg.lambda_max,
        mode: cfg.mode(),
    };
    let timings = Timings::start();
    let verdict = classify(&surface.to_spec(), &classify_config).map_err(chen_err)?;
    let timings_ms = timings.finish("classify");

    let mut lines = vec![format!(
        "eigenvalue fit on {}: lambda = {:.8}, residual {:.3e} ({} samples)",
        verdict.surface, verdict.eigen.lambda, verdict.eigen.residual, verdict.samples
    )];
    for rel in &verdict.relations {
        lines.push(format!(
            "minimal relation k = {}: residual {:.3e}{}",
            rel.k,
            rel.residual,
            if rel.rank_deficient {
                " (rank deficient)"
            } else {
                ""
            }
        ));
    }
    lines.push(format!(
        "iterate ranks {:?}, matrix residual {:.3e}",
        verdict.rank.ranks, verdict.matrix.residual
    ));
    if let Some(cert) = &verdict.certificate {
        lines.push(format!(
            "exact certificate: order {}, pass {}",
            cert.order, cert.pass
        ));
    }
    let conclusive = verdict.verdict != Verdict::Inconclusive;
    lines.push(format!(
        "[{}] verdict: {}",
        if conclusive { "PASS" } else { "FAIL" },
        verdict.verdict.label()
    ));

    let summary = Summary::tally([conclusive]);
    let csv = verdict_csv(&verdict);
    Ok(CommandOutput {
        payload: Payload::Analyze { verdict },
        summary,
        lines,
        csv,
        timings_ms,
    })
}

pub fn cmd_iterate(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let surface = surface_or_err(cfg, "iterate")?;
    let mode = cfg.mode();
    let mut timings = Timings::start();
    let (grid, _) = build_grid(cfg, &surface)?;
    timings.lap("grid_build");
    let matrix =
        IterateMatrix::from_grid(&grid, MetricChoice::Third, cfg.k_max, mode).map_err(chen_err)?;

    let depth = matrix.depth();
    let rows = matrix.rows();
    let column_rms: Vec<f64> = (0..=depth).map(|k| matrix.column_rms(k)).collect();
    let mut csv_bytes = Vec::new();
    matrix
        .write_csv(&mut csv_bytes)
        .map_err(|e| CliError::Config(format!("formatting iterate table: {e}")))?;
    let csv = String::from_utf8(csv_bytes).expect("CSV is ASCII");

    let mut lines = vec![format!(
        "iterates through k = {depth} at {rows} admissible grid samples"
    )];
    for (k, rms) in column_rms.iter().enumerate() {
        lines.push(format!("  rms |y_{k}| = {rms:.6e}"));
    }
    let summary = Summary::tally([rows > 0]);
    Ok(CommandOutput {
        payload: Payload::Iterate {
            rows,
            depth,
            column_rms,
        },
        summary,
        lines,
        csv,
        timings_ms: timings.finish("iterates"),
    })
}

pub fn cmd_anchor_cert(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let m_max = cfg.m_max;
    let timings = Timings::start();
    let certificate =
        anchor_infinite_type_certificate(m_max, ANCHOR_ORDER_LIMIT).map_err(anchor_err)?;
    let closed_forms = d_closed_form_check(m_max, ANCHOR_ORDER_LIMIT).map_err(anchor_err)?;
    let iterates = anchor_iterates(m_max, ANCHOR_ORDER_LIMIT).map_err(anchor_err)?;
    let tables: Vec<TableJson> = (1..=m_max)
        .map(|m| coefficient_table(&iterates[m as usize], m).map(|t| TableJson::from(&t)))
        .collect::<Result<_, _>>()
        .map_err(anchor_err)?;

    let mut lines = Vec::new();
    let mut outcomes = Vec::new();
    for (table, check) in tables.iter().zip(&closed_forms) {
        let pivot = table.d.last().expect("m >= 1");
        let ok = check.first_matches
            && check.last_matches
            && check.first_recursion_holds
            && check.last_recursion_holds;
        lines.push(format!(
            "[{}] m = {}: pivot {}/{}, closed forms {}",
            if ok { "PASS" } else { "FAIL" },
            table.m,
            pivot.num,
            pivot.den,
            if ok { "match" } else { "disagree" },
        ));
        outcomes.push(ok);
    }
    lines.push(format!(
        "[{}] {} through order {}",
        if certificate.pass { "PASS" } else { "FAIL" },
        certificate.relation,
        certificate.order
    ));
    outcomes.push(certificate.pass);

    let summary = Summary::tally(outcomes);
    let csv = tables_csv(&tables);
    Ok(CommandOutput {
        payload: Payload::AnchorCert {
            certificate,
            closed_forms,
            tables,
        },
        summary,
        lines,
        csv,
        timings_ms: timings.finish("certificate"),
    })
}

pub fn cmd_tube_cert(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let lambda_max = cfg.lambda_max;
    if lambda_max > TUBE_ORDER_LIMIT {
        return Err(CliError::Engine(format!(
            "tube certificate order {lambda_max} exceeds the engine limit {TUBE_ORDER_LIMIT}"
        )));
    }
    let bound = TUBE_ORDER_LIMIT + 1;
    let timings = Timings::start();
    let certificate = tube_infinite_type_certificate(lambda_max, bound).map_err(tube_err)?;
    let second_iterate = second_iterate_report(bound).map_err(tube_err)?;
    let lead_recursion = d_lambda_recursion_check(lambda_max, bound).map_err(tube_err)?;

    let mut lines = Vec::new();
    let mut outcomes = Vec::new();
    for lead in &lead_recursion {
        let ok = lead.matches_closed_form && lead.recursion_holds;
        lines.push(format!(
            "[{}] lambda = {}: lead {}/{}, closed form {}/{}",
            if ok { "PASS" } else { "FAIL" },
            lead.lambda,
            lead.coefficient.num,
            lead.coefficient.den,
            lead.closed_form.num,
            lead.closed_form.den,
        ));
        outcomes.push(ok);
    }
    lines.push(format!(
        "[{}] second iterate lead {} against recursion value {}; unit-lead reading consistent: {} ({})",
        if second_iterate.consistent { "PASS" } else { "FAIL" },
        second_iterate.computed.num,
        second_iterate.from_recursion.num,
        second_iterate.unit_lead_consistent,
        second_iterate.note,
    ));
    outcomes.push(second_iterate.consistent);
    lines.push(format!(
        "[{}] {} through order {}",
        if certificate.pass { "PASS" } else { "FAIL" },
        certificate.relation,
        certificate.order
    ));
    outcomes.push(certificate.pass);

    let summary = Summary::tally(outcomes);
    let csv = leads_csv(&lead_recursion);
    Ok(CommandOutput {
        payload: Payload::TubeCert {
            certificate,
            second_iterate,
            lead_recursion,
        },
        summary,
        lines,
        csv,
        timings_ms: timings.finish("certificate"),
    })
}
